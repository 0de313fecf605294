"""Inter-potential points, potential-gap measurement, and the bound checks
linking barycentric weights and Lebesgue constants to the potential."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barycentric import (
    WeightSet,
    interpolate,
    lebesgue_constant,
    lebesgue_function,
    weight_ratio_log,
)
from .density import NodeSet, SpacingProfile
from .potential import (
    ContinuousPotential,
    DiscretePotential,
    PotentialExtrema,
    potential_extrema,
)

__all__ = [
    "InterPotentialSet",
    "DeltaBounds",
    "BoundsReport",
    "ConvexityError",
    "inter_potential_points",
    "measure_delta",
    "check_weight_bounds",
    "check_ratio_bounds",
    "check_lebesgue_lower",
    "check_lebesgue_upper",
    "lebesgue_upper_value",
    "build_bounds_report",
    "pointwise_growth_rate",
    "shifted_x_hat",
    "count_high_potential_nodes",
    "convergence_experiment",
]


class ConvexityError(RuntimeError):
    """The discrete potential failed its convexity precondition in a gap."""

    def __init__(self, gap_index: int, detail: str):
        super().__init__(f"convexity violation in gap {gap_index}: {detail}")
        self.gap_index = gap_index


@dataclass
class InterPotentialSet:
    """The unique stationary point of U_n inside each node gap."""

    zetas: np.ndarray
    residuals: np.ndarray

    def __post_init__(self):
        self.zetas = np.asarray(self.zetas, dtype=float)
        self.residuals = np.asarray(self.residuals, dtype=float)


def inter_potential_points(Un: DiscretePotential) -> InterPotentialSet:
    """One root of U_n' per gap by bisection, refined to |U_n'| <= 1e-10."""
    x = Un.nodes.nodes
    gaps = np.diff(x)
    # convexity spot check, three interior points per gap
    for frac in (0.25, 0.5, 0.75):
        pts = x[:-1] + frac * gaps
        d2 = Un.deriv(pts, order=2)
        if np.any(d2 <= 0.0):
            i = int(np.argmax(d2 <= 0.0))
            raise ConvexityError(i + 1, f"U_n''({pts[i]:.6g}) = {d2[i]:.6g} <= 0")
    ulp = 8.0 * np.spacing(np.maximum(np.abs(x[:-1]), np.abs(x[1:])))
    eps = np.maximum(1e-13 * gaps, ulp)
    lo = x[:-1] + eps
    hi = x[1:] - eps
    dlo = Un.deriv(lo, order=1)
    dhi = Un.deriv(hi, order=1)
    if np.any(dlo >= 0.0) or np.any(dhi <= 0.0):
        i = int(np.argmax((dlo >= 0.0) | (dhi <= 0.0)))
        raise ConvexityError(i + 1, "no derivative sign change across the gap")
    for _ in range(55):
        mid = 0.5 * (lo + hi)
        neg = Un.deriv(mid, order=1) < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    zetas = 0.5 * (lo + hi)
    for _ in range(2):  # Newton polish inside the bracket
        step = Un.deriv(zetas, order=1) / Un.deriv(zetas, order=2)
        zetas = np.clip(zetas - step, lo, hi)
    residuals = np.abs(Un.deriv(zetas, order=1))
    bad = residuals > 1e-10
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ConvexityError(i + 1, f"stationary-point residual {residuals[i]:.3e}")
    return InterPotentialSet(zetas=zetas, residuals=residuals)


@dataclass
class DeltaBounds:
    """One-sided maxima of U_n - U over the inter-potential points."""

    delta_minus: float
    delta_plus: float

    @property
    def total(self) -> float:
        return self.delta_minus + self.delta_plus


def measure_delta(
    Un: DiscretePotential, U: ContinuousPotential, zetas: InterPotentialSet
) -> DeltaBounds:
    gap = Un.eval(zetas.zetas) - U.eval(zetas.zetas)
    return DeltaBounds(
        delta_minus=max(0.0, float(-gap.min())),
        delta_plus=max(0.0, float(gap.max())),
    )


def check_weight_bounds(
    nodes: NodeSet,
    ws: WeightSet,
    U: ContinuousPotential,
    Un: DiscretePotential,
    zetas: InterPotentialSet,
    delta: DeltaBounds,
    spacing: SpacingProfile,
    kn_variant: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-weight log-domain evaluation of the two-sided weight bound.

    Weight i is compared at ζ_{k_i}, the better of its two adjacent
    inter-potential points under u_i(ζ) = U_n(ζ) + log|ζ - x_i|/(n+1);
    boundary weights use their single neighbor (``kn_variant`` selects the
    index of the last weight's neighbor; default n, i.e. ζ_n).
    Returns (lower_ok, upper_ok) boolean arrays.
    """
    if ws.normalization != "raw":
        raise ValueError("weight bounds require raw (C=1) weights")
    if not spacing.fitted:
        raise ValueError("weight bounds need a fitted spacing profile")
    n = nodes.n
    x = nodes.nodes
    z = zetas.zetas
    uz = Un.eval(z)

    def u_i(i: int, j: int) -> float:
        return float(uz[j] + math.log(abs(z[j] - x[i])) / (n + 1))

    k_last = n if kn_variant is None else kn_variant
    zk = np.empty(n + 1, dtype=int)
    zk[0] = 1
    zk[n] = k_last
    for i in range(1, n):
        zk[i] = i if u_i(i, i - 1) >= u_i(i, i) else i + 1
    zk -= 1  # zeta index -> 0-based array index
    Uzk = U.eval(z[zk])
    a1, b1, a2, b2 = spacing.a1, spacing.b1, spacing.a2, spacing.b2
    lower = (
        math.log(a1) - 1.0 - (b1 + 1.0) * math.log(n)
        + (n + 1) * (Uzk - delta.delta_minus)
    )
    upper = (
        math.log(a2) - b2 * math.log(n)
        + (n + 1) * (Uzk + delta.delta_plus)
    )
    return ws.log_abs > lower, ws.log_abs < upper


@dataclass
class BoundsReport:
    """Measured quantities plus theorem bound values for one n."""

    n: int
    extrema: PotentialExtrema
    delta: DeltaBounds
    spacing: SpacingProfile
    weight_ratio_log: float
    lebesgue: float
    ok_thm34: bool
    ratio_lower_log: float = math.nan
    ratio_upper_log: float = math.nan
    lebesgue_lower_log: float = math.nan
    lebesgue_upper: float | None = None  # None when d > the equilibrium gate
    ok_cor: bool = False
    ok_thm41: bool = False
    ok_thm53: bool | None = None

    @property
    def rho(self) -> float:
        return math.exp(self.extrema.d)


EQUILIBRIUM_GATE = 0.01  # max potential range admitted as "constant U"


def check_ratio_bounds(report: BoundsReport) -> tuple[bool, bool]:
    """Two-sided weight-ratio bound, evaluated in log-domain."""
    s = report.spacing
    n = report.n
    algebraic = (
        math.log(s.a1) - math.log(s.a2) - 1.0 + (s.b2 - s.b1 - 1.0) * math.log(n)
    )
    core = (n + 1) * report.extrema.d
    lower = algebraic - (n + 1) * report.delta.total + core
    upper = -algebraic + (n + 1) * report.delta.total + core
    return bool(lower <= report.weight_ratio_log), bool(report.weight_ratio_log <= upper)


def check_lebesgue_lower(report: BoundsReport) -> bool:
    """Λ_n against its potential-difference lower bound, in log-domain."""
    s = report.spacing
    n = report.n
    bound_log = (
        math.log(s.a1) - math.log(2.0) - 1.0 - (s.b1 + 1.0) * math.log(n)
        - (n + 1) * report.delta.total + (n + 1) * report.extrema.d
    )
    return bool(math.log(report.lebesgue) >= bound_log)


def lebesgue_upper_value(report: BoundsReport, proof_constant: bool = False) -> float:
    """The equilibrium-regime upper bound; proof_constant doubles the
    exponential rate (the weaker constant appearing in the proof)."""
    s = report.spacing
    n = report.n
    rate = (2.0 if proof_constant else 1.0) * (n + 1) * report.delta.total + 1.0
    return math.exp(rate) * (5.0 + 2.0 * s.b1 * math.log(s.a1) + 2.0 * s.b1 * math.log(n))


def check_lebesgue_upper(report: BoundsReport) -> bool | None:
    """Equilibrium upper bound; None when the constant-potential gate fails."""
    if report.extrema.d > EQUILIBRIUM_GATE:
        return None
    return bool(report.lebesgue <= lebesgue_upper_value(report))


def build_bounds_report(
    nodes: NodeSet,
    ws: WeightSet,
    U: ContinuousPotential,
    Un: DiscretePotential,
    spacing: SpacingProfile,
    samples_per_gap: int = 30,
) -> BoundsReport:
    """Run the full measurement + bound pipeline for one n."""
    zetas = inter_potential_points(Un)
    delta = measure_delta(Un, U, zetas)
    extrema = potential_extrema(U)
    lo_ok, hi_ok = check_weight_bounds(nodes, ws, U, Un, zetas, delta, spacing)
    leb = lebesgue_constant(nodes, ws, samples_per_gap=samples_per_gap)
    report = BoundsReport(
        n=nodes.n,
        extrema=extrema,
        delta=delta,
        spacing=spacing,
        weight_ratio_log=weight_ratio_log(ws),
        lebesgue=leb.lam,
        ok_thm34=bool(np.all(lo_ok) and np.all(hi_ok)),
    )
    n = nodes.n
    algebraic = (
        math.log(spacing.a1) - math.log(spacing.a2) - 1.0
        + (spacing.b2 - spacing.b1 - 1.0) * math.log(n)
    )
    core = (n + 1) * extrema.d
    report.ratio_lower_log = algebraic - (n + 1) * delta.total + core
    report.ratio_upper_log = -algebraic + (n + 1) * delta.total + core
    report.lebesgue_lower_log = (
        math.log(spacing.a1) - math.log(2.0) - 1.0 - (spacing.b1 + 1.0) * math.log(n)
        - (n + 1) * delta.total + core
    )
    lo, hi = check_ratio_bounds(report)
    report.ok_cor = lo and hi
    report.ok_thm41 = check_lebesgue_lower(report)
    report.ok_thm53 = check_lebesgue_upper(report)
    if report.ok_thm53 is not None:
        report.lebesgue_upper = lebesgue_upper_value(report)
    return report


def shifted_x_hat(nodes: NodeSet, x_hat: float) -> float:
    """x̂ pushed half a gap to the right when it (nearly) hits a node, so
    pointwise Lebesgue series never degenerate to the node value 1."""
    x = nodes.nodes
    i = int(np.argmin(np.abs(x - x_hat)))
    if abs(x[i] - x_hat) > 1e-12:
        return x_hat
    gap = x[i + 1] - x[i] if i < nodes.n else x[i] - x[i - 1]
    return float(x[i] + 0.5 * gap)


def pointwise_growth_rate(sweep, x_hat: float) -> float:
    """Least-squares slope of log Λ_n(x̂) vs n over a sweep of (nodes, weights).

    The smallest sweep entry is excluded to damp transients; when x̂ lands
    on a node it is shifted by half the local gap.
    """
    if len(sweep) < 3:
        raise ValueError("need at least 3 sweep entries")
    entries = sorted(sweep, key=lambda e: e[0].n)[1:]
    ns, logs = [], []
    for nodes, ws in entries:
        xh = shifted_x_hat(nodes, x_hat)
        ns.append(nodes.n)
        logs.append(math.log(lebesgue_function(nodes, ws, xh)))
    return float(np.polyfit(ns, logs, 1)[0])


def count_high_potential_nodes(
    nodes: NodeSet, U: ContinuousPotential, c: float
) -> int:
    """Number of nodes whose potential exceeds max(U) - c."""
    if c <= 0:
        raise ValueError("c must be positive")
    u_max = potential_extrema(U).u_max
    return int(np.sum(U.eval(nodes.nodes) > u_max - c))


_TEST_FUNCTIONS = {
    "runge": lambda x: 1.0 / (1.0 + 25.0 * x * x),
    "exp": np.exp,
    "abs": np.abs,
}


def convergence_experiment(nodesets, weightsets, f_name: str, grid: int = 2001):
    """Per-n sup-norm interpolation error of a named test function on a
    uniform grid, skipping exact node hits."""
    if f_name not in _TEST_FUNCTIONS:
        raise ValueError(f"unknown test function {f_name!r}; "
                         f"choose from {sorted(_TEST_FUNCTIONS)}")
    f = _TEST_FUNCTIONS[f_name]
    xs = np.linspace(-1.0, 1.0, grid)
    errors = []
    for nodes, ws in zip(nodesets, weightsets):
        keep = ~np.isin(xs, nodes.nodes)
        vals = interpolate(nodes, ws, f(nodes.nodes), xs[keep])
        errors.append(float(np.max(np.abs(vals - f(xs[keep])))))
    return errors
