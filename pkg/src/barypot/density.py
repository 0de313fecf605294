"""Densities on [-1,1], quantile node families, and node-spacing profiles.

A density is a positive weight function w with unit mass on [-1,1].  Node
families are generated by the quantile rule cdf(x_i) = i/n, which pins the
endpoints and makes the counting measure converge weakly to w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erf as _erf_vec

__all__ = [
    "DensitySpec",
    "NodeSet",
    "SpacingProfile",
    "erf",
    "density_eval",
    "cdf",
    "generate_nodes",
    "chebyshev_nodes",
    "equidistant_nodes",
    "verify_obedience",
    "spacing_profile",
]

# normalization of exp(-t^2) restricted to [-1,1]
GAUSS_NORM = 1.0 / (math.sqrt(math.pi) * math.erf(1.0))

_KINDS = ("uniform", "chebyshev", "truncated_gaussian", "user_tabulated")


class DomainError(ValueError):
    """Argument outside [-1,1]."""


def erf(x: float) -> float:
    """Gauss error function."""
    return math.erf(x)


@dataclass
class DensitySpec:
    """A named positive density w on [-1,1] with w, CDF and helpers.

    For ``user_tabulated`` the samples are interpolated cubically and
    renormalized at construction; the other kinds use closed forms.
    Immutable by convention after construction.
    """

    kind: str
    params: tuple = ()
    quadrature_order: int = 32
    samples: tuple | None = None  # (t, w) arrays for user_tabulated

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "user_tabulated":
            if self.samples is None:
                raise ValueError("user_tabulated requires samples=(t, w)")
            t = np.asarray(self.samples[0], dtype=float)
            v = np.asarray(self.samples[1], dtype=float)
            if t.ndim != 1 or t.shape != v.shape or len(t) < 4:
                raise ValueError("samples must be two equal 1-d arrays, >= 4 points")
            if t[0] != -1.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0):
                raise ValueError("sample abscissae must increase from -1 to 1")
            spline = CubicSpline(t, v)
            mass = float(spline.integrate(-1.0, 1.0))
            if not mass > 0:
                raise ValueError("tabulated density has nonpositive mass")
            self._spline = CubicSpline(t, v / mass)
            self._spline_cdf = self._spline.antiderivative()
        if self.quadrature_order < 1:
            raise ValueError("quadrature_order must be positive")
        grid = np.linspace(-1.0, 1.0, 1001)
        with np.errstate(divide="ignore"):
            vals = self.pdf(grid)
        if not np.all(vals > 0):
            raise ValueError(f"density {self.kind!r} is not positive on [-1,1]")
        total = self.cdf_scalar(1.0)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"density mass {total!r} != 1 within 1e-10")

    # -- evaluators (accept scalars or arrays) --------------------------------

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "uniform":
            return np.full_like(t, 0.5)
        if self.kind == "chebyshev":
            with np.errstate(divide="ignore"):
                return 1.0 / (math.pi * np.sqrt(1.0 - t * t))
        if self.kind == "truncated_gaussian":
            return GAUSS_NORM * np.exp(-t * t)
        return self._spline(t)

    def cdf_fn(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "uniform":
            return 0.5 * (x + 1.0)
        if self.kind == "chebyshev":
            return 0.5 + np.arcsin(np.clip(x, -1.0, 1.0)) / math.pi
        if self.kind == "truncated_gaussian":
            e1 = math.erf(1.0)
            return (_erf_vec(x) + e1) / (2.0 * e1)
        return self._spline_cdf(x) - self._spline_cdf(-1.0)

    def cdf_scalar(self, x: float) -> float:
        return float(self.cdf_fn(x))


def _check_domain(t) -> None:
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("argument outside [-1,1]")


def density_eval(spec: DensitySpec, t):
    """w(t) for t in [-1,1]."""
    _check_domain(t)
    out = spec.pdf(t)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def cdf(spec: DensitySpec, x):
    """∫_{-1}^{x} w(t) dt for x in [-1,1]."""
    _check_domain(x)
    out = spec.cdf_fn(x)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


@dataclass
class NodeSet:
    """Ordered interpolation nodes x_0 < ... < x_n on [-1,1]."""

    n: int
    nodes: np.ndarray
    source: str = "explicit"

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.n < 1 or len(self.nodes) != self.n + 1:
            raise ValueError("need n >= 1 and n+1 nodes")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if self.nodes[0] < -1.0 or self.nodes[-1] > 1.0:
            raise ValueError("nodes must lie in [-1,1]")

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.nodes)


class QuantileSolveError(RuntimeError):
    """Quantile root-solve failed to meet the CDF residual contract."""


def generate_nodes(spec: DensitySpec, n: int) -> NodeSet:
    """Nodes with cdf(x_i) = i/n; x_0 = -1 and x_n = 1 are pinned."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = np.arange(1, n) / n
    lo = np.full(n - 1, -1.0)
    hi = np.full(n - 1, 1.0)
    # bracketing bisection: CDF is strictly monotone, so this cannot fail
    for _ in range(46):
        mid = 0.5 * (lo + hi)
        below = spec.cdf_fn(mid) < q
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    # one Newton polish using w(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = (spec.cdf_fn(x) - q) / spec.pdf(x)
    x = np.clip(x - np.where(np.isfinite(step), step, 0.0), -1.0, 1.0)
    resid = np.abs(spec.cdf_fn(x) - q)
    if resid.size and resid.max() > 1e-10:
        raise QuantileSolveError(
            f"quantile residual {resid.max():.3e} exceeds 1e-10 for {spec.kind}"
        )
    nodes = np.concatenate(([-1.0], x, [1.0]))
    return NodeSet(n=n, nodes=nodes, source="quantile")


def chebyshev_nodes(n: int) -> NodeSet:
    """Chebyshev points of the first kind: the n+1 roots of T_{n+1}, ascending."""
    i = np.arange(n + 1)
    nodes = -np.cos((2 * i + 1) * math.pi / (2 * (n + 1)))
    return NodeSet(n=n, nodes=nodes, source="chebyshev_closed_form")


def equidistant_nodes(n: int) -> NodeSet:
    nodes = np.linspace(-1.0, 1.0, n + 1)
    return NodeSet(n=n, nodes=nodes, source="equidistant_closed_form")


def verify_obedience(nodes: NodeSet, spec: DensitySpec, a: float, b: float) -> float:
    """Discrepancy |n_[a,b]/(n+1) - ∫_a^b w| of the interval-count rule."""
    if not (-1.0 <= a < b <= 1.0):
        raise ValueError("need -1 <= a < b <= 1")
    count = int(np.sum((nodes.nodes >= a) & (nodes.nodes <= b)))
    mass = cdf(spec, b) - cdf(spec, a)
    return abs(count / (nodes.n + 1) - mass)


@dataclass
class SpacingProfile:
    """Raw gap extremes plus fitted gap envelopes a1 n^{-b1} <= gap <= a2 n^{-b2}."""

    min_gap: float
    max_gap: float
    a1: float | None = None
    b1: float | None = None
    a2: float | None = None
    b2: float | None = None
    per_n: tuple = ()  # (n, min_gap, max_gap) per fitted node set

    @property
    def fitted(self) -> bool:
        return self.b1 is not None


def spacing_profile(nodesets: list[NodeSet]) -> SpacingProfile:
    """Measure gaps; with >= 2 distinct n, fit the power-law envelopes.

    The exponents come from least squares on log(gap) vs log(n); the
    prefactors are then adjusted so the inequalities hold exactly on the
    supplied sweep.
    """
    if not nodesets:
        raise ValueError("need at least one node set")
    per_n = [(ns.n, float(ns.gaps.min()), float(ns.gaps.max())) for ns in nodesets]
    min_gap = min(p[1] for p in per_n)
    max_gap = max(p[2] for p in per_n)
    ns = np.array([p[0] for p in per_n], dtype=float)
    if len(set(p[0] for p in per_n)) < 2:
        return SpacingProfile(min_gap, max_gap, per_n=tuple(per_n))
    logn = np.log(ns)
    b1 = -np.polyfit(logn, np.log([p[1] for p in per_n]), 1)[0]
    b2 = -np.polyfit(logn, np.log([p[2] for p in per_n]), 1)[0]
    a1 = min(p[1] * p[0] ** b1 for p in per_n)
    a2 = max(p[2] * p[0] ** b2 for p in per_n)
    return SpacingProfile(min_gap, max_gap, a1, b1, a2, b2, tuple(per_n))
