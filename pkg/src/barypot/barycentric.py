"""Barycentric weights in log-domain, interpolation, and Lebesgue constants.

Weight magnitudes scale like exp((n+1)*potential) and leave native floating
point range for moderate n, so they are carried as (sign, log|w|) pairs and
only exponentiated after rescaling by the largest magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import NodeSet
from .potential import ExternalField, no_field
from .search import golden_max_vec

__all__ = [
    "WeightSet",
    "LebesgueReport",
    "weights_from_nodes",
    "weight_ratio_log",
    "interpolate",
    "basis_abs",
    "lebesgue_function",
    "lebesgue_constant",
]


@dataclass
class WeightSet:
    """Barycentric weights as alternating signs plus log magnitudes.

    normalization "raw" keeps the scale C = 1 of the defining products;
    "max_one" shifts log_abs so the largest magnitude is exactly 1.

    field/log_abs_raw record how the weights were generated, when known.
    They let Lebesgue evaluation run entirely in log-domain (see
    _basis_abs_exact), which is the only way to resolve constants that
    exceed the reciprocal rounding unit.
    """

    n: int
    signs: np.ndarray
    log_abs: np.ndarray
    normalization: str = "raw"
    field: ExternalField | None = None
    log_abs_raw: np.ndarray | None = None

    def __post_init__(self):
        self.signs = np.asarray(self.signs, dtype=float)
        self.log_abs = np.asarray(self.log_abs, dtype=float)
        if self.log_abs_raw is not None:
            self.log_abs_raw = np.asarray(self.log_abs_raw, dtype=float)
        if len(self.signs) != self.n + 1 or len(self.log_abs) != self.n + 1:
            raise ValueError("need n+1 signs and log magnitudes")
        if not np.all(np.abs(self.signs) == 1.0):
            raise ValueError("signs must be ±1")
        if self.normalization not in ("raw", "max_one"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.normalization == "max_one" and abs(self.log_abs.max()) > 1e-12:
            raise ValueError("max_one normalization requires max(log_abs) = 0")

    def scaled(self) -> np.ndarray:
        """Signed weights rescaled so the largest magnitude is 1 (overflow-safe)."""
        return self.signs * np.exp(self.log_abs - self.log_abs.max())

    def with_normalization(self, normalization: str) -> "WeightSet":
        if normalization == self.normalization:
            return self
        if normalization == "max_one":
            log_abs = self.log_abs - self.log_abs.max()
        else:
            raise ValueError("cannot recover the raw scale from a normalized set")
        return WeightSet(
            self.n,
            self.signs.copy(),
            log_abs,
            normalization,
            field=self.field,
            log_abs_raw=self.log_abs_raw,
        )


def weights_from_nodes(
    nodes: NodeSet,
    field: ExternalField | None = None,
    normalization: str = "raw",
) -> WeightSet:
    """log|w_k| = (n+1)·φ_n(x_k) - Σ_{i≠k} log|x_k - x_i|, sign (-1)^k."""
    if field is None:
        field = no_field()
    if field.kind == "poles" and field.total_multiplicity > nodes.n:
        raise ValueError("pole count m exceeds n")
    x = nodes.nodes
    n = nodes.n
    diff = np.abs(x[:, None] - x[None, :])
    if np.any(diff[~np.eye(n + 1, dtype=bool)] == 0.0):
        raise ValueError("coincident nodes")
    logdiff = np.log(np.where(diff == 0.0, 1.0, diff))
    phi = np.asarray(field.phi_discrete(x, n), dtype=float)
    log_abs_raw = (n + 1) * phi - logdiff.sum(axis=1)
    signs = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    log_abs = log_abs_raw.copy()
    if normalization == "max_one":
        log_abs = log_abs - log_abs.max()
    return WeightSet(
        n=n,
        signs=signs,
        log_abs=log_abs,
        normalization=normalization,
        field=field,
        log_abs_raw=log_abs_raw,
    )


def weight_ratio_log(ws: WeightSet) -> float:
    """log(max|w| / min|w|); invariant under the normalization choice."""
    return float(ws.log_abs.max() - ws.log_abs.min())


def interpolate(nodes: NodeSet, ws: WeightSet, values, x):
    """Second-form barycentric evaluation; exact at nodes."""
    values = np.asarray(values, dtype=float)
    if len(values) != nodes.n + 1:
        raise ValueError("need n+1 data values")
    w = ws.scaled()
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    diff = xa[:, None] - nodes.nodes[None, :]
    exact = diff == 0.0
    safe = np.where(exact, 1.0, diff)
    terms = w / safe
    out = (terms @ values) / terms.sum(axis=1)
    hit = exact.any(axis=1)
    if np.any(hit):
        out[hit] = values[np.argmax(exact[hit], axis=1)]
    return float(out[0]) if scalar else out


def _basis_abs_exact(nodes: NodeSet, ws: WeightSet, xa: np.ndarray) -> np.ndarray:
    """|R_k(x)| in pure log-domain for product-generated weights.

    For weights w_k = Q(x_k) / Π_{i≠k}(x_k - x_i) with a polynomial
    Q(x) = Π_j (x - p_j) of degree m <= n (m = 0 for the polynomial case),
    Lagrange interpolation of Q gives the denominator identity
    Σ_j w_j/(x - x_j) = Q(x) / Π_i (x - x_i) exactly, so every |R_k(x)| is
    a single exponential of sums of logs.  No cancellation occurs at any
    magnitude, unlike the direct quotient, whose denominator drowns in
    rounding noise once Λ_n exceeds ~1/eps.
    """
    n = nodes.n
    diff = xa[:, None] - nodes.nodes[None, :]
    exact = diff == 0.0
    logdist = np.log(np.abs(np.where(exact, 1.0, diff)))
    log_q = (n + 1) * np.asarray(ws.field.phi_discrete(xa, n), dtype=float)
    log_denom = log_q - logdist.sum(axis=1)
    out = np.exp(ws.log_abs_raw[None, :] - logdist - log_denom[:, None])
    hit = exact.any(axis=1)
    if np.any(hit):
        out[hit] = exact[hit].astype(float)
    return out


def _basis_abs_matrix(nodes: NodeSet, ws: WeightSet, xa: np.ndarray) -> np.ndarray:
    """|R_k(x)| for all k, rows indexed by x."""
    if (
        ws.log_abs_raw is not None
        and ws.field is not None
        and ws.field.kind in ("none", "poles")
    ):
        return _basis_abs_exact(nodes, ws, xa)
    w = ws.scaled()
    diff = xa[:, None] - nodes.nodes[None, :]
    exact = diff == 0.0
    safe = np.where(exact, 1.0, diff)
    terms = w / safe
    denom = np.abs(terms.sum(axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(terms) / denom[:, None]
    hit = exact.any(axis=1)
    if np.any(hit):
        out[hit] = exact[hit].astype(float)
    return out


def basis_abs(nodes: NodeSet, ws: WeightSet, k: int, x):
    """|R_k(x)|: 1 at x_k, 0 at the other nodes."""
    if not 0 <= k <= nodes.n:
        raise ValueError("basis index out of range")
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = _basis_abs_matrix(nodes, ws, xa)[:, k]
    return float(out[0]) if scalar else out


def lebesgue_function(nodes: NodeSet, ws: WeightSet, x):
    """Λ_n(x) = Σ_k |R_k(x)|; exactly 1 at the nodes."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = _basis_abs_matrix(nodes, ws, xa).sum(axis=1)
    return float(out[0]) if scalar else out


@dataclass
class LebesgueReport:
    n: int
    lam: float
    argmax_x: float
    per_gap_max: tuple  # ((x*, Λ(x*)) per maximization segment)


def lebesgue_constant(
    nodes: NodeSet, ws: WeightSet, samples_per_gap: int = 30
) -> LebesgueReport:
    """Λ_n by per-gap scan plus golden-section refinement of each best bracket.

    Segments are the node gaps plus [-1, x_0] and [x_n, 1] when the nodes do
    not reach the endpoints.
    """
    if samples_per_gap < 10:
        raise ValueError("samples_per_gap must be >= 10")
    x = nodes.nodes
    lo = list(x[:-1])
    hi = list(x[1:])
    if x[0] > -1.0:
        lo.insert(0, -1.0)
        hi.insert(0, float(x[0]))
    if x[-1] < 1.0:
        lo.append(float(x[-1]))
        hi.append(1.0)
    lo = np.array(lo)
    hi = np.array(hi)
    # scan: keep the best three-point bracket per segment
    frac = np.linspace(0.0, 1.0, samples_per_gap + 2)[1:-1]
    pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    vals = lebesgue_function(nodes, ws, pts.ravel()).reshape(pts.shape)
    best = np.argmax(vals, axis=1)
    idx = np.arange(len(lo))
    a = np.where(best == 0, lo, pts[idx, np.maximum(best - 1, 0)])
    b = np.where(best == len(frac) - 1, hi, pts[idx, np.minimum(best + 1, len(frac) - 1)])
    f = lambda t: lebesgue_function(nodes, ws, t)
    xs, fs = golden_max_vec(f, a, b, xtol=1e-10)
    order = np.lexsort((xs, -fs))  # max by value, tie -> smaller x
    k = order[0]
    return LebesgueReport(
        n=nodes.n,
        lam=float(fs[k]),
        argmax_x=float(xs[k]),
        per_gap_max=tuple((float(px), float(pv)) for px, pv in zip(xs, fs)),
    )
