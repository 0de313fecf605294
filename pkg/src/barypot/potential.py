"""Logarithmic potentials of densities, external fields, and node sets.

The continuous potential is U(x) = ∫ log(1/|x-t|) w(t) dt + φ(x); the
discrete potential replaces the integral by the node average and the field
by its pole-generated (or prescribed) counterpart.  Uniform and Chebyshev
densities use closed forms; everything else goes through quadrature with
the log singularity subtracted analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .density import DensitySpec, DomainError, NodeSet
from .search import golden_max, golden_min

__all__ = [
    "ExternalField",
    "ContinuousPotential",
    "DiscretePotential",
    "PotentialExtrema",
    "log_potential",
    "log_potential_deriv",
    "continuous_potential_eval",
    "potential_extrema",
    "discrete_potential_eval",
    "discrete_potential_deriv",
    "complex_grid_sample",
    "no_field",
    "half_i_functional_field",
    "half_i_pole_field",
    "pole_field",
    "equilibrium_field",
]

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# quadrature machinery

@lru_cache(maxsize=None)
def _gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=None)
def _graded_offsets(order: int, levels: int = 45):
    """Relative abscissae/weights for geometrically graded panels on (0, 1]."""
    glx, glw = _gl_rule(order)
    edges = 0.5 ** np.arange(levels + 1)  # 1, 1/2, ..., 2^-levels
    lo, hi = edges[1:], edges[:-1]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = (mid[:, None] + half[:, None] * glx[None, :]).ravel()
    wts = (half[:, None] * glw[None, :]).ravel()
    return pts, wts


def _xlogx(y):
    """y*log(y) with the 0*log(0)=0 limit."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = y[pos] * np.log(y[pos])
    return out


def _log_kernel_mass(x):
    """∫_{-1}^{1} log|x-t| dt = (1+x)log(1+x) + (1-x)log(1-x) - 2."""
    return _xlogx(1.0 + x) + _xlogx(1.0 - x) - 2.0


def _log_potential_quadrature(spec: DensitySpec, x: np.ndarray) -> np.ndarray:
    """-∫ log|x-t| w(t) dt by singularity subtraction on graded panels."""
    pts, wts = _graded_offsets(spec.quadrature_order)
    wx = spec.pdf(x)
    acc = wx * _log_kernel_mass(x)
    for side in (+1.0, -1.0):
        length = (1.0 - side * x).clip(min=0.0)  # distance from x to ±1
        t = x[:, None] + side * length[:, None] * pts[None, :]
        t = np.clip(t, -1.0, 1.0)
        diff = spec.pdf(t) - wx[:, None]
        with np.errstate(divide="ignore"):
            logdist = np.log(length[:, None] * pts[None, :])
        contrib = np.einsum("ij,ij,j->i", np.where(length[:, None] > 0, diff, 0.0),
                            np.where(np.isfinite(logdist), logdist, 0.0), wts)
        acc = acc + length * contrib
    return -acc


def _log_potential_deriv_quadrature(spec: DensitySpec, x: np.ndarray) -> np.ndarray:
    """d/dx of -∫ log|x-t| w(t) dt, by the same subtraction: the principal
    value of ∫ w(t)/(x-t) dt splits into w(x)·log((1+x)/(1-x)) plus a
    regular integrand (w(t)-w(x))/(x-t) on the graded panels."""
    pts, wts = _graded_offsets(spec.quadrature_order)
    wx = spec.pdf(x)
    acc = wx * (np.log1p(x) - np.log1p(-x))
    ratio = wts / pts
    for side in (+1.0, -1.0):
        length = (1.0 - side * x).clip(min=0.0)
        t = np.clip(x[:, None] + side * length[:, None] * pts[None, :], -1.0, 1.0)
        diff = spec.pdf(t) - wx[:, None]
        contrib = np.einsum("ij,j->i", np.where(length[:, None] > 0, diff, 0.0), ratio)
        acc = acc - side * contrib
    return -acc


def log_potential_deriv(spec: DensitySpec, x):
    """d/dx ∫ log(1/|x-t|) w(t) dt for x in (-1,1)."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xa) >= 1.0):
        raise DomainError("log_potential_deriv argument outside (-1,1)")
    if spec.kind == "uniform":
        out = -0.5 * (np.log1p(xa) - np.log1p(-xa))
    elif spec.kind == "chebyshev":
        out = np.zeros_like(xa)
    else:
        out = _log_potential_deriv_quadrature(spec, xa)
    return float(out[0]) if scalar else out


def _log_potential_complex(spec: DensitySpec, z: np.ndarray) -> np.ndarray:
    """-∫ log|z-t| w(t) dt for z off the interval (no singularity)."""
    order = spec.quadrature_order
    glx, glw = _gl_rule(order)
    edges = np.linspace(-1.0, 1.0, 65)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    t = (mid[:, None] + half[:, None] * glx[None, :]).ravel()
    w = (half[:, None] * glw[None, :]).ravel() * spec.pdf(t)
    zf = np.asarray(z, dtype=complex).ravel()
    with np.errstate(divide="ignore"):
        vals = -np.log(np.abs(zf[:, None] - t[None, :])) @ w
    return vals.reshape(np.shape(z))


def log_potential(spec: DensitySpec, x, method: str = "auto"):
    """∫ log(1/|x-t|) w(t) dt for x in [-1,1].

    method: "auto" uses closed forms for uniform/chebyshev, "quadrature"
    forces the subtraction path (used to cross-validate the two).
    """
    scalar = np.isscalar(x) or np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("log_potential argument outside [-1,1]")
    if method == "auto" and spec.kind == "uniform":
        out = 1.0 - 0.5 * (_xlogx(1.0 + xa) + _xlogx(1.0 - xa))
    elif method == "auto" and spec.kind == "chebyshev":
        out = np.full_like(xa, LOG2)
    else:
        if spec.kind == "chebyshev":
            raise ValueError("quadrature path unavailable for the endpoint-singular "
                             "chebyshev density; use the closed form")
        out = _log_potential_quadrature(spec, xa)
    return float(out[0]) if scalar else out


def _log_potential_any(spec: DensitySpec, z):
    """Density potential for real-on-interval or complex arguments."""
    z = np.asarray(z)
    if np.iscomplexobj(z):
        out = np.empty(z.shape, dtype=float)
        on_axis = np.abs(z.imag) == 0.0
        inside = on_axis & (np.abs(z.real) <= 1.0)
        if np.any(inside):
            out[inside] = np.atleast_1d(log_potential(spec, z.real[inside]))
        rest = ~inside
        if np.any(rest):
            if spec.kind == "uniform":
                # closed form extends: Re[(1+z)log(1+z) + (1-z)log(1-z)]
                zr = z[rest]
                val = 1.0 - 0.5 * np.real((1 + zr) * np.log(1 + zr)
                                          + (1 - zr) * np.log(1 - zr))
                out[rest] = val
            else:
                out[rest] = _log_potential_complex(spec, z[rest])
        return out
    return np.atleast_1d(log_potential(spec, z)).reshape(np.shape(np.atleast_1d(z)))


# ---------------------------------------------------------------------------
# external fields

def _abs_log(x, p: complex):
    """log|x-p| for real or complex x."""
    x = np.asarray(x)
    with np.errstate(divide="ignore"):  # -inf sentinel at exact pole hits
        if np.iscomplexobj(x):
            return np.log(np.abs(x - p))
        a, b = p.real, p.imag
        return 0.5 * np.log((x - a) ** 2 + b * b)


_BUILTIN_FIELDS = {
    # the ±0.5i field used throughout the introduction's tests
    "half_i_pair": lambda x: 0.5 * _abs_log(x, 0.5j) + 0.5 * _abs_log(x, -0.5j),
}

_BUILTIN_FIELD_DERIVS = {
    # (first, second) derivatives of the entries above
    "half_i_pair": (
        lambda x: x / (x * x + 0.25),
        lambda x: (0.25 - x * x) / (x * x + 0.25) ** 2,
    ),
}


@dataclass
class ExternalField:
    """External field φ: none, explicit poles, a named functional, or the
    equilibrium construction φ = u_bar - U_w."""

    kind: str = "none"
    poles: tuple = ()  # ((complex pole, int multiplicity), ...)
    u_bar: float | None = None
    density: DensitySpec | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("none", "poles", "functional", "equilibrium"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "poles":
            if not self.poles:
                raise ValueError("poles field needs at least one pole")
            for p, m in self.poles:
                p = complex(p)
                if m < 1:
                    raise ValueError("pole multiplicity must be >= 1")
                if p.imag == 0.0 and abs(p.real) <= 1.0:
                    raise ValueError(f"pole {p} lies on [-1,1]")
        if self.kind == "functional" and self.name not in _BUILTIN_FIELDS:
            raise ValueError(f"unknown functional field {self.name!r}")
        if self.kind == "equilibrium":
            if self.u_bar is None or self.density is None:
                raise ValueError("equilibrium field needs u_bar and a density")

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.poles)

    def phi_discrete(self, x, n: int):
        """φ_n(x) entering the discrete potential for an n-degree interpolant."""
        if self.kind == "none":
            return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
        if self.kind == "poles":
            acc = 0.0
            for p, m in self.poles:
                acc = acc + m * _abs_log(x, complex(p))
            return acc / (n + 1)
        if self.kind == "functional":
            return _BUILTIN_FIELDS[self.name](x)
        return self.u_bar - _log_potential_any(self.density, x).reshape(np.shape(x))

    def phi_continuum(self, x):
        """The limiting field φ; for poles, multiplicities are read as fractions
        of the total (the fixed-ratio limit)."""
        if self.kind == "poles":
            total = self.total_multiplicity
            acc = 0.0
            for p, m in self.poles:
                acc = acc + (m / total) * _abs_log(x, complex(p))
            return acc
        return self.phi_discrete(x, 0)

    def phi_discrete_deriv(self, x, n: int, order: int):
        """d^order/dx^order of φ_n on the real line."""
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        if self.kind == "none":
            return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
        if self.kind == "poles":
            x = np.asarray(x, dtype=float)
            acc = 0.0
            for p, m in self.poles:
                a, b = complex(p).real, complex(p).imag
                r2 = (x - a) ** 2 + b * b
                if order == 1:
                    acc = acc + m * (x - a) / r2
                else:
                    acc = acc + m * (b * b - (x - a) ** 2) / r2**2
            return acc / (n + 1)
        x = np.asarray(x, dtype=float)
        if self.kind == "functional":
            return _BUILTIN_FIELD_DERIVS[self.name][order - 1](x)
        # equilibrium: φ' = -U_w' is available analytically; the second
        # derivative differences it (step sized so quadrature noise / h stays
        # well below the φ'' scale, and clipped to keep the stencil inside)
        if order == 1:
            return -log_potential_deriv(self.density, x)
        h = 1e-5
        xc = np.clip(x, -1.0 + 2.0 * h, 1.0 - 2.0 * h)
        dp = log_potential_deriv(self.density, xc + h)
        dm = log_potential_deriv(self.density, xc - h)
        return -(dp - dm) / (2.0 * h)


def no_field() -> ExternalField:
    return ExternalField(kind="none")


def half_i_functional_field() -> ExternalField:
    return ExternalField(kind="functional", name="half_i_pair")


def half_i_pole_field(n: int) -> ExternalField:
    """n poles at ±0.5i; for odd n the extra pole goes to +0.5i."""
    ups, downs = (n + 1) // 2, n // 2
    poles = [(0.5j, ups)]
    if downs:
        poles.append((-0.5j, downs))
    return ExternalField(kind="poles", poles=tuple(poles))


def pole_field(poles) -> ExternalField:
    """Explicit (pole, multiplicity) pairs."""
    return ExternalField(kind="poles", poles=tuple((complex(p), int(m)) for p, m in poles))


def equilibrium_field(density: DensitySpec, u_bar: float) -> ExternalField:
    return ExternalField(kind="equilibrium", u_bar=float(u_bar), density=density)


# ---------------------------------------------------------------------------
# continuous potential

@dataclass
class ContinuousPotential:
    """U(x) = U_w(x) + φ(x) on [-1,1]."""

    density: DensitySpec
    field: ExternalField | None = None

    def __post_init__(self):
        if self.field is None:
            self.field = no_field()

    def eval(self, x):
        scalar = np.isscalar(x) or np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        out = log_potential(self.density, xa) + np.asarray(
            self.field.phi_continuum(xa), dtype=float
        )
        return float(out[0]) if scalar else out

    def __call__(self, x):
        return self.eval(x)


def continuous_potential_eval(U: ContinuousPotential, x):
    return U.eval(x)


@dataclass
class PotentialExtrema:
    x_max: float
    x_min: float
    u_max: float
    u_min: float

    @property
    def d(self) -> float:
        return self.u_max - self.u_min


def potential_extrema(U: ContinuousPotential, grid_size: int = 2001) -> PotentialExtrema:
    """Locate extrema of U on [-1,1]: grid scan plus golden-section refinement."""
    if grid_size < 101:
        raise ValueError("grid_size must be >= 101")
    grid = np.linspace(-1.0, 1.0, grid_size)
    vals = U.eval(grid)
    f = lambda t: U.eval(float(t))
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
    x_max, u_max = golden_max(f, a, b)
    j = int(np.argmin(vals))
    a, b = grid[max(j - 1, 0)], grid[min(j + 1, grid_size - 1)]
    x_min, u_min = golden_min(f, a, b)
    if u_min > u_max:  # flat potentials: golden noise can invert by ~1e-15
        u_min, u_max = u_max, u_min
        x_min, x_max = x_max, x_min
    return PotentialExtrema(float(x_max), float(x_min), float(u_max), float(u_min))


# ---------------------------------------------------------------------------
# discrete potential

@dataclass
class DiscretePotential:
    """U_n from a node set and an external field."""

    nodes: NodeSet
    field: ExternalField | None = None

    def __post_init__(self):
        # the m <= n interpolation constraint is enforced where weights are
        # built; the potential itself is well defined for any pole count
        if self.field is None:
            self.field = no_field()

    def eval(self, x):
        scalar = np.isscalar(x) or np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x))
        with np.errstate(divide="ignore"):
            dist = np.abs(xa[..., None] - self.nodes.nodes)
            term = -np.mean(np.log(dist), axis=-1)
        out = term + np.asarray(self.field.phi_discrete(xa, self.nodes.n), dtype=float)
        return float(out[0]) if scalar else out

    def deriv(self, x, order: int = 1):
        scalar = np.isscalar(x) or np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        diff = xa[..., None] - self.nodes.nodes
        if np.any(diff == 0.0):
            raise ValueError("derivative requested at a node")
        if order == 1:
            term = -np.mean(1.0 / diff, axis=-1)
        elif order == 2:
            term = np.mean(1.0 / diff**2, axis=-1)
        else:
            raise ValueError("order must be 1 or 2")
        out = term + np.asarray(
            self.field.phi_discrete_deriv(xa, self.nodes.n, order), dtype=float
        )
        return float(out[0]) if scalar else out

    def __call__(self, x):
        return self.eval(x)


def discrete_potential_eval(Un: DiscretePotential, x):
    return Un.eval(x)


def discrete_potential_deriv(Un: DiscretePotential, x, order: int = 1):
    return Un.deriv(x, order)


def complex_grid_sample(Un: DiscretePotential, re_range, im_range, nx: int, ny: int):
    """U_n on an nx-by-ny complex grid; returns (re, im, values[ny, nx])."""
    if nx < 2 or ny < 2:
        raise ValueError("nx and ny must be >= 2")
    re = np.linspace(re_range[0], re_range[1], nx)
    im = np.linspace(im_range[0], im_range[1], ny)
    z = re[None, :] + 1j * im[:, None]
    return re, im, Un.eval(z)
