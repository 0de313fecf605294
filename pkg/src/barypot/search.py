"""Golden-section refinement for one-dimensional extrema on a bracket."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["golden_max", "golden_min", "golden_max_vec"]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a: float, b: float, xtol: float = 1e-10) -> tuple[float, float]:
    """Maximize f on [a, b]; returns (x*, f(x*))."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = c if fc >= fd else d
    return x, max(fc, fd)


def golden_min(f, a: float, b: float, xtol: float = 1e-10) -> tuple[float, float]:
    x, fx = golden_max(lambda t: -f(t), a, b, xtol)
    return x, -fx


def golden_max_vec(f, a, b, xtol: float = 1e-10):
    """Maximize a vectorized f independently on each [a_i, b_i].

    f maps an array of abscissae to an array of values; all brackets are
    refined in lockstep, one probe vector per iteration.  Returns (x*, f*)
    arrays; ties inside a bracket resolve to the smaller abscissa.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while float(np.max(b - a)) > xtol:
        left = fc >= fd  # keep [a, d] and reuse c as the new d; else keep [c, b]
        old_c, old_fc, old_d, old_fd = c, fc, d, fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = b - _INVPHI * (b - a)
        d_new = a + _INVPHI * (b - a)
        probe = np.where(left, c_new, d_new)
        fprobe = f(probe)
        c = np.where(left, c_new, old_d)
        fc = np.where(left, fprobe, old_fd)
        d = np.where(left, old_c, d_new)
        fd = np.where(left, old_fc, fprobe)
    take_c = fc >= fd
    x = np.where(take_c, c, d)
    fx = np.where(take_c, fc, fd)
    return x, fx
