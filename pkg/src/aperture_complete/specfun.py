"""Cylinder functions for the 2D Helmholtz kernels.

Thin, validated wrappers around :mod:`scipy.special`. Orders 0 and 1 cover
the fundamental solution and its normal derivative; ``bessel_jn`` and
``hankel1n`` serve the separation-of-variables circle solution, which needs
orders up to roughly ``k*a + 40``.
"""

import numpy as np
from scipy import special

_ORDERS = (0, 1)


def _check_order(order):
    if order not in _ORDERS:
        raise ValueError(f"order must be 0 or 1, got {order!r}")


def _as_finite(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("argument must be finite")
    return x


def _scalar_or_array(value, x):
    return value.item() if np.ndim(x) == 0 else value


def bessel_j(order, x):
    """Bessel function of the first kind J_0 or J_1 for real ``x >= 0``."""
    _check_order(order)
    x = _as_finite(x)
    if np.any(x < 0):
        raise ValueError("bessel_j is defined here for x >= 0")
    out = special.j0(x) if order == 0 else special.j1(x)
    return _scalar_or_array(np.asarray(out), x)


def bessel_y(order, x):
    """Bessel function of the second kind Y_0 or Y_1 for real ``x > 0``."""
    _check_order(order)
    x = _as_finite(x)
    if np.any(x <= 0):
        raise ValueError("bessel_y has a logarithmic singularity at x <= 0")
    out = special.y0(x) if order == 0 else special.y1(x)
    return _scalar_or_array(np.asarray(out), x)


def hankel1(order, x):
    """Hankel function of the first kind, ``J_n(x) + i Y_n(x)``, n in {0, 1}."""
    return bessel_j(order, x) + 1j * bessel_y(order, x)


def bessel_jn(n, x):
    """J_n(x) for integer orders ``n`` (array-broadcast)."""
    return special.jv(n, _as_finite(x))


def hankel1n(n, x):
    """H_n^(1)(x) for integer orders ``n`` and ``x > 0`` (array-broadcast)."""
    x = _as_finite(x)
    if np.any(x <= 0):
        raise ValueError("hankel1n requires x > 0")
    return special.hankel1(n, x)
