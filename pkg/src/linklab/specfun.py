"""Special functions needed by the closed-form link analytics.

The standard functions (erf, modified Bessel I/K, log-gamma) are thin,
input-checked wrappers around :mod:`scipy.special`.  The two combinations
specific to the Rician analysis, the half-order Laguerre function on the
negative axis and the entire exponential-integral series, are evaluated here
directly.

All functions accept scalars or array-likes and return a Python float for
scalar input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

__all__ = [
    "DomainError",
    "Tolerance",
    "MathConstants",
    "CONSTANTS",
    "erf",
    "bessel_i",
    "bessel_k",
    "laguerre_half",
    "ein_series",
    "ln_gamma",
]

# series truncation: relative term below this, or MAX_TERMS terms
SERIES_RTOL = 1e-16
MAX_TERMS = 500

# above this the power series of ein needs more than MAX_TERMS terms and
# Ei(K) - gamma - ln K no longer cancels
_EIN_SERIES_LIMIT = 50.0


class DomainError(ValueError):
    """Argument outside the domain a special function is defined for."""


@dataclass(frozen=True)
class Tolerance:
    relative: float = 1e-12
    absolute: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.relative) and math.isfinite(self.absolute)):
            raise ValueError("tolerances must be finite")
        if self.relative < 0 or self.absolute < 0:
            raise ValueError("tolerances must be non-negative")
        if self.relative == 0 and self.absolute == 0:
            raise ValueError("at least one tolerance must be positive")

    def close(self, actual, expected) -> bool:
        """True where ``|actual - expected| <= absolute + relative*|expected|``."""
        actual = np.asarray(actual, dtype=float)
        expected = np.asarray(expected, dtype=float)
        bound = self.absolute + self.relative * np.abs(expected)
        return bool(np.all(np.abs(actual - expected) <= bound))


@dataclass(frozen=True)
class MathConstants:
    euler_gamma: float = float(np.euler_gamma)
    pi: float = math.pi


CONSTANTS = MathConstants()


def _out(x, scalar):
    return float(x) if scalar else x


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def erf(x):
    """Error function, odd with range (-1, 1)."""
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("erf requires finite input")
    return _out(sc.erf(arr), scalar)


def bessel_i(order: int, x):
    """Modified Bessel function of the first kind, orders 0 and 1, for x >= 0."""
    if order not in (0, 1):
        raise DomainError(f"bessel_i supports orders 0 and 1, got {order!r}")
    arr, scalar = _as_array(x)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("bessel_i requires x >= 0")
    fn = sc.i0 if order == 0 else sc.i1
    return _out(fn(arr), scalar)


def bessel_k(order: int, x):
    """Modified Bessel function of the second kind for integer order.

    Negative orders are folded onto ``|order|`` (K is even in its order).
    ``x`` must be strictly positive; K diverges at the origin.
    """
    if int(order) != order:
        raise DomainError("bessel_k supports integer orders only")
    arr, scalar = _as_array(x)
    if np.any(~(arr > 0)):
        raise DomainError("bessel_k requires x > 0")
    return _out(sc.kv(abs(int(order)), arr), scalar)


def laguerre_half(x):
    r"""Laguerre function :math:`L_{1/2}(x)` for ``x <= 0``.

    Uses :math:`L_{1/2}(x) = e^{x/2}[(1-x) I_0(-x/2) - x I_1(-x/2)]` with
    exponentially scaled Bessel functions, so large ``|x|`` does not
    overflow.  This is the factor in the Rician envelope mean
    :math:`E|h| = \sqrt{\pi/(4(K+1))}\,L_{1/2}(-K)` for unit-power fading.
    """
    arr, scalar = _as_array(x)
    if np.any(arr > 0) or np.any(np.isnan(arr)):
        raise DomainError("laguerre_half is implemented for x <= 0 only")
    k = -arr
    out = (1.0 + k) * sc.i0e(k / 2.0) + k * sc.i1e(k / 2.0)
    return _out(out, scalar)


def _ein_scalar(k: float) -> float:
    if k == 0.0:
        return 0.0
    if k > _EIN_SERIES_LIMIT:
        return float(sc.expi(k) - np.euler_gamma - math.log(k))
    # term_n = k^n / (n * n!)
    term = k
    total = k
    for n in range(1, MAX_TERMS):
        term *= k * n / ((n + 1) * (n + 1))
        total += term
        if term < SERIES_RTOL * total:
            break
    return total


def ein_series(k):
    r"""Entire exponential integral :math:`\sum_{n\ge1} K^n/(n\,n!)`.

    Equal to :math:`\mathrm{Ei}(K) - \gamma - \ln K` for ``K > 0`` but
    finite and cancellation-free down to ``K = 0``.
    """
    arr, scalar = _as_array(k)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("ein_series requires finite K >= 0")
    out = np.vectorize(_ein_scalar, otypes=[float])(arr)
    return _out(out, scalar)


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    arr, scalar = _as_array(x)
    if np.any(~(arr > 0)):
        raise DomainError("ln_gamma requires x > 0")
    return _out(sc.gammaln(arr), scalar)
