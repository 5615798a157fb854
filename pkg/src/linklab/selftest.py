"""Quick oracle checks for the special functions and closed forms.

Each check compares an implementation against an independent route
(adaptive quadrature, recursion, or a direct expansion).  Run with
``linklab selftest``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from . import specfun
from .analytic import product_rician_pdf


def _rician_mean_quad(k):
    # unit-power Rician envelope: nu^2 = K/(K+1), 2 s^2 = 1/(K+1)
    nu = math.sqrt(k / (k + 1.0))
    s2 = 0.5 / (k + 1.0)

    def f(r):
        return r * r / s2 * math.exp(-(r - nu) ** 2 / (2 * s2)) * special.i0e(r * nu / s2)

    upper = nu + 40.0 * math.sqrt(s2)
    return integrate.quad(f, 0, upper, epsabs=1e-15, epsrel=1e-13, limit=400, points=[nu])[0]


def _checks():
    yield "erf(1) vs quadrature", lambda: math.isclose(
        specfun.erf(1.0),
        2 / math.sqrt(math.pi) * integrate.quad(lambda t: math.exp(-t * t), 0, 1, epsrel=1e-14)[0],
        rel_tol=0, abs_tol=1e-12)
    yield "I0(0.5) vs integral form", lambda: math.isclose(
        specfun.bessel_i(0, 0.5),
        integrate.quad(lambda t: math.exp(0.5 * math.cos(t)), 0, math.pi, epsrel=1e-14)[0] / math.pi,
        rel_tol=1e-10)
    yield "K0(1) vs integral form", lambda: math.isclose(
        specfun.bessel_k(0, 1.0),
        integrate.quad(lambda t: math.exp(-math.cosh(t)), 0, 30, epsrel=1e-14)[0],
        rel_tol=1e-10)
    yield "ln_gamma(7.5) vs recursion", lambda: math.isclose(
        specfun.ln_gamma(7.5),
        math.log(math.sqrt(math.pi) * math.prod(j + 0.5 for j in range(7))),
        rel_tol=1e-12)
    yield "ein_series(5) vs quadrature", lambda: math.isclose(
        specfun.ein_series(5.0),
        integrate.quad(lambda t: math.expm1(t) / t, 0, 5, epsrel=1e-14)[0],
        rel_tol=1e-10)
    for k in (0.0, 1.0, 5.0):
        yield f"Rician mean identity K={k:g}", lambda k=k: math.isclose(
            math.sqrt(math.pi / (4 * (k + 1))) * specfun.laguerre_half(-k),
            _rician_mean_quad(k), rel_tol=1e-10)
    yield "product PDF normalisation K=1", lambda: abs(integrate.quad(
        lambda b: product_rician_pdf(b, 1.0, 1.0), 0, np.inf, limit=200)[0] - 1) < 1e-6


def run(stream=print) -> bool:
    """Run every check, report one line each, return True when all pass."""
    ok = True
    for name, check in _checks():
        try:
            passed = bool(check())
        except Exception as exc:  # report and keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        stream(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
