"""Special functions behind the closed forms, checked against quadrature.

Run: python demos/special_functions.py
"""
import math

import numpy as np
from scipy import integrate

from linklab.specfun import bessel_k, ein_series, laguerre_half

# The mean of a unit-power Rician envelope is sqrt(pi/(4(K+1))) L_{1/2}(-K).
# Integrating the Rician density directly gives the same number.
for k in (0.0, 1.0, 5.0, 20.0):
    nu, s2 = math.sqrt(k / (k + 1)), 0.5 / (k + 1)
    dens = lambda r: r / s2 * math.exp(-(r * r + nu * nu) / (2 * s2)) * np.i0(r * nu / s2)
    quad = integrate.quad(lambda r: r * dens(r), 0, nu + 40 * math.sqrt(s2), points=[nu])[0]
    closed = math.sqrt(math.pi / (4 * (k + 1))) * laguerre_half(-k)
    print(f"K={k:5.1f}  E|h| closed {closed:.12f}  quad {quad:.12f}")

# K_0 has a log singularity at the origin, which is what makes the
# near-origin density of a cascaded Rayleigh-Rician hop only log-divergent.
print()
for x in (1e-1, 1e-3, 1e-6):
    print(f"K0({x:g}) = {bessel_k(0, x):.6f}   -ln(x/2) - gamma = {-math.log(x / 2) - np.euler_gamma:.6f}")

# Ein(K) = Ei(K) - gamma - ln K, summed as a series; it enters the coefficient a.
print()
for k in (0.5, 1.0, 5.0):
    print(f"Ein({k}) = {ein_series(k):.10f}")
