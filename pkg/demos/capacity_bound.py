"""Ergodic capacity against the Jensen upper bound as the surface grows.

The bound log2(1 + E[gamma]) is cheap to evaluate; Monte Carlo shows how
tight it is.  For large N it approaches log2(gamma1 N^2), the array-gain
asymptote, i.e. +2 bit/s/Hz per doubling of N.  At this geometry the direct
link still dominates for N in the low hundreds, so the asymptote sits well
below both columns.

Run: python demos/capacity_bound.py
"""
import math

from linklab import analytic
from linklab.channel import FadingConfig, LinkGeometry, RadioConfig
from linklab.link import mc_ergodic_capacity

geom = LinkGeometry()          # 150 m / 150 m / 200 m, C0 = -30 dB
radio = RadioConfig(tx_power_dbm=20)

print(" K    N   MC capacity        bound    log2(g1 N^2)")
for k in (0.0, 1.0, 5.0):
    for n in (8, 16, 32, 64, 128):
        fad = FadingConfig(k, k, n)
        est = mc_ergodic_capacity(geom, fad, radio, 50_000, seed=1)
        bound = analytic.capacity_upper_bound(geom, fad, radio)
        asym = math.log2(analytic.array_gain_coefficient(geom, fad, radio) * n * n)
        print(f"{k:3.0f} {n:4d}   {est.value:6.3f} +- {est.half_width_95:.3f}   {bound:6.3f}   {asym:6.3f}")
