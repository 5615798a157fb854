"""High-SNR outage and the diversity order N + 1.

Each element contributes one order through the product density near the
origin, the direct link one more.  The slope of log P against log gamma0
therefore tends to -(N + 1).  The first N=4 step is shallow because the
law is clamped at 1 at 30 dBm.

Run: python demos/diversity.py
"""
import math

import numpy as np

from linklab import analytic
from linklab.channel import FadingConfig, LinkGeometry, RadioConfig, transmit_snr
from linklab.link import mc_outage

geom = LinkGeometry()
for n in (1, 2, 4):
    fad = FadingConfig(1.0, 1.0, n)
    powers = np.arange(30, 71, 10)
    p = [analytic.outage_high_snr(geom, fad, RadioConfig(tx_power_dbm=t)) for t in powers]
    slope = np.diff(np.log10(p))
    law = analytic.near_origin_coefficient(geom, fad, RadioConfig(tx_power_dbm=50))
    print(f"N={n}  diversity {law.diversity}  slopes per decade " + " ".join(f"{s:.3f}" for s in slope))

# At unit gains the law agrees with Monte Carlo near P = 1e-4.
unit = LinkGeometry(1, 1, 1, 2, 2, 2, 0.0)
fad = FadingConfig(1.0, 1.0, 1)
noise = RadioConfig().noise_power_dbm
for snr_db in (25, 30, 35):
    radio = RadioConfig(tx_power_dbm=noise + snr_db)
    est = mc_outage(unit, fad, radio, 2_000_000, seed=2)
    print(f"gamma0 {snr_db} dB  MC {est.value:.2e} +- {est.half_width_95:.1e}"
          f"  law {analytic.outage_high_snr(unit, fad, radio):.2e}")
