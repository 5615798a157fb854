"""Gaussian approximation of the cascaded sum for the outage probability.

The sum of N envelope products is replaced by a Gaussian and convolved
with the exact Rayleigh law of the direct link.  We compare against
Monte Carlo over a range of thresholds.

Run: python demos/clt_outage.py
"""
import math

import numpy as np

from linklab import analytic
from linklab.channel import FadingConfig, LinkGeometry, RadioConfig, transmit_snr
from linklab.link import sample_snr_factor

radio = RadioConfig()
gamma0 = transmit_snr(radio)

# unit gains make the cascaded part dominant, so N matters
for label, geom in (("reference", LinkGeometry()), ("unit gains", LinkGeometry(1, 1, 1, 2, 2, 2, 0.0))):
    print(f"-- {label}")
    for n in (8, 32):
        fad = FadingConfig(1.0, 1.0, n)
        s = np.sort(sample_snr_factor(geom, fad, 100_000, seed=4))
        rows = []
        for q in (0.05, 0.25, 0.5, 0.75, 0.95):
            th = gamma0 * np.quantile(s, q)
            r = RadioConfig(gamma_th_db=10 * math.log10(th))
            mc = np.searchsorted(s, r.gamma_th / gamma0, side="right") / s.size
            rows.append(f"{mc:.3f}/{analytic.outage_clt(geom, fad, r):.3f}")
        print(f"N={n:3d}  MC/CLT: " + "  ".join(rows))
