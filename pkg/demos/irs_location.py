"""Where to put the surface between transmitter and receiver.

With d1 + d2 fixed the cascaded path loss (d1 d2)^-2 is largest when the
surface sits next to either end, so capacity is U-shaped in d1 with the
minimum at the midpoint.  Runs the sweep through the harness and writes a
CSV next to this script.

Run: python demos/irs_location.py
"""
from pathlib import Path

from linklab.channel import FadingConfig, LinkGeometry, RadioConfig
from linklab.harness import SweepSpec, run_sweep

spec = SweepSpec("d1_split", (25, 50, 100, 150, 200, 250, 275),
                 ("mc_capacity", "cap_bound"), n_samples=20_000, seed=2020)
out = Path(__file__).with_name("irs_location.csv")
rows = run_sweep(LinkGeometry(), FadingConfig(1.0, 1.0, 32), RadioConfig(), spec, out_path=out)

print("  d1    MC      bound")
for row in rows:
    print(f"{row.sweep_value:5.0f}  {row.values['mc_capacity'][0]:.4f}  {row.values['cap_bound'][0]:.4f}")
print(f"wrote {out}")
