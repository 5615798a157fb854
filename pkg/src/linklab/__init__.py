"""Performance laboratory for IRS-aided single-antenna links.

Monte Carlo simulation of the optimally phase-aligned channel over mixed
Rician/Rayleigh fading, and closed-form capacity and outage analytics to
check it against.
"""
from .analytic import (CltMoments, HighSnrLaw, array_gain_coefficient, capacity_upper_bound,
                       clt_moments, mean_snr, near_origin_coefficient, outage_clt,
                       outage_high_snr, product_rician_pdf)
from .channel import (ChannelRealization, FadingConfig, LinkGeometry, RadioConfig,
                      RayleighConvention, envelope_means, sample_realization, substream,
                      transmit_snr)
from .harness import ConfigError, ResultRow, SweepSpec, load_config, parse_config, run_sweep
from .link import Estimate, max_snr, mc_ergodic_capacity, mc_outage, optimal_phases

__version__ = "0.1.0"
