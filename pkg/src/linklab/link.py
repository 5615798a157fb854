"""Optimal IRS phase alignment and Monte Carlo link estimators.

Estimators split the requested sample count into fixed-size chunks.  Chunk
``i`` always draws from ``substream(seed, i)`` and chunk statistics are
merged in chunk order, so results are bit-identical for any worker count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (ChannelRealization, FadingConfig, LinkGeometry, RadioConfig,
                      sample_realization, substream, transmit_snr)

__all__ = [
    "DegenerateChannelError",
    "Estimate",
    "CHUNK_SIZE",
    "WORKERS_ENV",
    "default_workers",
    "optimal_phases",
    "max_snr",
    "sample_snr_factor",
    "mc_ergodic_capacity",
    "mc_outage",
]

CHUNK_SIZE = 1 << 14
WORKERS_ENV = "LINKLAB_WORKERS"
MIN_SAMPLES = 1000
_Z95 = 1.959963984540054


class DegenerateChannelError(ValueError):
    """A cascaded coefficient is exactly zero, so its phase is undefined."""


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo point estimate with a 95% confidence half-width.

    ``few_events`` is set by outage estimators when fewer than 10 outage
    events were observed, in which case the normal-approximation half-width
    is unreliable.
    """

    value: float
    half_width_95: float
    n_samples: int
    few_events: bool = False

    def __post_init__(self):
        if not self.half_width_95 >= 0:
            raise ValueError("half_width_95 must be >= 0")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


def default_workers() -> int:
    """Worker count from the ``LINKLAB_WORKERS`` environment variable (default 1)."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return workers


def optimal_phases(r: ChannelRealization) -> np.ndarray:
    """SNR-maximising IRS phases in ``[0, 2*pi)``.

    Each cascaded term ``h2n * exp(j theta_n) * h1n`` is rotated onto the
    phase of the direct link ``g``.
    """
    cascade = r.h1 * r.h2
    if np.any(cascade == 0):
        raise DegenerateChannelError("zero IRS channel coefficient; resample the realization")
    theta = np.angle(r.g[..., None] / cascade)
    return np.mod(theta, 2.0 * math.pi)


def _envelope_sum(r: ChannelRealization) -> np.ndarray:
    return np.sum(np.abs(r.h1) * np.abs(r.h2), axis=-1) + np.abs(r.g)


def max_snr(r: ChannelRealization, gamma0: float):
    """Received SNR under optimal phases, ``gamma0 * (sum|h2n||h1n| + |g|)**2``."""
    if not gamma0 > 0:
        raise ValueError("gamma0 must be > 0")
    out = gamma0 * _envelope_sum(r) ** 2
    return float(out) if np.ndim(out) == 0 else out


def _chunks(n_samples: int):
    full, rest = divmod(n_samples, CHUNK_SIZE)
    sizes = [CHUNK_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _map_chunks(fn, n_samples, workers):
    chunks = _chunks(n_samples)
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(chunks) == 1:
        return [fn(*c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def _check_samples(n_samples):
    if int(n_samples) != n_samples or n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be an integer >= {MIN_SAMPLES}, got {n_samples!r}")
    return int(n_samples)


def sample_snr_factor(geom: LinkGeometry, fading: FadingConfig, n_samples: int,
                      seed: int, workers: int | None = None) -> np.ndarray:
    """Samples of ``max_snr / gamma0`` in the same chunk order the estimators use.

    Handy for evaluating many thresholds or powers on one set of draws;
    ``mc_outage`` with the same seed sees exactly these values.
    """
    n_samples = _check_samples(n_samples)

    def chunk(index, size):
        r = sample_realization(geom, fading, substream(seed, index), size)
        return _envelope_sum(r) ** 2

    return np.concatenate(_map_chunks(chunk, n_samples, workers))


def _merge(stats):
    # Chan et al. pairwise update, applied in chunk order
    n, mean, m2 = stats[0]
    for nb, mb, m2b in stats[1:]:
        total = n + nb
        delta = mb - mean
        mean = mean + delta * nb / total
        m2 = m2 + m2b + delta * delta * n * nb / total
        n = total
    return n, mean, m2


def mc_ergodic_capacity(geom: LinkGeometry, fading: FadingConfig, radio: RadioConfig,
                        n_samples: int, seed: int, workers: int | None = None) -> Estimate:
    """Monte Carlo estimate of ``E[log2(1 + gamma_max)]`` in bit/s/Hz."""
    n_samples = _check_samples(n_samples)
    gamma0 = transmit_snr(radio)

    def chunk(index, size):
        r = sample_realization(geom, fading, substream(seed, index), size)
        c = np.log1p(gamma0 * _envelope_sum(r) ** 2) / math.log(2.0)
        mean = float(np.mean(c))
        return size, mean, float(np.sum((c - mean) ** 2))

    n, mean, m2 = _merge(_map_chunks(chunk, n_samples, workers))
    std = math.sqrt(m2 / (n - 1))
    return Estimate(mean, _Z95 * std / math.sqrt(n), n)


def mc_outage(geom: LinkGeometry, fading: FadingConfig, radio: RadioConfig,
              n_samples: int, seed: int, workers: int | None = None) -> Estimate:
    """Monte Carlo estimate of ``P(gamma_max <= gamma_th)``."""
    n_samples = _check_samples(n_samples)
    gamma0 = transmit_snr(radio)
    gamma_th = radio.gamma_th

    def chunk(index, size):
        r = sample_realization(geom, fading, substream(seed, index), size)
        return int(np.count_nonzero(gamma0 * _envelope_sum(r) ** 2 <= gamma_th))

    events = sum(_map_chunks(chunk, n_samples, workers))
    p = events / n_samples
    hw = _Z95 * math.sqrt(p * (1.0 - p) / n_samples)
    return Estimate(p, hw, n_samples, few_events=events < 10)
