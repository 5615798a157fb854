"""Link geometry, fading configuration and seeded channel sampling.

Each of the three links (T-IRS, IRS-R, T-R) has large-scale gain
``C0 * d**-alpha`` where ``C0`` is the reference loss at 1 m.  The two IRS
hops are Rician with unit-modulus line-of-sight entries; the direct link is
Rayleigh.  Analytic formulas elsewhere use the substitution
``d**alpha -> d**alpha / C0``, i.e. they are written in terms of
:meth:`LinkGeometry.gains`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import laguerre_half

__all__ = [
    "RayleighConvention",
    "LinkGeometry",
    "FadingConfig",
    "RadioConfig",
    "ChannelRealization",
    "substream",
    "transmit_snr",
    "direct_link_power",
    "sample_realization",
    "envelope_means",
]


class RayleighConvention(enum.Enum):
    """Power normalisation of the NLOS direct link ``g``.

    ``UNIT_POWER`` gives ``E|g|^2 = C0 / d3**alpha3``.  ``PAPER_VERBATIM``
    doubles that power, which is the scaling implied by the printed
    envelope mean ``sqrt(pi / (2 d3**alpha3))`` and the printed Rayleigh CDF.
    """

    UNIT_POWER = "unit_power"
    PAPER_VERBATIM = "paper_verbatim"

    @classmethod
    def parse(cls, value) -> "RayleighConvention":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"unitpower": "unit_power", "paperverbatim": "paper_verbatim"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(
                f"unknown Rayleigh convention {value!r}; "
                f"expected one of {[c.value for c in cls]}"
            ) from None


@dataclass(frozen=True)
class LinkGeometry:
    """Distances (m), path-loss exponents and 1 m reference loss (dB)."""

    d1: float = 150.0
    d2: float = 150.0
    d3: float = 200.0
    alpha1: float = 2.0
    alpha2: float = 2.0
    alpha3: float = 3.5
    ref_loss_db: float = -30.0

    def __post_init__(self):
        for name in ("d1", "d2", "d3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite distance > 0, got {value!r}")
        for name in ("alpha1", "alpha2", "alpha3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 1.0 <= value <= 6.0):
                raise ValueError(f"{name} must lie in [1, 6], got {value!r}")
        if not math.isfinite(self.ref_loss_db):
            raise ValueError(f"ref_loss_db must be finite, got {self.ref_loss_db!r}")

    @property
    def c0(self) -> float:
        return 10.0 ** (self.ref_loss_db / 10.0)

    @property
    def gains(self) -> tuple[float, float, float]:
        """Large-scale power gains ``C0 * d_l**-alpha_l`` of the three links."""
        c0 = self.c0
        return (
            c0 * self.d1 ** -self.alpha1,
            c0 * self.d2 ** -self.alpha2,
            c0 * self.d3 ** -self.alpha3,
        )

    def swapped(self) -> "LinkGeometry":
        """Geometry with the two IRS hops exchanged."""
        return LinkGeometry(self.d2, self.d1, self.d3, self.alpha2, self.alpha1,
                            self.alpha3, self.ref_loss_db)


@dataclass(frozen=True)
class FadingConfig:
    """Rician factors of the two IRS hops and the number of IRS elements.

    ``los_phase1``/``los_phase2`` set the phases of the unit-modulus LOS
    entries, either one scalar or one value per element.
    """

    k1: float = 1.0
    k2: float = 1.0
    n_elements: int = 32
    rayleigh_convention: RayleighConvention = RayleighConvention.UNIT_POWER
    los_phase1: float | tuple = 0.0
    los_phase2: float | tuple = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rayleigh_convention",
                           RayleighConvention.parse(self.rayleigh_convention))
        for name in ("k1", "k2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        object.__setattr__(self, "n_elements", int(self.n_elements))

    def swapped(self) -> "FadingConfig":
        return FadingConfig(self.k2, self.k1, self.n_elements, self.rayleigh_convention,
                            self.los_phase2, self.los_phase1)


@dataclass(frozen=True)
class RadioConfig:
    tx_power_dbm: float = 20.0
    bandwidth_hz: float = 180e3
    noise_psd_dbm_hz: float = -173.0
    gamma_th_db: float = 10.0

    def __post_init__(self):
        for name in ("tx_power_dbm", "bandwidth_hz", "noise_psd_dbm_hz", "gamma_th_db"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.bandwidth_hz <= 0:
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz!r}")

    @property
    def noise_power_dbm(self) -> float:
        return self.noise_psd_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)

    @property
    def gamma_th(self) -> float:
        """Outage threshold as a linear SNR."""
        return 10.0 ** (self.gamma_th_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """Cascaded and direct channel coefficients.

    ``h1`` and ``h2`` have shape ``(..., N)`` and ``g`` has the leading
    shape ``(...)``; a single draw has ``h1.shape == (N,)``.
    """

    h1: np.ndarray = field(repr=False)
    h2: np.ndarray = field(repr=False)
    g: np.ndarray | complex = field(repr=False)

    def __post_init__(self):
        h1 = np.asarray(self.h1, dtype=complex)
        h2 = np.asarray(self.h2, dtype=complex)
        g = np.asarray(self.g, dtype=complex)
        if h1.shape != h2.shape or h1.ndim < 1:
            raise ValueError("h1 and h2 must be arrays of equal shape (..., N)")
        if g.shape != h1.shape[:-1]:
            raise ValueError("g must match the leading shape of h1")
        if not (np.all(np.isfinite(h1)) and np.all(np.isfinite(h2)) and np.all(np.isfinite(g))):
            raise ValueError("channel coefficients must be finite")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "g", g)

    @property
    def n_elements(self) -> int:
        return self.h1.shape[-1]


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for chunk ``index`` of the experiment seeded with ``seed``.

    The stream depends only on ``(seed, index)``, never on which worker
    consumes it.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def transmit_snr(radio: RadioConfig) -> float:
    """Linear transmit SNR ``P / (N0 B)``."""
    return 10.0 ** ((radio.tx_power_dbm - radio.noise_power_dbm) / 10.0)


def direct_link_power(geom: LinkGeometry, convention=RayleighConvention.UNIT_POWER) -> float:
    """Mean power ``E|g|^2`` of the direct link under ``convention``."""
    g3 = geom.gains[2]
    if RayleighConvention.parse(convention) is RayleighConvention.PAPER_VERBATIM:
        return 2.0 * g3
    return g3


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(0.5)


def _los(phase, n):
    phase = np.broadcast_to(np.asarray(phase, dtype=float), (n,))
    return np.exp(1j * phase)


def _draw(geom, fading, rng, lead):
    n = fading.n_elements
    g1, g2, _ = geom.gains
    out = []
    for gain, k, phase in ((g1, fading.k1, fading.los_phase1), (g2, fading.k2, fading.los_phase2)):
        nlos = _cn(rng, lead + (n,))
        # rotating LOS and NLOS together keeps the law (NLOS is circular)
        # and leaves every envelope unchanged for a given draw
        h = math.sqrt(k / (k + 1.0)) + math.sqrt(1.0 / (k + 1.0)) * nlos
        out.append(math.sqrt(gain) * _los(phase, n) * h)
    g = math.sqrt(direct_link_power(geom, fading.rayleigh_convention)) * _cn(rng, lead)
    return out[0], out[1], g


def sample_realization(geom: LinkGeometry, fading: FadingConfig,
                       rng: np.random.Generator, size: int | None = None) -> ChannelRealization:
    """Draw one realization, or ``size`` independent ones stacked on axis 0.

    Realizations containing an exactly-zero coefficient (a probability-zero
    event) are redrawn so the optimal phases are always defined.
    """
    lead = () if size is None else (int(size),)
    h1, h2, g = _draw(geom, fading, rng, lead)
    while True:
        bad = (np.any(h1 == 0, axis=-1) | np.any(h2 == 0, axis=-1) | (g == 0))
        if not np.any(bad):
            break
        if size is None:
            h1, h2, g = _draw(geom, fading, rng, lead)
        else:
            idx = np.flatnonzero(bad)
            r1, r2, rg = _draw(geom, fading, rng, (idx.size,))
            h1[idx], h2[idx], g[idx] = r1, r2, rg
    return ChannelRealization(h1, h2, g)


def envelope_means(geom: LinkGeometry, fading: FadingConfig) -> tuple[float, float, float]:
    """Mean envelopes ``(E|h_1n|, E|h_2n|, E|g|)``."""
    g1, g2, _ = geom.gains
    mean_h1 = math.sqrt(g1 * math.pi / (4.0 * (fading.k1 + 1.0))) * laguerre_half(-fading.k1)
    mean_h2 = math.sqrt(g2 * math.pi / (4.0 * (fading.k2 + 1.0))) * laguerre_half(-fading.k2)
    # Rayleigh envelope mean is sqrt(pi * power) / 2
    mean_g = math.sqrt(math.pi * direct_link_power(geom, fading.rayleigh_convention)) / 2.0
    return mean_h1, mean_h2, mean_g
