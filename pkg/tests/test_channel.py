import dataclasses
import math

import numpy as np
import pytest

from linklab.channel import (ChannelRealization, FadingConfig, LinkGeometry, RadioConfig,
                             RayleighConvention, direct_link_power, envelope_means,
                             sample_realization, substream, transmit_snr)
from linklab.link import max_snr
from linklab.specfun import laguerre_half

from conftest import mean_within


def test_noise_power_reference():
    radio = RadioConfig()
    assert radio.noise_power_dbm == pytest.approx(-173 + 10 * math.log10(180e3), abs=1e-12)
    assert radio.noise_power_dbm == pytest.approx(-120.447, abs=5e-4)


def test_transmit_snr():
    noise = RadioConfig().noise_power_dbm
    assert transmit_snr(RadioConfig(tx_power_dbm=noise)) == pytest.approx(1.0, rel=1e-14)
    assert transmit_snr(RadioConfig(tx_power_dbm=0.0)) == pytest.approx(10 ** 12.0447, rel=1e-4)


@pytest.mark.parametrize("field, value", [("d1", -5.0), ("d3", 0.0), ("alpha2", 0.5),
                                          ("alpha3", 7.0), ("ref_loss_db", math.nan)])
def test_geometry_invariants(field, value):
    with pytest.raises(ValueError, match=field):
        dataclasses.replace(LinkGeometry(), **{field: value})


def test_fading_invariants():
    with pytest.raises(ValueError, match="n_elements"):
        FadingConfig(n_elements=0)
    with pytest.raises(ValueError, match="k1"):
        FadingConfig(k1=-1.0)
    with pytest.raises(ValueError):
        FadingConfig(rayleigh_convention="bogus")
    assert FadingConfig(rayleigh_convention="PaperVerbatim").rayleigh_convention \
        is RayleighConvention.PAPER_VERBATIM


def test_radio_invariants():
    with pytest.raises(ValueError):
        RadioConfig(bandwidth_hz=0.0)
    with pytest.raises(ValueError):
        RadioConfig(gamma_th_db=math.inf)


def test_gains_apply_reference_loss():
    g1, g2, g3 = LinkGeometry().gains
    assert g1 == pytest.approx(1e-3 / 150 ** 2)
    assert g3 == pytest.approx(1e-3 / 200 ** 3.5)


def test_realization_shapes_and_validation():
    r = sample_realization(LinkGeometry(), FadingConfig(n_elements=4), substream(1, 0))
    assert r.h1.shape == (4,) and r.h2.shape == (4,) and r.g.shape == ()
    rb = sample_realization(LinkGeometry(), FadingConfig(n_elements=4), substream(1, 0), size=7)
    assert rb.h1.shape == (7, 4) and rb.g.shape == (7,)
    with pytest.raises(ValueError):
        ChannelRealization(np.ones(3), np.ones(2), 1.0)
    with pytest.raises(ValueError):
        ChannelRealization(np.ones(3), np.ones(3), np.ones(2))
    with pytest.raises(ValueError):
        ChannelRealization(np.array([np.nan, 1]), np.ones(2), 1.0)


def test_same_seed_bit_identical():
    geom, fad = LinkGeometry(), FadingConfig(n_elements=8)
    a = sample_realization(geom, fad, substream(42, 3), size=100)
    b = sample_realization(geom, fad, substream(42, 3), size=100)
    assert np.array_equal(a.h1, b.h1) and np.array_equal(a.h2, b.h2) and np.array_equal(a.g, b.g)
    c = sample_realization(geom, fad, substream(42, 4), size=100)
    assert not np.array_equal(a.h1, c.h1)


def test_pure_los_limit(unit_geom):
    geom = LinkGeometry(150, 150, 200, 2, 2, 3.5, -30)
    fad = FadingConfig(1e12, 1e12, 16)
    r = sample_realization(geom, fad, substream(0, 0), size=50)
    scale = math.sqrt(geom.d1 ** geom.alpha1 / geom.c0)
    np.testing.assert_allclose(np.abs(r.h1) * scale, 1.0, atol=1e-5)


def test_unit_power_normalisation(ref_geom):
    fad = FadingConfig(1.0, 1.0, 1)
    r = sample_realization(ref_geom, fad, substream(7, 0), size=100_000)
    power = np.abs(r.h1[:, 0]) ** 2 * ref_geom.d1 ** ref_geom.alpha1 / ref_geom.c0
    ok, mean, se = mean_within(power, 1.0)
    assert ok, (mean, se)


def test_nlos_component_unit_variance(unit_geom):
    # K = 0: h is the NLOS component itself
    r = sample_realization(unit_geom, FadingConfig(0.0, 0.0, 1), substream(8, 0), size=1_000_000)
    ok, mean, se = mean_within(np.abs(r.h2[:, 0]) ** 2, 1.0)
    assert ok, (mean, se)


def test_rician_envelope_mean_sampled(ref_geom):
    fad = FadingConfig(1.0, 1.0, 1)
    r = sample_realization(ref_geom, fad, substream(9, 0), size=100_000)
    env = np.abs(r.h1[:, 0]) * math.sqrt(ref_geom.d1 ** ref_geom.alpha1 / ref_geom.c0)
    ok, mean, se = mean_within(env, math.sqrt(math.pi / 8) * laguerre_half(-1.0))
    assert ok, (mean, se)


def test_envelope_means_closed_form(unit_geom):
    m1, m2, mg = envelope_means(unit_geom, FadingConfig(0.0, 0.0, 1))
    assert m1 == pytest.approx(math.sqrt(math.pi) / 2) and m2 == m1
    assert m1 == pytest.approx(0.8862, abs=5e-5)
    assert mg == pytest.approx(math.sqrt(math.pi) / 2)
    _, _, mg_verbatim = envelope_means(unit_geom, FadingConfig(0.0, 0.0, 1, "paper_verbatim"))
    assert mg_verbatim == pytest.approx(math.sqrt(math.pi / 2))
    assert mg_verbatim == pytest.approx(1.2533, abs=5e-5)


@pytest.mark.parametrize("k", [0.0, 1.0, 5.0])
@pytest.mark.parametrize("convention", ["unit_power", "paper_verbatim"])
def test_envelope_means_monte_carlo(ref_geom, k, convention):
    fad = FadingConfig(k, k / 2, 1, convention)
    r = sample_realization(ref_geom, fad, substream(11, int(k)), size=1_000_000)
    for samples, expected in zip((np.abs(r.h1[:, 0]), np.abs(r.h2[:, 0]), np.abs(r.g)),
                                 envelope_means(ref_geom, fad)):
        ok, mean, se = mean_within(samples, expected)
        assert ok, (mean, expected, se)


def test_direct_link_power_conventions(ref_geom):
    g3 = ref_geom.gains[2]
    assert direct_link_power(ref_geom, "unit_power") == g3
    assert direct_link_power(ref_geom, RayleighConvention.PAPER_VERBATIM) == 2 * g3


def test_los_phase_invariance(ref_geom):
    rng = np.random.default_rng(5)
    phases = tuple(rng.uniform(0, 2 * math.pi, 8))
    base = FadingConfig(2.0, 3.0, 8)
    turned = dataclasses.replace(base, los_phase1=phases, los_phase2=1.234)
    a = sample_realization(ref_geom, base, substream(3, 0), size=1000)
    b = sample_realization(ref_geom, turned, substream(3, 0), size=1000)
    assert not np.allclose(a.h1, b.h1)
    np.testing.assert_allclose(max_snr(a, 1e12), max_snr(b, 1e12), rtol=1e-12)
