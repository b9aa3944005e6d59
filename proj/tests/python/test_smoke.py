import math

import pytest

import crsma


def test_config_thresholds():
    c = crsma.SystemConfig(2, 10.0, 20.0, 1.0, 2.0)
    assert c.eps0 == pytest.approx(1.0)
    assert c.eps_s == pytest.approx(3.0)
    assert c.eta0 == pytest.approx(0.1)
    assert c.eta_s == pytest.approx(0.15)
    assert crsma.SystemConfig.from_db(2, 10.0, 20.0, 1.0, 2.0).power_gfu == pytest.approx(100.0)


def test_closed_form_matches_oracle():
    c = crsma.SystemConfig.from_db(3, 20.0, 8.24, 2.5, 1.5)
    exact = crsma.outage_exact(c)
    oracle = crsma.outage_exact_quadrature_oracle(c)
    assert len(exact.p_case2_terms) == 3
    assert abs(exact.total - oracle.total) < 1e-9
    assert exact.total == pytest.approx(exact.p_case1 + exact.p_case2 + exact.p_case3)
    assert not exact.conditioning_warning


def test_high_snr_agrees_with_closed_form():
    c = crsma.SystemConfig.from_db(5, 45.0, 45.0, 2.0, 1.5)
    exact = crsma.outage_exact(c).total
    assert exact > 0.0
    assert abs(exact / crsma.outage_highsnr(c) - 1.0) < 0.1


def test_single_user_and_dispatch():
    c = crsma.SystemConfig(1, 10.0, 10.0, 1.0, 1.0)
    assert crsma.outage_single_user(c).approx == pytest.approx(0.1)
    assert crsma.outage(c) == crsma.outage_single_user(c).exact
    with pytest.raises(crsma.DispatchError):
        crsma.outage_exact(c)


def test_monte_carlo_matches_closed_form_and_is_worker_independent():
    c = crsma.SystemConfig.from_db(2, 20.0, 20.0, 2.0, 1.5)
    one = crsma.estimate_outage(c, crsma.Scheme.CR_RSMA_SGF, 200_000, crsma.DEFAULT_SEED, 1)
    four = crsma.estimate_outage(c, crsma.Scheme.CR_RSMA_SGF, 200_000, crsma.DEFAULT_SEED, 4)
    assert one == four
    assert one.gfu_outages == four.gfu_outages
    exact = crsma.outage_exact(c).total
    assert abs(one.gfu_outage_prob - exact) <= 4.0 * one.std_err_gfu


def test_invalid_trials_raise():
    c = crsma.SystemConfig(2, 10.0, 10.0, 1.0, 1.0)
    with pytest.raises(crsma.InvalidArgument):
        crsma.estimate_outage(c, trials=0)
    with pytest.raises(crsma.CrsmaError):
        crsma.SystemConfig(0, 10.0, 10.0, 1.0, 1.0)


def test_zones():
    corners = crsma.region_corners(10.0, 20.0)
    assert corners.a0 == pytest.approx(math.log2(11.0))
    assert corners.s == pytest.approx(math.log2(31.0))
    assert crsma.classify_rate_pair(10.0, 20.0, 0.1, 0.1) == crsma.ZoneLabel.NOMA_EITHER
    assert crsma.classify_rate_pair(10.0, 20.0, 10.0, 10.0) == crsma.ZoneLabel.OUTAGE
    with pytest.raises(crsma.DomainError):
        crsma.region_corners(-1.0, 1.0)


def test_preset_rendering():
    assert "fig3" in crsma.preset_names()
    csv = crsma.run_preset("fig7", trials=2000, workers=2)
    lines = [line for line in csv.splitlines() if not line.startswith("#")]
    assert lines[0].startswith("axis_value,scheme,mc_gfu_outage,")
    assert len(lines) == 1 + 2 * 2 * 10
    assert csv == crsma.run_preset("fig7", trials=2000, workers=1)
    with pytest.raises(crsma.UsageError):
        crsma.run_preset("nope")


def test_acceptance_subset():
    results = crsma.run_acceptance(only=[4])
    assert [r.id for r in results] == [4]
    assert results[0].passed, results[0].detail
