import math
from dataclasses import replace

import pytest

from certdel.errors import DomainError, StrategyUnavailable
from certdel.experiments import (
    CSV_COLUMNS, Estimate, ExperimentConfig, estimate_forge_curve, estimate_p_dist,
    estimate_p_nfp, estimate_p_reading, forge_acceptance_closed_form, forge_curve_slope,
    run_trials, seal_bounds, table1_report,
)
from conftest import binomial_ok


def test_seal_bounds_formula():
    b = seal_bounds(0.5, 1e6)
    assert b.p_dist == pytest.approx(0.5 + 0.25 * (2 * math.sqrt(0.5) + 0.5), abs=1e-12)
    assert b.p_dist == pytest.approx(0.978553, abs=1e-6)
    assert b.p_nfp == pytest.approx(0.75, abs=1e-3)
    assert not b.exceeds_one


def test_seal_bounds_raw_values_above_one():
    b = seal_bounds(0.0, 2)
    assert b.p_dist == pytest.approx(1.25)
    assert b.p_nfp == pytest.approx(0.0)
    assert b.exceeds_one
    assert seal_bounds(1.0, 10).p_dist == pytest.approx(0.5)


@pytest.mark.parametrize("p,M", [(-0.1, 10), (1.1, 10), (0.5, 1)])
def test_seal_bounds_domain(p, M):
    with pytest.raises(DomainError):
        seal_bounds(p, M)


def test_estimate_stderr():
    est = Estimate.from_counts("x", 250, 1000, 0)
    assert est.value == 0.25
    assert est.stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 1000))
    assert est.within(0.25) and not est.within(0.5)


def test_config_validation():
    with pytest.raises(StrategyUnavailable):
        ExperimentConfig(strategy="ball-povm")
    with pytest.raises(ValueError):
        ExperimentConfig(strategy="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    assert ExperimentConfig().scheme == "toy-16"
    assert ExperimentConfig(code="hamming-7-4-3").scheme == "toy-4"


def test_estimators_check_strategy():
    cfg = ExperimentConfig(trials=10, strategy="honest-delete")
    with pytest.raises(StrategyUnavailable):
        estimate_p_reading(cfg)
    with pytest.raises(StrategyUnavailable):
        estimate_p_dist(cfg)
    with pytest.raises(StrategyUnavailable):
        estimate_p_nfp(replace(cfg, strategy="honest-read"))


def test_honest_delete_nfp_is_one():
    for cert in ("quantum", "classical"):
        est = estimate_p_nfp(ExperimentConfig(trials=300, strategy="honest-delete",
                                              certificate=cert))
        assert est.value == 1.0


def test_random_certificate_baseline():
    est = estimate_p_nfp(ExperimentConfig(trials=4000, strategy="random-certificate"))
    assert binomial_ok(est.successes, est.trials, 1 / 8)


def test_runs_are_deterministic():
    cfg = ExperimentConfig(trials=200, seed=5, strategy="measure-forge")
    assert run_trials(cfg) == run_trials(cfg)
    assert run_trials(cfg) != run_trials(replace(cfg, seed=6))


def test_serial_and_parallel_agree():
    cfg = ExperimentConfig(code="hamming-7-4-3", trials=300, seed=3, strategy="ball-povm")
    assert run_trials(cfg) == run_trials(replace(cfg, workers=2))


def test_forge_curve_matches_closed_form():
    curve = estimate_forge_curve("bch-15-5-7", [0, 1, 2, 3], 3000, seed=1)
    assert curve[0][1].value == 1.0
    for e, est in curve:
        assert binomial_ok(est.successes, est.trials, forge_acceptance_closed_form(e))
    assert forge_curve_slope(curve) == pytest.approx(
        forge_curve_slope([(e, Estimate("c", forge_acceptance_closed_form(e), 0, 1, 0, 0))
                           for e in (1, 2, 3)]), abs=0.1)


def test_slope_needs_two_points():
    with pytest.raises(ValueError):
        forge_curve_slope([(1, Estimate("a", 0.5, 0, 1, 0, 0))])


def test_table1_report_shape_and_reproducibility():
    a = table1_report(trials=200, seed=11)
    b = table1_report(trials=200, seed=11)
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()
    lines = a.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 5
    assert lines[1].startswith("upper bound (formula),0.500000,0.978553,0.750000,,")
    measured = [r for r in a.rows if r["scheme"].startswith("ours (measured")]
    assert all(r["p_nfp"] == 1.0 for r in measured)
    assert any("dagger" in n for n in a.notes)
    assert table1_report(trials=200, seed=12).to_csv() != a.to_csv()


def test_report_save(tmp_path):
    rep = table1_report(trials=50, seed=1)
    rep.save(tmp_path / "t.csv")
    rep.save(tmp_path / "t.json")
    assert (tmp_path / "t.csv").read_text() == rep.to_csv()
    assert (tmp_path / "t.json").read_text() == rep.to_json()
