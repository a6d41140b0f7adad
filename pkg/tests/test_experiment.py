import json
import math

import numpy as np
import pytest
from conftest import CORONA
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from alphaperim.alpha_shape import build_alpha_shape, shape_perimeter
from alphaperim.experiment import (
    RAW_HEADER,
    SUMMARY_HEADER,
    ExperimentConfig,
    ExperimentResult,
    fit_loglog_slope,
    normality_diagnostic,
    ols_loglog,
    read_summary_csv,
    replicate_rng,
    run_experiment,
    summarize,
    write_outputs,
    write_raw_csv,
    write_summary_csv,
)

SPEC = "annulus:0.25,1.0"


def small_config(**kw):
    base = dict(domain=SPEC, alphas=[0.2], sample_sizes=[200, 400], replicates=3, master_seed=5)
    return ExperimentConfig(**{**base, **kw})


def test_single_replicate_matches_direct_call():
    res = run_experiment(small_config(sample_sizes=[500], replicates=1, master_seed=9))
    cell = res.cells[0]
    pts = CORONA.sample_uniform(500, replicate_rng(9, 500, 0, 0))
    direct = shape_perimeter(build_alpha_shape(pts, 0.2))
    assert cell.replicate_values == [direct]
    assert cell.error == abs(direct - CORONA.exact_perimeter())
    assert cell.bias == direct - CORONA.exact_perimeter()
    assert cell.std == 0.0


def test_moderate_run_error_range():
    res = run_experiment(small_config(sample_sizes=[5000], replicates=50, master_seed=1))
    c = res.cells[0]
    assert 0 < c.error < 0.2
    assert abs(c.bias) <= c.error


def test_determinism_and_layout():
    a, b = run_experiment(small_config()), run_experiment(small_config())
    assert [c.replicate_values for c in a.cells] == [c.replicate_values for c in b.cells]
    assert [(c.n, c.alpha) for c in a.cells] == [(200, 0.2), (400, 0.2)]
    assert a.true_perimeter == CORONA.exact_perimeter()


def test_replicate_streams_are_distinct():
    draws = {float(replicate_rng(0, n, a, m).random()) for n in (100, 200) for a in (0, 1) for m in range(5)}
    assert len(draws) == 20


values_lists = st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=60)


@given(values_lists, st.floats(-100, 100), st.randoms())
def test_summary_invariants(vals, truth, rnd):
    e, b, s = summarize(vals, truth)
    assert e >= abs(b) - 1e-12 * (1 + abs(b))
    assert s * s == pytest.approx(float(np.var(vals, ddof=1)), rel=1e-12, abs=1e-12)
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    assert summarize(shuffled, truth) == (e, b, s)


def test_exact_power_law_fit():
    ns = [1000, 3000, 10000, 30000]
    fit = ols_loglog(ns, [2.0 * n ** (-2 / 3) for n in ns])
    assert fit.slope == pytest.approx(-2 / 3, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(2.0), abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.ci_high - fit.ci_low < 1e-9


@given(st.floats(-3, 3), st.floats(-5, 5))
def test_power_law_recovery_property(p, logc):
    ns = [100, 300, 1000, 3000, 10000]
    fit = ols_loglog(ns, [math.exp(logc) * n**p for n in ns])
    assert abs(fit.slope - p) < 1e-12
    assert abs(fit.intercept - logc) < 1e-10


def test_perturbed_power_law_against_polyfit():
    ns = np.array([1000, 3000, 10000, 30000, 100000], dtype=float)
    vals = 2.0 * ns ** (-2 / 3) * np.exp(0.01 * np.array([1, -1, 1, -1, 1]))
    fit = ols_loglog(ns, vals)
    slope, intercept = np.polyfit(np.log(ns), np.log(vals), 1)
    assert fit.slope == pytest.approx(slope, abs=1e-12)
    assert fit.intercept == pytest.approx(intercept, abs=1e-10)
    assert abs(fit.slope + 2 / 3) < 0.02
    # CI half width against scipy's linregress standard error.
    lr = stats.linregress(np.log(ns), np.log(vals))
    half = stats.t.ppf(0.975, len(ns) - 2) * lr.stderr
    assert fit.ci_high - fit.slope == pytest.approx(half, rel=1e-9)
    assert fit.r_squared == pytest.approx(lr.rvalue**2, rel=1e-12)


def test_fit_rejects_bad_input():
    res = run_experiment(small_config())
    with pytest.raises(ValueError):
        fit_loglog_slope(res, 0.2)
    with pytest.raises(ValueError):
        fit_loglog_slope(res, 0.2, statistic="median")
    with pytest.raises(ValueError):
        ols_loglog([1, 2], [1, 2])


def test_normality_on_normal_data():
    passes = sum(normality_diagnostic(np.random.default_rng(s).normal(size=1000)).p_value > 0.01 for s in range(100))
    assert passes >= 95


def test_normality_rejects_exponential_and_constant():
    assert normality_diagnostic(np.random.default_rng(0).exponential(size=1000)).p_value < 0.01
    rep = normality_diagnostic([3.0] * 30)
    assert rep.zero_variance and rep.p_value == 0.0
    with pytest.raises(ValueError):
        normality_diagnostic([1.0] * 19)


def test_normality_matches_scipy():
    x = np.random.default_rng(3).standard_t(5, size=200)
    ours = normality_diagnostic(x)
    ref = stats.jarque_bera(x)
    assert ours.jarque_bera_stat == pytest.approx(ref.statistic, rel=1e-10)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-8)


def test_csv_outputs(tmp_path):
    empty = ExperimentResult(SPEC, CORONA.exact_perimeter(), "alpha_shape")
    write_raw_csv(empty, tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text().splitlines() == [",".join(RAW_HEADER)]

    res = run_experiment(small_config())
    write_raw_csv(res, tmp_path / "raw.csv")
    lines = (tmp_path / "raw.csv").read_text().splitlines()
    assert lines[0] == ",".join(RAW_HEADER) and len(lines) == 1 + 6

    write_summary_csv(res, tmp_path / "summary.csv")
    rows = read_summary_csv(tmp_path / "summary.csv")
    assert (tmp_path / "summary.csv").read_text().splitlines()[0] == ",".join(SUMMARY_HEADER)
    for row, c in zip(rows, res.cells):
        assert (row["alpha"], row["n"], row["M"]) == (c.alpha, c.n, c.M)
        assert (row["error"], row["bias"], row["std"]) == (c.error, c.bias, c.std)


def test_write_outputs_report(tmp_path):
    res = run_experiment(small_config(sample_sizes=[200, 400, 800], replicates=20))
    paths = write_outputs(res, tmp_path / "out")
    text = paths["report"].read_text()
    assert "[fit alpha=0.2 statistic=error]" in text
    assert "test=jarque-bera" in text
    assert "# alpha=0.2" in text


def test_error_decreases_on_corona():
    cfg = ExperimentConfig(SPEC, [0.2], [1000, 3000, 10000, 30000], 50, master_seed=77)
    errs = [c.error for c in run_experiment(cfg).cells]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize(
    "kw",
    [
        {"replicates": 0},
        {"alphas": []},
        {"alphas": [0.0]},
        {"sample_sizes": [400, 200]},
        {"estimator": "median"},
        {"domain": "square:1"},
        {"master_seed": -1},
    ],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        small_config(**kw)


def test_config_file_overrides_defaults(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"replicates": 7, "estimator": "hull"}))
    cfg = ExperimentConfig.from_file(path, domain=SPEC, alphas=[0.2], sample_sizes=[100], replicates=2)
    assert cfg.replicates == 7 and cfg.estimator == "alpha_hull" and cfg.domain == SPEC
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        ExperimentConfig.from_file(path, domain=SPEC, alphas=[0.2], sample_sizes=[100], replicates=2)


def test_worker_pool_matches_serial():
    cfg = small_config(replicates=4)
    serial = run_experiment(cfg)
    pooled = run_experiment(small_config(replicates=4, workers=2))
    assert [c.replicate_values for c in serial.cells] == [c.replicate_values for c in pooled.cells]
