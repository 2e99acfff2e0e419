import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ridgeapprox.errors import InvalidArgument
from ridgeapprox.experiments import (ENTROPY_LB, MAUREY, STRATIFIED, ExperimentConfig, fit_slope,
                                     run_rate_experiment, stratified_sizes, theoretical_exponent, write_svg)
from ridgeapprox.stratified import default_chart

SMALL = dict(n_grid=(8, 16, 32, 64), trials=4, n_atoms=40)


def test_fit_exact_power_law():
    ns = [16, 32, 64, 128, 256]
    fit = fit_slope([(n, n ** -0.75) for n in ns])
    assert abs(fit.slope + 0.75) <= 1e-12
    assert fit.r_squared == 1.0


def test_fit_constant():
    fit = fit_slope([(n, 0.3) for n in (2, 4, 8)])
    assert abs(fit.slope) <= 1e-14


def test_fit_intercept():
    fit = fit_slope([(n, 3 * n ** -0.5) for n in (2, 4, 8, 16)])
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log(3), abs=1e-12)


def test_fit_vs_polyfit():
    rng = np.random.default_rng(0)
    n = np.array([10, 20, 40, 80, 160])
    e = rng.uniform(0.1, 1, 5)
    fit = fit_slope(list(zip(n, e)))
    ref = np.polyfit(np.log(n), np.log(e), 1)
    np.testing.assert_allclose([fit.slope, fit.intercept], ref, rtol=1e-12)
    assert 0 <= fit.r_squared <= 1


@pytest.mark.parametrize("pts", [[(1, 0.0), (2, 1.0)], [(1, 1.0), (-2, 1.0)], [(4, 1.0)]])
def test_fit_rejects(pts):
    with pytest.raises(InvalidArgument):
        fit_slope(pts)


@given(st.lists(st.floats(1e-6, 1e6), min_size=3, max_size=8))
def test_r_squared_in_unit_interval(errs):
    fit = fit_slope([(i + 1, e) for i, e in enumerate(errs)])
    assert 0.0 <= fit.r_squared <= 1.0


def test_theoretical_exponents():
    assert theoretical_exponent(MAUREY, 2, 0) == -0.5
    assert theoretical_exponent(STRATIFIED, 2, 0) == -0.75
    assert theoretical_exponent(ENTROPY_LB, 3, 1) == pytest.approx(-1.0)


@pytest.mark.parametrize("grid", [(8, 16, 32), (8, 16, 16, 32), (16, 8, 32, 64)])
def test_config_grid_validation(grid):
    with pytest.raises(InvalidArgument):
        ExperimentConfig(n_grid=grid)


def test_config_round_trip():
    cfg = ExperimentConfig(**SMALL)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(InvalidArgument):
        ExperimentConfig.from_dict({"bogus": 1})


def test_stratified_sizes_default():
    cfg = ExperimentConfig()
    assert stratified_sizes(cfg, default_chart(2, 0)) == [(3, 18), (4, 32), (6, 72), (8, 128), (11, 242)]


@pytest.mark.parametrize("mode", [MAUREY, STRATIFIED])
def test_csv_byte_identical(tmp_path, mode):
    outs = []
    for i in range(2):
        p = tmp_path / f"{mode}{i}.csv"
        run_rate_experiment(ExperimentConfig(**SMALL, output=str(p)), mode)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"n,")


def test_entropy_csv_and_summary(tmp_path):
    p = tmp_path / "lb.csv"
    res = run_rate_experiment(ExperimentConfig(N_grid=(4, 6, 8, 10), a=0.25, output=str(p)), ENTROPY_LB)
    lines = p.read_text().splitlines()
    assert lines[0].startswith("N,n_count,a,delta")
    assert len(lines) == 5
    doc = res.summary()
    for key in ("theoretical_exponent", "fitted_slope", "abs_difference"):
        assert key in doc
    assert doc["abs_difference"] == pytest.approx(abs(doc["fitted_slope"] - doc["theoretical_exponent"]))
    json.dumps(doc)


def test_error_trailer(tmp_path):
    p = tmp_path / "partial.csv"
    with pytest.raises(InvalidArgument):
        run_rate_experiment(ExperimentConfig(N_grid=(4, 6, 7), a=0.25, output=str(p)), ENTROPY_LB)
    lines = p.read_text().splitlines()
    assert len(lines) == 4
    assert lines[1].startswith("4,") and lines[2].startswith("6,")
    assert lines[-1].startswith("# error,\"InvalidArgument")


def test_single_atom_skips_fit():
    chart = default_chart(2, 0)
    f = chart.combo([[0.0, 0.0]], [1.0])
    res = run_rate_experiment(ExperimentConfig(**SMALL), STRATIFIED, f=f)
    assert all(r["mean_error"] < 1e-10 for r in res.rows)
    assert res.fit is None and res.summary()["fit_skipped"] is True


def test_stratified_rows_carry_maurey_reference():
    res = run_rate_experiment(ExperimentConfig(**SMALL), STRATIFIED)
    for r in res.rows:
        assert r["mean_atoms"] <= r["n"]
        assert r["maurey_mean_error"] > 0


def test_unknown_mode():
    with pytest.raises(InvalidArgument):
        run_rate_experiment(ExperimentConfig(**SMALL), "greedy")


def test_svg(tmp_path):
    res = run_rate_experiment(ExperimentConfig(**SMALL), MAUREY)
    text = write_svg(res, tmp_path / "m.svg")
    assert text.startswith("<svg") and text.count("<circle") == 4
