import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from quasiqec import cli
from quasiqec.harness import (
    ConfigError,
    ExperimentConfig,
    PointResult,
    read_csv,
    run_point,
    run_sweep,
    threshold_bracket,
)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(sigma=0.1, p=0.02).resolved()
    with pytest.raises(ConfigError):
        ExperimentConfig().resolved()  # neither sigma nor p
    with pytest.raises(ConfigError):
        ExperimentConfig(p=0.01, backend="magic").resolved()
    with pytest.raises(ConfigError):
        ExperimentConfig(p=0.01, d=4).resolved()
    with pytest.raises(ConfigError):
        ExperimentConfig(p=0.01, d=7, backend="coherent").resolved()
    with pytest.raises(ConfigError):
        ExperimentConfig(p=0.01, q=0.9).resolved()
    cfg = ExperimentConfig(p=0.02, d=5, backend="pauli").resolved()
    assert cfg.t == 5 and cfg.n_outer == 100_000
    cfg2 = ExperimentConfig(sigma=0.1, d=3, backend="coherent", t=3).resolved()
    assert cfg2.n_outer == 6000 and cfg2.n_readout == 1  # q = 0 needs no resamples


def test_noiseless_points_are_zero():
    for backend in ("pauli", "coherent"):
        cfg = ExperimentConfig(
            code="surface", d=3, t=2, backend=backend, sigma=0.0, q=0.0,
            n_outer=200, seed=1,
        )
        r = run_point(cfg)
        assert r.pl == 0.0
        assert r.p == 0.0


def test_sweep_reproducibility(tmp_path):
    cfgs = [
        ExperimentConfig(code="surface", d=3, t=3, backend="pauli", p=0.02,
                         q=0.02, n_outer=3000, seed=7),
        ExperimentConfig(code="surface", d=3, t=3, backend="coherent", p=0.02,
                         q=0.02, n_outer=150, n_readout=5, seed=7),
    ]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(cfgs, out_csv=out1, out_json=tmp_path / "a.json")
    run_sweep(cfgs, out_csv=out2, out_json=tmp_path / "b.json", workers=2)
    assert out1.read_bytes() == out2.read_bytes()
    rows = read_csv(out1)
    assert len(rows) == 2 and rows[0].backend == "pauli"
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["version"] and len(doc["points"]) == 2


def test_stderr_scales_with_samples():
    base = ExperimentConfig(code="surface", d=3, t=3, backend="pauli",
                            p=0.04, q=0.04, seed=3)
    r1 = run_point(ExperimentConfig(**{**base.__dict__, "n_outer": 20_000}))
    r2 = run_point(ExperimentConfig(**{**base.__dict__, "n_outer": 40_000}), grid_index=1)
    ratio = r2.stderr / r1.stderr
    assert abs(ratio - 1 / math.sqrt(2)) < 0.1 / math.sqrt(2)


def _mk(d, p, pl, stderr=1e-4):
    return PointResult(d=d, p=p, q=p, sigma=0.0, backend="pauli", t=d,
                       pl=pl, stderr=stderr, n=1, wall_time=0.0)


def test_threshold_bracket_synthetic():
    rows = []
    for p, pls in [(0.02, (0.10, 0.05, 0.02)), (0.03, (0.09, 0.09, 0.09)),
                   (0.04, (0.12, 0.2, 0.3))]:
        for d, pl in zip((7, 9, 11), pls):
            rows.append(_mk(d, p, pl))
    br = threshold_bracket(rows)
    assert br.lower == 0.02 and br.upper == 0.04 and br.monotone


def test_threshold_bracket_flags_noise():
    rows = [_mk(7, 0.02, 0.10), _mk(9, 0.02, 0.12), _mk(11, 0.02, 0.05)]
    br = threshold_bracket(rows)
    assert br.lower is None and not br.monotone


def test_cli_sweep_and_config_override(tmp_path):
    runner = CliRunner()
    out = tmp_path / "s.csv"
    conf = tmp_path / "conf.txt"
    conf.write_text("samples = 500\nq = 0.01\n")
    res = runner.invoke(cli.main, [
        "sweep", "--d", "3", "--cycles", "2", "--p", "0.01", "--q", "0.5",
        "--backend", "pauli", "--samples", "100", "--seed", "2",
        "--out", str(out), "--config", str(conf),
    ])
    assert res.exit_code == 0, res.output
    rows = read_csv(out)
    assert rows[0].n == 500  # config file wins over the flag
    assert rows[0].q == 0.01
    doc = json.loads((tmp_path / "s.json").read_text())
    assert doc["points"][0]["n_outer"] == 500


def test_cli_bad_config_exits_2(tmp_path):
    runner = CliRunner()
    res = runner.invoke(cli.main, [
        "sweep", "--d", "3", "--out", str(tmp_path / "x.csv"),
    ], catch_exceptions=False)
    assert res.exit_code == 2


def test_cli_tvd_and_repcode_tables(tmp_path):
    runner = CliRunner()
    out = tmp_path / "tvd.csv"
    res = runner.invoke(cli.main, ["tvd-curve", "--sigma", "0.1,0.3", "--out", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().splitlines()
    assert lines[0] == "sigma,p_best,delta_min,delta_at_p_equiv"
    assert len(lines) == 3
    out2 = tmp_path / "table.csv"
    res = runner.invoke(cli.main, ["repcode-table", "--p", "0.05", "--out", str(out2)])
    assert res.exit_code == 0, res.output
    body = out2.read_text().splitlines()
    assert body[0] == "row,e1,e2,merged,pauli_prob,coherent_weight"
    assert len(body) == 17


def test_break_even_spot_cells():
    # deep-noise corner is red, small-p / moderate-q is green
    from quasiqec.harness import break_even_map_d3

    red = break_even_map_d3([0.10], [0.10], backend="coherent",
                            n_outer=1500, n_readout=10, seed=5)[0]
    assert not red.green and red.pl > 0.2
    green = break_even_map_d3([0.005], [0.02], backend="coherent",
                              n_outer=12_000, n_readout=20, seed=5)[0]
    assert green.green and green.pl + 2 * green.stderr < green.p


def test_pure_readout_noise_never_fails():
    # with essentially no data errors, readout noise alone cannot cause a
    # logical failure at any tested q: spacelike edges are prohibitively
    # heavy, so corrections stay trivial
    for d in (3, 5):
        for q in (0.03, 0.1):
            cfg = ExperimentConfig(code="surface", d=d, t=d, backend="pauli",
                                   p=1e-9, q=q, n_outer=4000, seed=9)
            assert run_point(cfg).pl == 0.0


def test_upper_bracket_near_four_percent_at_q_one_percent():
    # fixed readout rate q = 1%: scaling breaks down once the data rate
    # passes roughly 4%
    rows = []
    for gi_p, p in enumerate((0.032, 0.04, 0.048)):
        for gi_d, d in enumerate((7, 9)):
            cfg = ExperimentConfig(code="surface", d=d, t=d, backend="pauli",
                                   p=p, q=0.01, n_outer=15_000, seed=31)
            rows.append(run_point(cfg, grid_index=10 * gi_p + gi_d))
    br = threshold_bracket(rows)
    assert br.upper is not None and 0.03 < br.upper <= 0.05
    # the 0.032 column sits too close to the boundary to certify a strict
    # decrease at this sample size; only the upper bound is pinned here
    assert br.lower is None or br.lower <= 0.04


def test_csv_header_contract(tmp_path):
    from quasiqec.harness import CSV_HEADER

    assert CSV_HEADER == ["d", "p", "q", "sigma", "backend", "t", "pl", "stderr", "n"]
    cfg = ExperimentConfig(code="repetition", backend="pauli", p=0.05, t=2,
                           n_outer=50, seed=0)
    out = tmp_path / "r.csv"
    run_sweep([cfg], out_csv=out)
    assert out.read_text().splitlines()[0] == "d,p,q,sigma,backend,t,pl,stderr,n"
