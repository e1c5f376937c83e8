import json
import math
import os

import numpy as np
import pytest

from fpplab.distributions import FiniteAtomic, TwoPoint, Uniform
from fpplab import experiments as ex


def _cfg(experiment, law=None, **kw):
    defaults = dict(
        experiment=experiment,
        d=2,
        law=law or TwoPoint(1.0, 2.0, 0.5),
        n_values=[4, 6],
        replications=8,
        master_seed=0,
    )
    defaults.update(kw)
    return ex.ExperimentConfig(**defaults)


def test_config_validation():
    with pytest.raises(ex.ConfigError):
        _cfg("no_such_experiment")
    with pytest.raises(ex.ConfigError):
        _cfg("variance_scaling", d=1)
    with pytest.raises(ex.ConfigError):
        _cfg("variance_scaling", n_values=[8, 4])
    with pytest.raises(ex.ConfigError):
        _cfg("variance_scaling", replications=1)


def test_config_json_roundtrip(tmp_path):
    doc = {
        "experiment": "variance_scaling",
        "d": 2,
        "law": {"family": "two_point", "a": 1.0, "b": 2.0, "p": 0.5},
        "n_values": [4, 8],
        "replications": 10,
        "master_seed": 7,
        "pad_exponent": 0.75,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    cfg = ex.config_from_json(path)
    assert cfg.law == TwoPoint(1.0, 2.0, 0.5)
    assert cfg.n_values == [4, 8]
    echo = ex.config_to_dict(cfg)
    assert echo["law"] == doc["law"]
    with pytest.raises(ex.ConfigError):
        ex.config_from_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ex.ConfigError):
        ex.config_from_json(bad)


def test_geodesic_condition_gate():
    bad_law = FiniteAtomic([0.0, 1.0], [0.6, 0.4])
    for runner in (ex.run_variance_scaling, ex.run_geo_length, ex.run_fm_compare):
        with pytest.raises(ex.AssumptionError):
            runner(_cfg("variance_scaling", law=bad_law))


def test_variance_constant_law_is_deterministic():
    rows = ex.run_variance_scaling(_cfg("variance_scaling",
                                        law=FiniteAtomic([3.0], [1.0])))
    by_stat = {(r.n, r.statistic): r for r in rows}
    for n in (4, 6):
        assert by_stat[(n, "tau_var")].value == 0.0
        assert by_stat[(n, "tau_mean")].value == 3.0 * n


def test_variance_rows_have_metadata():
    rows = ex.run_variance_scaling(_cfg("variance_scaling"))
    assert len(rows) == 2 * 4
    for r in rows:
        assert r.reps == 8
        assert 0.0 <= r.boundary_frac <= 1.0
        assert r.seed == 0
        if r.statistic == "tau_var":
            assert r.std_err > 0.0


def test_fm_compare_small():
    rows = ex.run_fm_compare(_cfg("fm_compare", law=Uniform(1.0, 2.0),
                                  n_values=[4], replications=6))
    stats = {r.statistic for r in rows}
    assert {"tau_var", "fm_var", "var_gap", "var_gap_over_n34"} <= stats
    gap = next(r for r in rows if r.statistic == "var_gap")
    assert gap.value >= 0.0 and math.isfinite(gap.value)


def test_fm_constant_law_zero_variances():
    rows = ex.run_fm_compare(_cfg("fm_compare", law=FiniteAtomic([2.0], [1.0]),
                                  n_values=[4], replications=4))
    for r in rows:
        if r.statistic in ("tau_var", "fm_var", "var_gap"):
            assert r.value == 0.0


def test_geo_length_constant_tube_exact():
    rows = ex.run_geo_length(_cfg("geo_length", law=FiniteAtomic([1.0], [1.0]),
                                  n_values=[5], replications=3))
    report = {r.statistic: r.value for r in rows}
    # constant weights, displacement along e1: the straight path is the
    # unique geodesic (any detour costs at least two extra edges)
    assert report["geodesic_edges"] == 5.0
    assert report["geo_intersection_edges"] == 5.0


def test_low_density_rows():
    cfg = _cfg("low_density", law=Uniform(0.0, 1.0), n_values=[6],
               replications=6, epsilons=(0.1, 0.5))
    rows = ex.run_low_density(cfg)
    stats = [r.statistic for r in rows]
    assert "low_count[eps=0.1]" in stats
    assert "low_ratio[eps=0.5]" in stats
    assert "dyadic_x[1]" in stats
    med = next(r for r in rows if r.statistic == "dyadic_x[1]")
    assert med.value == Uniform(0.0, 1.0).quantile(0.5)
    with pytest.raises(ex.ConfigError):
        ex.run_low_density(cfg, epsilons=[-0.1])


def test_low_density_full_range_counts_whole_geodesic():
    cfg = _cfg("low_density", law=Uniform(0.5, 1.0), n_values=[5],
               replications=5, epsilons=(0.6,))
    rows = ex.run_low_density(cfg)
    count = next(r for r in rows if r.statistic == "low_count[eps=0.6]")
    geo = ex.run_geo_length(_cfg("geo_length", law=Uniform(0.5, 1.0),
                                 n_values=[5], replications=5))
    length = next(r for r in geo if r.statistic == "geodesic_edges")
    assert count.value == length.value  # full-support interval counts all edges


def test_cheap_path_threshold_at_infimum():
    # a <= I: no path can be cheaper than I per edge
    cfg = _cfg("cheap_path", n_values=[4], replications=10, cheap_a=1.0)
    rows = ex.run_cheap_path(cfg)
    p = next(r for r in rows if r.statistic == "cheap_prob")
    assert p.value == 0.0
    # huge a: probability one
    rows = ex.run_cheap_path(_cfg("cheap_path", n_values=[4], replications=10),
                             a=10.0)
    p = next(r for r in rows if r.statistic == "cheap_prob")
    assert p.value == 1.0


def test_entropy_suite_small():
    rows = ex.run_entropy_suite(_cfg("entropy_suite"), instances=40, mini_envs=6)
    by_stat = {r.statistic: r.value for r in rows}
    for check in ("fs", "tensorization", "variational", "bonami", "ibp"):
        assert by_stat[f"{check}_pass"] == 1.0
        assert by_stat[f"{check}_min_slack"] >= -1e-10
    assert by_stat["martingale_pass"] == 1.0
    assert by_stat["martingale_max_orth_gap"] <= 1e-12
    assert by_stat["martingale_log_bound_min_slack"] >= -1e-10


def test_encoding_suite_small():
    rows = ex.run_encoding(_cfg("encoding"), depth=16, samples=2000,
                           exhaustive_depth=6)
    fails = ex.failing_rows(rows)
    assert fails == []


def test_animals_suite_small():
    cfg = _cfg("animals", n_values=[6], replications=120)
    rows = ex.run_animals(cfg, p_grid=(1.0, 0.5), covers=50)
    by_stat = {r.statistic: r.value for r in rows}
    assert by_stat["animal_ratio[p=1]"] == 1.0
    assert by_stat["bnb_consistent_pass"] == 1.0
    assert by_stat["cover_pass"] == 1.0
    assert ex.failing_rows(rows) == []


def test_csv_and_manifest_output(tmp_path):
    cfg = _cfg("variance_scaling", n_values=[4], replications=4,
               out_path=str(tmp_path / "out.csv"))
    rows = ex.run_to_files(cfg, cfg.out_path)
    text = (tmp_path / "out.csv").read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "experiment,n,statistic,value,std_err,reps,boundary_frac,seed"
    assert len(lines) == len(rows) + 1
    manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["config"]["experiment"] == "variance_scaling"
    assert "artifact_version" in manifest


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("WORKERS", "3")
    assert ex.worker_count() == 3
    monkeypatch.setenv("WORKERS", "0")
    with pytest.raises(ex.ConfigError):
        ex.worker_count()
    monkeypatch.setenv("WORKERS", "many")
    with pytest.raises(ex.ConfigError):
        ex.worker_count()


def test_csv_bytes_identical_across_workers(tmp_path, monkeypatch):
    cfg_kw = dict(n_values=[4, 6], replications=6)
    outs = []
    for workers in ("1", "4"):
        monkeypatch.setenv("WORKERS", workers)
        cfg = _cfg("geo_length", **cfg_kw)
        path = tmp_path / f"w{workers}.csv"
        ex.write_csv(ex.run_experiment(cfg), path)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_boundary_warning_row_on_thin_padding():
    # near-zero padding plus heavy-tailed wandering: geodesics hit the wall
    from fpplab.distributions import Exponential

    cfg = _cfg("geo_length", law=Exponential(1.0), n_values=[8],
               replications=10, pad_exponent=0.01)
    rows = ex.run_geo_length(cfg)
    warnings = [r for r in rows if r.statistic == "boundary_warning"]
    assert warnings and warnings[0].value > ex.BOUNDARY_FLAG_LEVEL
    # generous padding: no warning row
    rows = ex.run_geo_length(_cfg("geo_length", law=Uniform(0.5, 1.5),
                                  n_values=[8], replications=10))
    assert not [r for r in rows if r.statistic == "boundary_warning"]


def test_jackknife_matches_classic_se_for_mean():
    rng = np.random.default_rng(0)
    v = rng.normal(size=200)
    est, se = ex.jackknife(v, lambda a: float(np.mean(a)))
    classic = float(np.std(v, ddof=1) / np.sqrt(v.size))
    assert est == pytest.approx(float(v.mean()))
    assert se == pytest.approx(classic, rel=1e-10)


def test_variance_runs_in_3d():
    cfg = _cfg("variance_scaling", d=3, n_values=[3], replications=4)
    rows = ex.run_variance_scaling(cfg)
    mean = next(r for r in rows if r.statistic == "tau_mean")
    assert mean.value > 0.0


def test_padded_box_geometry():
    box = ex.padded_box(2, 16, 0.75)
    pad = math.ceil(16**0.75)
    assert box.lo == (-pad, -pad)
    assert box.hi == (16 + pad, 16 + pad)
    assert box.contains((0, 0)) and box.contains((16, 0))
