from __future__ import annotations

import csv
import json
from dataclasses import replace

import numpy as np
import pytest

from vnmatch.experiments import (
    INFINITY,
    RESULT_COLUMNS,
    SCHEMA_VERSION,
    ExperimentConfig,
    aggregate,
    audit_outputs,
    load_experiment_config,
    parse_matrix,
    read_rows_csv,
    run_experiment,
    write_outputs,
)
from vnmatch.soft import SoftSgmConfig

FAST = SoftSgmConfig(restarts=3, max_iter=30)


def small(kind, **kw):
    base = dict(kind=kind, replicates=2, rng_seed=5, n_vertices=30, soft=FAST)
    base.update(kw)
    return ExperimentConfig(**base)


def test_parse_matrix():
    assert np.array_equal(parse_matrix("1 2; 3, 4"), [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        parse_matrix("1 2; 3")


def test_config_validation():
    with pytest.raises(ValueError):
        small("seed-sweep", replicates=0)
    with pytest.raises(ValueError):
        small("seed-sweep", s_x_grid=())
    with pytest.raises(ValueError):
        small("nonsense")
    with pytest.raises(ValueError):
        small("ratio-sweep", r_grid=(0.0, 0.5))


def test_load_config(tmp_path):
    (tmp_path / "c.ini").write_text(
        "[experiment]\nkind = seed-sweep\nreplicates = 4\nrng_seed = 12\noutput_dir = out\n"
        "[model]\nn_vertices = 60\nlambda = 0.5 0.1; 0.1 0.5\n"
        "[grid]\nrho = 0.2 0.9\ns_x_grid = 1 2\n"
        "[vnmatch]\nh = 1\nell = 3\nrestarts = 7\ngamma = 0.2\n")
    cfg = load_experiment_config(tmp_path / "c.ini")
    assert cfg.kind == "seed-sweep" and cfg.replicates == 4 and cfg.rng_seed == 12
    assert cfg.output_dir == tmp_path / "out"
    assert cfg.rho_grid == (0.2, 0.9) and cfg.s_x_grid == (1, 2)
    assert (cfg.h, cfg.ell, cfg.soft.restarts, cfg.soft.gamma) == (1, 3, 7, 0.2)
    assert cfg.block_matrix.shape == (2, 2)


def test_load_config_needs_kind(tmp_path):
    (tmp_path / "c.ini").write_text("[experiment]\nreplicates = 1\n")
    with pytest.raises(ValueError):
        load_experiment_config(tmp_path / "c.ini")
    assert load_experiment_config(tmp_path / "c.ini", kind="neighborhood").kind == "neighborhood"


def test_seed_sweep_rows():
    cfg = small("seed-sweep", rho_grid=(0.6,), s_x_grid=(1, 3))
    res = run_experiment(cfg)
    assert len(res.rows) == 4
    assert [(r.s_x, r.replicate) for r in res.rows] == [(1, 0), (1, 1), (3, 0), (3, 1)]
    for row, nl in zip(res.rows, res.nominations):
        assert row.local_seeds == nl.s_x <= row.s_x
        assert row.status in ("ok", "na", "stop")
        assert row.tau is None or 0.0 <= row.tau <= 1.0


def test_single_replicate_deterministic():
    cfg = small("seed-sweep", replicates=1, s_x_grid=(2,))
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert len(a.rows) == 1
    assert [r.__dict__ | {"wall_time": 0} for r in a.rows] == [r.__dict__ | {"wall_time": 0} for r in b.rows]


def test_ratio_sweep_sizes():
    cfg = small("ratio-sweep", r_grid=(0.5, 1.0), s_x=2)
    res = run_experiment(cfg)
    sizes = {r.r: r for r in res.rows}
    assert len(res.rows) == 4
    assert all(r.s_x == 2 for r in res.rows)
    assert sizes[1.0].rho == 0.6


def test_neighborhood_rows():
    cfg = small("neighborhood", n_vertices=90, h_grid=(0, 1, 2, INFINITY), seed_count_grid=(5,),
                lam=np.full((3, 3), 0.3))
    res = run_experiment(cfg)
    by_rep = {}
    for r in res.rows:
        by_rep.setdefault(r.replicate, []).append(r.local_seeds)
    for counts in by_rep.values():
        assert counts[0] == 0
        assert counts == sorted(counts)
        assert counts[-1] == 5  # dense graph is connected


def test_neighborhood_shares_draws_across_h():
    cfg = small("neighborhood", n_vertices=60, h_grid=(1, 2), seed_count_grid=(4,))
    res = run_experiment(cfg)
    assert res.rows[0].voi == res.rows[1].voi


def test_aggregate_is_pure_function_of_rows(tmp_path):
    cfg = small("seed-sweep", s_x_grid=(1, 2), replicates=3)
    res = run_experiment(cfg)
    paths = write_outputs(res, tmp_path)
    back = read_rows_csv(paths["results.csv"])
    assert aggregate(back) == aggregate(res.rows)
    summary = list(csv.DictReader(open(paths["summary.csv"])))
    assert len(summary) == 2


def test_aggregate_formula():
    cfg = small("seed-sweep", s_x_grid=(2,), replicates=4)
    res = run_experiment(cfg)
    (rec,) = aggregate(res.rows)
    taus = np.array([r.tau for r in res.rows if r.tau is not None])
    assert rec["mean_tau"] == pytest.approx(taus.mean())
    assert rec["se2_tau"] == pytest.approx(2 * taus.std(ddof=1) / np.sqrt(taus.size))
    assert rec["na_rate"] == pytest.approx(1 - taus.size / 4)


def test_outputs_and_audit(tmp_path):
    res = run_experiment(small("seed-sweep", s_x_grid=(1, 4)))
    paths = write_outputs(res, tmp_path)
    header = paths["results.csv"].read_text().splitlines()[0].split(",")
    assert header == RESULT_COLUMNS
    manifest = json.loads(paths["manifest.json"].read_text())
    assert manifest["schema_version"] == SCHEMA_VERSION
    assert manifest["config"]["soft"]["restarts"] == 3
    assert audit_outputs(tmp_path) == 4


def test_audit_detects_tampering(tmp_path):
    res = run_experiment(small("seed-sweep", s_x_grid=(3,)))
    write_outputs(res, tmp_path)
    path = tmp_path / "results.csv"
    rows = list(csv.reader(open(path)))
    col = rows[0].index("tau")
    rows[1][col] = "0.123"
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    with pytest.raises(AssertionError):
        audit_outputs(tmp_path)


def test_result_files_identical_across_runs(tmp_path):
    cfg = small("ratio-sweep", r_grid=(0.6,), s_x=2)
    write_outputs(run_experiment(cfg), tmp_path / "a")
    write_outputs(run_experiment(cfg), tmp_path / "b")
    for name in ("results.csv", "summary.csv", "nominations.jsonl", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_parallel_matches_serial():
    cfg = small("seed-sweep", s_x_grid=(2,), replicates=3)
    serial = run_experiment(cfg)
    par = run_experiment(replace(cfg, workers=2))
    assert [r.tau for r in serial.rows] == [r.tau for r in par.rows]


def test_custom_nominate(tmp_path):
    from vnmatch.models import CorrelatedPairSpec, SbmSpec, sample_pair
    pair = sample_pair(CorrelatedPairSpec(SbmSpec.equal_blocks(24, np.full((3, 3), 0.4)), 1.0, rng_seed=1))
    paths = pair.save(tmp_path / "pair")
    seeds = pair.seed_pool[:5]
    (tmp_path / "seeds.csv").write_text("".join(f"{s},{pair.truth[s]}\n" for s in seeds))
    (tmp_path / "c.ini").write_text(
        f"[experiment]\nkind = custom-nominate\n[vnmatch]\nrestarts = 3\n"
        f"[data]\ng = {paths['g']}\ng2 = {paths['g2']}\nseeds = seeds.csv\ntruth = {paths['truth']}\n"
        f"vois = {pair.voi}\n")
    cfg = load_experiment_config(tmp_path / "c.ini")
    res = run_experiment(cfg)
    assert len(res.rows) == 1 and res.rows[0].voi == pair.voi
    assert res.rows[0].truth == pair.voi2
