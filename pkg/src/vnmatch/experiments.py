"""Monte Carlo studies of local-neighborhood vertex nomination.

Three designs are supported, each a grid of parameter points times a number
of replicates:

* ``seed-sweep``: rho-correlated SBM pairs of equal size, varying the number
  of local seeds ``s_x`` (and optionally ``rho``);
* ``ratio-sweep``: the second graph covers a fraction ``r`` of the first;
* ``neighborhood``: how many of ``|S|`` random seeds fall within ``h`` hops of
  a random vertex.

Replicate ``i`` at grid point ``j`` draws everything from streams keyed by
``(rng_seed, j, i)``, so results do not depend on worker count or
scheduling. Result files hold no timing information; wall times go to a
separate ``timings.csv``.
"""
from __future__ import annotations

import configparser
import csv
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import INFINITY, Graph, SeedMap, load_edge_list, load_label_pairs, load_seed_map, neighborhood
from .models import CorrelatedPairSpec, LabeledPair, SbmSpec, sample_pair, sample_ratio_pair, sample_sbm
from .nomination import NominationList, VnConfig, evaluate_tau, nominate
from .rng import derive_seed, substream
from .soft import SoftSgmConfig

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

#: Block matrix of the seed- and ratio-sweep simulations.
SWEEP_LAMBDA = np.array([[0.7, 0.3, 0.4],
                         [0.3, 0.7, 0.3],
                         [0.4, 0.3, 0.7]])

#: Block matrix of the neighborhood-size study: 0.4 within, 0.05 across blocks.
NEIGHBORHOOD_LAMBDA = np.full((3, 3), 0.05) + np.eye(3) * 0.35

KINDS = ("seed-sweep", "ratio-sweep", "neighborhood", "custom-nominate")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    replicates: int = 100
    rng_seed: int = 0
    output_dir: Path | None = None
    workers: int = 1
    n_vertices: int = 300
    lam: np.ndarray | None = None
    rho_grid: tuple[float, ...] = (0.6,)
    s_x_grid: tuple[int, ...] = tuple(range(1, 11))
    r_grid: tuple[float, ...] = tuple(round(0.25 + 0.05 * i, 2) for i in range(16))
    h_grid: tuple[float, ...] = (1, 2, 3, 4)
    seed_count_grid: tuple[int, ...] = (10, 30)
    s_x: int = 4
    h: int = 2
    ell: int = 2
    soft: SoftSgmConfig = field(default_factory=SoftSgmConfig)
    # custom-nominate inputs
    g_path: Path | None = None
    g2_path: Path | None = None
    seeds_path: Path | None = None
    truth_path: Path | None = None
    vois: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        for name in ("rho_grid", "s_x_grid", "r_grid", "h_grid", "seed_count_grid"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if any(not 0 < r <= 1 for r in self.r_grid):
            raise ValueError("ratio grid must lie in (0, 1]")
        if any(not 0 <= rho <= 1 for rho in self.rho_grid):
            raise ValueError("rho grid must lie in [0, 1]")
        if self.kind == "custom-nominate" and not (self.g_path and self.g2_path and self.seeds_path):
            raise ValueError("custom-nominate needs g, g2 and seeds files in the [data] section")
        VnConfig(self.h, self.ell, self.soft)

    @property
    def block_matrix(self) -> np.ndarray:
        if self.lam is not None:
            return np.asarray(self.lam, dtype=np.float64)
        return NEIGHBORHOOD_LAMBDA if self.kind == "neighborhood" else SWEEP_LAMBDA

    @property
    def vn_config(self) -> VnConfig:
        return VnConfig(self.h, self.ell, self.soft)

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Path):
                v = str(v)
            elif isinstance(v, np.ndarray):
                v = v.tolist()
            elif isinstance(v, SoftSgmConfig):
                v = v.to_dict()
            elif isinstance(v, tuple):
                v = [_h_str(x) if f.name == "h_grid" else x for x in v]
            d[f.name] = v
        d.pop("output_dir")
        d.pop("workers")
        d["lam"] = self.block_matrix.tolist()
        return d


@dataclass
class ResultRow:
    experiment: str
    replicate: int
    rho: float | None = None
    s_x: int | None = None
    r: float | None = None
    h: float | None = None
    n_seeds: int | None = None
    voi: str = ""
    truth: str = ""
    status: str = "ok"
    tau: float | None = None
    rank: float | None = None
    candidate_count: int | None = None
    local_seeds: int | None = None
    size_g: int | None = None
    size_g2: int | None = None
    wall_time: float = field(default=0.0, compare=False)


RESULT_COLUMNS = [f.name for f in fields(ResultRow) if f.name != "wall_time"]
GRID_KEYS = ("rho", "s_x", "r", "h", "n_seeds")


# ----------------------------------------------------------------------------
# config parsing

def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _hops(text: str) -> tuple[float, ...]:
    out = []
    for t in text.replace(",", " ").split():
        out.append(INFINITY if t.lower() in ("inf", "infinity") else int(t))
    return tuple(out)


def _h_str(h) -> str | int:
    return "inf" if h == INFINITY else int(h)


def parse_matrix(text: str) -> np.ndarray:
    """Rows separated by ``;``, entries by spaces or commas."""
    rows = [_floats(row) for row in text.split(";") if row.strip()]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return np.array(rows)


def soft_config_from_section(sec, base: SoftSgmConfig = SoftSgmConfig()) -> SoftSgmConfig:
    return SoftSgmConfig(
        restarts=sec.getint("restarts", base.restarts),
        gamma=sec.getfloat("gamma", base.gamma),
        eps=sec.getfloat("eps", base.eps),
        max_iter=sec.getint("max_iter", base.max_iter),
        rng_seed=sec.getint("rng_seed", base.rng_seed),
        workers=sec.getint("workers", base.workers),
    )


def read_config_file(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    return cp


def load_experiment_config(path, kind: str | None = None) -> ExperimentConfig:
    """Read an INI-style experiment config.

    Sections: ``[experiment]`` (kind, replicates, rng_seed, output_dir,
    workers), ``[model]`` (n_vertices, lambda), ``[grid]`` (rho, s_x, r, h,
    seeds; each also accepted with a ``_grid`` suffix), ``[vnmatch]`` (h, ell, s_x, restarts, gamma, eps, max_iter) and,
    for custom runs, ``[data]`` (g, g2, seeds, truth, vois). Relative paths
    resolve against the config file's directory.
    """
    path = Path(path)
    cp = read_config_file(path)
    base = path.parent

    def sec(name):
        return cp[name] if cp.has_section(name) else cp[cp.default_section]

    ex, model, grid, vn, data = (sec(n) for n in ("experiment", "model", "grid", "vnmatch", "data"))
    kind = kind or ex.get("kind")
    if kind is None:
        raise ValueError("experiment kind missing (set [experiment] kind or pass it on the command line)")
    if kind == "neighborhood-study":
        kind = "neighborhood"
    kw: dict = {"kind": kind}

    def resolve(p):
        return None if p is None else (base / p if not Path(p).is_absolute() else Path(p))

    if "replicates" in ex:
        kw["replicates"] = ex.getint("replicates")
    if "rng_seed" in ex:
        kw["rng_seed"] = ex.getint("rng_seed")
    if "workers" in ex:
        kw["workers"] = ex.getint("workers")
    kw["output_dir"] = resolve(ex.get("output_dir"))
    if "n_vertices" in model:
        kw["n_vertices"] = model.getint("n_vertices")
    if "lambda" in model:
        kw["lam"] = parse_matrix(model["lambda"])
    for key, name, conv in (("rho", "rho_grid", _floats), ("s_x", "s_x_grid", _ints), ("r", "r_grid", _floats),
                            ("h", "h_grid", _hops), ("seeds", "seed_count_grid", _ints)):
        for k in (key, name):
            if k in grid:
                kw[name] = conv(grid[k])
    for key in ("h", "ell", "s_x"):
        if key in vn:
            kw[key] = vn.getint(key)
    kw["soft"] = soft_config_from_section(vn)
    if kind == "custom-nominate":
        kw["g_path"] = resolve(data.get("g"))
        kw["g2_path"] = resolve(data.get("g2"))
        kw["seeds_path"] = resolve(data.get("seeds"))
        kw["truth_path"] = resolve(data.get("truth"))
        kw["vois"] = tuple(data.get("vois", "").replace(",", " ").split())
    return ExperimentConfig(**kw)


# ----------------------------------------------------------------------------
# replicate workers (top level so they pickle)

def _local_seed_map(pair: LabeledPair, voi: str, h: int, s_x: int, rng) -> SeedMap:
    """``s_x`` seeds drawn uniformly from shared vertices within ``h`` hops of ``voi``."""
    g = pair.g
    near = neighborhood(g, [g.index(voi)], h)
    pool = [lab for lab in pair.seed_pool if lab != voi and g.index(lab) in near]
    take = min(s_x, len(pool))
    chosen = sorted(rng.choice(len(pool), size=take, replace=False).tolist()) if take else []
    return SeedMap(tuple((pool[i], pair.truth[pool[i]]) for i in chosen))


def _nominate_row(row: ResultRow, pair: LabeledPair, cfg: ExperimentConfig, s_x: int, key: int):
    rng = substream(key, 1)
    seeds = _local_seed_map(pair, pair.voi, cfg.h, s_x, rng)
    vn = VnConfig(cfg.h, cfg.ell, replace(cfg.soft, rng_seed=derive_seed(key, 2), workers=1))
    nl = nominate(pair.g, pair.g2, seeds, pair.voi, vn)
    _fill_from_nomination(row, nl, pair.voi2)
    return row, nl


def _fill_from_nomination(row: ResultRow, nl: NominationList, truth: str | None):
    row.voi = nl.voi
    row.truth = truth or ""
    row.local_seeds = nl.s_x
    row.size_g, row.size_g2 = nl.size_g, nl.size_g2
    row.candidate_count = nl.candidate_count
    if nl.stopped:
        row.status = "stop"
        return
    if truth is None:
        row.status = "no-truth"
        return
    t = evaluate_tau(nl, truth)
    if t.is_na:
        row.status = "na"
    else:
        row.tau, row.rank = t.tau, t.rank


def _seed_sweep_task(args):
    cfg, gi, rep, rho, s_x = args
    t0 = time.perf_counter()
    key = derive_seed(cfg.rng_seed, gi, rep)
    spec = CorrelatedPairSpec(SbmSpec.equal_blocks(cfg.n_vertices, cfg.block_matrix), rho, rng_seed=key)
    pair = sample_pair(spec)
    row, nl = _nominate_row(ResultRow("seed-sweep", rep, rho=rho, s_x=s_x, h=cfg.h), pair, cfg, s_x, key)
    row.wall_time = time.perf_counter() - t0
    return [row], [nl]


def _ratio_sweep_task(args):
    cfg, gi, rep, rho, r = args
    t0 = time.perf_counter()
    key = derive_seed(cfg.rng_seed, gi, rep)
    pair = sample_ratio_pair(SbmSpec.equal_blocks(cfg.n_vertices, cfg.block_matrix), r, rho, rng_seed=key)
    row, nl = _nominate_row(ResultRow("ratio-sweep", rep, rho=rho, s_x=cfg.s_x, r=r, h=cfg.h),
                            pair, cfg, cfg.s_x, key)
    row.wall_time = time.perf_counter() - t0
    return [row], [nl]


def _neighborhood_task(args):
    cfg, gi, rep, n_seeds = args
    t0 = time.perf_counter()
    key = derive_seed(cfg.rng_seed, gi, rep)
    rng = substream(key, 0)
    spec = SbmSpec.equal_blocks(cfg.n_vertices, cfg.block_matrix)
    g = sample_sbm(spec, rng)
    x = int(rng.integers(g.n_vertices))
    others = np.delete(np.arange(g.n_vertices), x)
    seeds = rng.choice(others, size=min(n_seeds, others.size), replace=False)
    rows = []
    for h in cfg.h_grid:
        near = neighborhood(g, [x], h)
        local = int(sum(1 for s in seeds if int(s) in near))
        rows.append(ResultRow("neighborhood", rep, h=h, n_seeds=n_seeds, voi=g.labels[x],
                              local_seeds=local, size_g=len(near)))
    elapsed = time.perf_counter() - t0
    for row in rows:
        row.wall_time = elapsed / len(rows)
    return rows, [None] * len(rows)


def _custom_task(args):
    cfg, voi, g, g2, seeds, truth = args
    t0 = time.perf_counter()
    row = ResultRow("custom-nominate", 0, h=cfg.h)
    nl = nominate(g, g2, seeds, voi, cfg.vn_config)
    _fill_from_nomination(row, nl, truth.get(voi) if truth is not None else None)
    row.wall_time = time.perf_counter() - t0
    return [row], [nl]


def _tasks(cfg: ExperimentConfig):
    if cfg.kind == "seed-sweep":
        points = list(itertools.product(cfg.rho_grid, cfg.s_x_grid))
        return _seed_sweep_task, [(cfg, gi, rep, rho, sx) for gi, (rho, sx) in enumerate(points)
                                  for rep in range(cfg.replicates)]
    if cfg.kind == "ratio-sweep":
        points = list(itertools.product(cfg.rho_grid, cfg.r_grid))
        return _ratio_sweep_task, [(cfg, gi, rep, rho, r) for gi, (rho, r) in enumerate(points)
                                   for rep in range(cfg.replicates)]
    if cfg.kind == "neighborhood":
        return _neighborhood_task, [(cfg, gi, rep, s) for gi, s in enumerate(cfg.seed_count_grid)
                                    for rep in range(cfg.replicates)]
    g = load_edge_list(cfg.g_path)
    g2 = load_edge_list(cfg.g2_path)
    seeds = load_seed_map(cfg.seeds_path)
    truth = dict(load_label_pairs(cfg.truth_path)) if cfg.truth_path else None
    seeded = set(seeds.left)
    vois = cfg.vois or tuple(lab for lab in g.labels if lab not in seeded and (truth is None or lab in truth))
    return _custom_task, [(cfg, v, g, g2, seeds, truth) for v in vois]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ResultRow]
    nominations: list[NominationList | None]

    def summary(self) -> list[dict]:
        return aggregate(self.rows)


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentResult:
    """Run every (grid point, replicate) task; rows come back in task order."""
    fn, tasks = _tasks(cfg)
    rows: list[ResultRow] = []
    noms: list = []
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = pool.map(fn, tasks, chunksize=1)
            for i, (r, n) in enumerate(results):
                rows.extend(r)
                noms.extend(n)
                if progress:
                    progress(i + 1, len(tasks))
    else:
        for i, task in enumerate(tasks):
            r, n = fn(task)
            rows.extend(r)
            noms.extend(n)
            if progress:
                progress(i + 1, len(tasks))
    return ExperimentResult(cfg, rows, noms)


def run_seed_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    return run_experiment(replace(cfg, kind="seed-sweep"))


def run_ratio_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    return run_experiment(replace(cfg, kind="ratio-sweep"))


def run_neighborhood_study(cfg: ExperimentConfig) -> ExperimentResult:
    return run_experiment(replace(cfg, kind="neighborhood"))


# ----------------------------------------------------------------------------
# aggregation and output

def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float):
        if v == INFINITY:
            return "inf"
        if math.isnan(v):
            return "NA"
        return repr(v)
    return str(v)


def _parse_cell(name: str, text: str):
    if name in ("voi", "truth") and text == "":
        return ""
    if text == "NA" or text == "":
        return None
    if name in ("experiment", "voi", "truth", "status"):
        return text
    if name in ("replicate", "s_x", "n_seeds", "candidate_count", "local_seeds", "size_g", "size_g2"):
        return int(text)
    if text == "inf":
        return INFINITY
    return float(text)


def aggregate(rows: Iterable[ResultRow]) -> list[dict]:
    """Per grid point: mean tau with a 2-standard-error half width over non-NA values.

    Stopped and NA replicates count toward ``na_rate`` only. Neighborhood rows
    aggregate the local seed count instead of tau.
    """
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault(tuple(getattr(row, k) for k in GRID_KEYS), []).append(row)
    out = []
    for key, members in groups.items():
        taus = np.array([m.tau for m in members if m.tau is not None], dtype=float)
        local = np.array([m.local_seeds for m in members if m.local_seeds is not None], dtype=float)
        rec = dict(zip(GRID_KEYS, key))
        rec["replicates"] = len(members)
        rec["n_tau"] = int(taus.size)
        rec["na_rate"] = 1.0 - taus.size / len(members) if members[0].experiment != "neighborhood" else 0.0
        rec["mean_tau"] = float(taus.mean()) if taus.size else None
        rec["se2_tau"] = float(2 * taus.std(ddof=1) / math.sqrt(taus.size)) if taus.size > 1 else None
        rec["mean_local_seeds"] = float(local.mean()) if local.size else None
        rec["se2_local_seeds"] = float(2 * local.std(ddof=1) / math.sqrt(local.size)) if local.size > 1 else None
        out.append(rec)
    return out


SUMMARY_COLUMNS = list(GRID_KEYS) + ["replicates", "n_tau", "na_rate", "mean_tau", "se2_tau",
                                     "mean_local_seeds", "se2_local_seeds"]


def write_rows_csv(rows: Sequence[ResultRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for row in rows:
            w.writerow([_fmt(getattr(row, c)) for c in RESULT_COLUMNS])


def read_rows_csv(path) -> list[ResultRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [ResultRow(**{k: _parse_cell(k, v) for k, v in rec.items()}) for rec in reader]


def write_summary_csv(summary: Sequence[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for rec in summary:
            w.writerow([_fmt(rec[c]) for c in SUMMARY_COLUMNS])


def write_outputs(result: ExperimentResult, out_dir) -> dict[str, Path]:
    """Write ``results.csv``, ``summary.csv``, ``timings.csv``, ``nominations.jsonl``, ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / name for name in
             ("results.csv", "summary.csv", "timings.csv", "nominations.jsonl", "manifest.json")}
    write_rows_csv(result.rows, paths["results.csv"])
    write_summary_csv(result.summary(), paths["summary.csv"])
    with open(paths["timings.csv"], "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "replicate", "wall_time"])
        for i, row in enumerate(result.rows):
            w.writerow([i, row.replicate, f"{row.wall_time:.6f}"])
    with open(paths["nominations.jsonl"], "w", encoding="utf-8") as fh:
        for nl in result.nominations:
            fh.write(("null" if nl is None else nl.to_json(sort_keys=True)) + "\n")
    manifest = {"schema_version": SCHEMA_VERSION, "config": result.config.to_dict(),
                "rows": len(result.rows), "columns": RESULT_COLUMNS}
    paths["manifest.json"].write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths


def audit_outputs(out_dir) -> int:
    """Recompute tau for every scored row from ``nominations.jsonl``; returns rows checked.

    Raises ``AssertionError`` when a stored tau or rank does not match its
    serialized nomination list and recorded true counterpart.
    """
    out = Path(out_dir)
    rows = read_rows_csv(out / "results.csv")
    with open(out / "nominations.jsonl", encoding="utf-8") as fh:
        noms = [json.loads(line) for line in fh]
    if len(noms) != len(rows):
        raise AssertionError("results and nominations differ in length")
    checked = 0
    for i, (row, d) in enumerate(zip(rows, noms)):
        if d is None or not row.truth:
            continue
        t = evaluate_tau(NominationList.from_dict(d), row.truth)
        if t.tau != row.tau or (t.tau is not None and t.rank != row.rank):
            raise AssertionError(f"row {i}: tau {row.tau} does not recompute (got {t.tau})")
        checked += 1
    return checked
