"""Command-line entry point: ``vnmatch generate | match | nominate | experiment``.

Exit status is 0 on success, 2 when nomination stops because no seed lies
near the vertex of interest, and 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    parse_matrix,
    read_config_file,
    load_experiment_config,
    run_experiment,
    write_outputs,
)
from .graph import load_edge_list, load_label_pairs, load_seed_map
from .models import CorrelatedPairSpec, RdpgSpec, SbmSpec, UnsharedSpec, block_densities, sample_pair
from .nomination import VnConfig, evaluate_tau, nominate
from .soft import SoftSgmConfig, soft_sgm

EXIT_OK, EXIT_ERROR, EXIT_STOP = 0, 1, 2

log = logging.getLogger("vnmatch")


def pair_spec_from_config(path) -> tuple[CorrelatedPairSpec, Path | None]:
    """Correlated-pair spec from an INI file.

    ``[model]`` takes either ``block_sizes`` (or ``n_vertices``) plus
    ``lambda`` for a block model, or ``latent_positions`` (a whitespace
    text matrix file) for a dot-product model, and ``rho``, ``m``, ``m2``.
    ``[experiment]`` may give ``rng_seed`` and ``output_dir``.
    """
    path = Path(path)
    cp = read_config_file(path)
    model = cp["model"] if cp.has_section("model") else cp[cp.default_section]
    ex = cp["experiment"] if cp.has_section("experiment") else cp[cp.default_section]
    if "latent_positions" in model:
        core = RdpgSpec(np.loadtxt(path.parent / model["latent_positions"], ndmin=2))
    else:
        lam = parse_matrix(model["lambda"])
        if "block_sizes" in model:
            core = SbmSpec(tuple(int(t) for t in model["block_sizes"].replace(",", " ").split()), lam)
        else:
            core = SbmSpec.equal_blocks(model.getint("n_vertices", 300), lam)
    spec = CorrelatedPairSpec(core, model.getfloat("rho", 1.0), UnsharedSpec(model.getint("m", 0)),
                              UnsharedSpec(model.getint("m2", 0)), ex.getint("rng_seed", 0))
    out = ex.get("output_dir")
    return spec, (path.parent / out if out else None)


def _soft_from_args(args) -> SoftSgmConfig:
    return SoftSgmConfig(restarts=args.restarts, gamma=args.gamma, eps=args.eps,
                         max_iter=args.max_iter, rng_seed=args.rng_seed, workers=args.workers)


def cmd_generate(args) -> int:
    spec, out = pair_spec_from_config(args.config)
    out = Path(args.out) if args.out else out
    if out is None:
        raise ValueError("no output directory: pass --out or set [experiment] output_dir")
    pair = sample_pair(spec)
    paths = pair.save(out)
    print(f"G : {pair.g.n_vertices} vertices, {pair.g.n_edges} edges -> {paths['g']}")
    print(f"G': {pair.g2.n_vertices} vertices, {pair.g2.n_edges} edges -> {paths['g2']}")
    print(f"shared vertices: {len(pair.truth)}; vertex of interest {pair.voi} <-> {pair.voi2}")
    if pair.blocks_g is not None:
        for name, graph, blocks in (("G ", pair.g, pair.blocks_g), ("G'", pair.g2, pair.blocks_g2)):
            dens, _ = block_densities(graph, blocks)
            print(f"{name} block densities:\n{np.array2string(dens, precision=3)}")
    return EXIT_OK


def cmd_match(args) -> int:
    g, g2 = load_edge_list(args.g), load_edge_list(args.g2)
    seeds = load_seed_map(args.seeds)
    m = soft_sgm(g, g2, seeds, _soft_from_args(args))
    text = m.to_json()
    if args.json:
        Path(args.json).write_text(text + "\n", encoding="utf-8")
        print(f"soft match of {len(m.row_labels)} x {len(m.col_labels)} written to {args.json}")
    else:
        print(text)
    return EXIT_OK


def cmd_nominate(args) -> int:
    g, g2 = load_edge_list(args.g), load_edge_list(args.g2)
    seeds = load_seed_map(args.seeds)
    cfg = VnConfig(args.h, args.ell, _soft_from_args(args))
    nl = nominate(g, g2, seeds, args.voi, cfg)
    payload = nl.to_dict()
    payload["rng_seed"] = args.rng_seed
    if args.truth:
        truth = dict(load_label_pairs(args.truth))
        if args.voi not in truth:
            raise KeyError(f"truth file has no entry for {args.voi!r}")
        t = evaluate_tau(nl, truth[args.voi])
        payload["evaluation"] = {"truth": truth[args.voi], "rank": None if t.is_na else t.rank,
                                 "tau": t.tau, "candidate_count": t.candidate_count}
    if args.csv:
        Path(args.csv).write_text(nl.to_csv(), encoding="utf-8")
    if args.json:
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    if not args.csv and not args.json:
        sys.stdout.write(nl.to_csv())
    if nl.stopped:
        print(f"STOP: no seed within {args.h} hops of {args.voi}", file=sys.stderr)
        return EXIT_STOP
    msg = f"{nl.candidate_count} candidates, {nl.s_x} local seeds"
    if "evaluation" in payload:
        tau = payload["evaluation"]["tau"]
        msg += f", tau = {'NA' if tau is None else f'{tau:.4f}'}"
    print(msg, file=sys.stderr)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config, kind=args.kind)
    overrides = {}
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    out = Path(args.out) if args.out else cfg.output_dir
    if out is None:
        raise ValueError("no output directory: pass --out or set [experiment] output_dir")

    def progress(done, total):
        if args.verbose:
            print(f"\r{done}/{total}", end="", file=sys.stderr, flush=True)

    result = run_experiment(cfg, progress=progress)
    if args.verbose:
        print(file=sys.stderr)
    paths = write_outputs(result, out)
    for rec in result.summary():
        grid = ", ".join(f"{k}={rec[k]}" for k in ("rho", "s_x", "r", "h", "n_seeds") if rec[k] is not None)
        if rec["mean_tau"] is not None:
            se = rec["se2_tau"] if rec["se2_tau"] is not None else float("nan")
            print(f"{grid}: mean tau {rec['mean_tau']:.4f} +/- {se:.4f} (n={rec['n_tau']}, NA {rec['na_rate']:.2f})")
        elif rec["mean_local_seeds"] is not None:
            print(f"{grid}: mean |S_x| {rec['mean_local_seeds']:.3f}")
    print(f"results written to {paths['results.csv'].parent}")
    return EXIT_OK


def _add_soft_flags(p: argparse.ArgumentParser) -> None:
    d = SoftSgmConfig()
    p.add_argument("--restarts", "-R", type=int, default=d.restarts, help="number of random restarts")
    p.add_argument("--gamma", type=float, default=d.gamma, help="random-start spread in [0, 1]")
    p.add_argument("--eps", type=float, default=d.eps, help="relative stopping tolerance")
    p.add_argument("--max-iter", type=int, default=d.max_iter)
    p.add_argument("--rng-seed", type=int, default=d.rng_seed)
    p.add_argument("--workers", type=int, default=1, help="parallel restarts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vnmatch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a correlated graph pair from a config file")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (overrides config)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("match", help="soft seeded graph matching of two edge lists")
    p.add_argument("g")
    p.add_argument("g2")
    p.add_argument("seeds")
    p.add_argument("--json", help="write the soft match here instead of stdout")
    _add_soft_flags(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("nominate", help="nominate candidates in g2 for a vertex of g")
    p.add_argument("g")
    p.add_argument("g2")
    p.add_argument("seeds")
    p.add_argument("--voi", required=True, help="vertex of interest (label in g)")
    p.add_argument("--h", type=int, default=2, help="seed search radius around the vertex of interest")
    p.add_argument("--ell", type=int, default=2, help="neighborhood radius around local seeds")
    p.add_argument("--truth", help="label_g,label_g2 file; enables tau evaluation")
    p.add_argument("--csv", help="write rank,label,score here")
    p.add_argument("--json", help="write the full nomination record here")
    _add_soft_flags(p)
    p.set_defaults(func=cmd_nominate)

    p = sub.add_parser("experiment", help="run a Monte Carlo study")
    p.add_argument("kind", choices=["seed-sweep", "ratio-sweep", "neighborhood", "custom-nominate"])
    p.add_argument("config")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--replicates", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, IndexError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
