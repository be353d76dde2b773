"""Vertex nomination across two graphs by local soft seeded matching."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .graph import Graph, SeedMap, induced_subgraph, neighborhood
from .soft import SoftMatch, SoftSgmConfig, score_row, soft_sgm


@dataclass(frozen=True)
class VnConfig:
    h: int = 2
    ell: int = 2
    soft: SoftSgmConfig = field(default_factory=SoftSgmConfig)

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if self.ell < self.h:
            raise ValueError("ell must be >= h")


@dataclass
class NominationList:
    voi: str
    candidates: list[tuple[str, float]]
    s_x: int
    size_g: int
    size_g2: int
    local_seeds: SeedMap = field(default_factory=SeedMap)
    pad_mass: float = 0.0
    stopped: bool = False
    config: VnConfig | None = None

    @property
    def candidate_count(self) -> int:
        return len(self.candidates)

    def labels(self) -> list[str]:
        return [lab for lab, _ in self.candidates]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "label", "score"])
        for r, (lab, score) in enumerate(self.candidates, start=1):
            w.writerow([r, lab, repr(score)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        cfg = None
        if self.config is not None:
            cfg = {"h": self.config.h, "ell": self.config.ell, "soft": self.config.soft.to_dict()}
        return {
            "voi": self.voi,
            "stopped": self.stopped,
            "s_x": self.s_x,
            "local_seeds": [list(p) for p in self.local_seeds.pairs],
            "size_g": self.size_g,
            "size_g2": self.size_g2,
            "candidate_count": self.candidate_count,
            "pad_mass": self.pad_mass,
            "candidates": [[lab, score] for lab, score in self.candidates],
            "config": cfg,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> NominationList:
        cfg = d.get("config")
        if cfg is not None:
            cfg = VnConfig(cfg["h"], cfg["ell"], SoftSgmConfig(**cfg["soft"]))
        return cls(d["voi"], [(lab, float(sc)) for lab, sc in d["candidates"]], d["s_x"],
                   d["size_g"], d["size_g2"], SeedMap(tuple(map(tuple, d["local_seeds"]))),
                   d.get("pad_mass", 0.0), d["stopped"], cfg)


@dataclass(frozen=True)
class TauResult:
    rank: float
    tau: float | None
    candidate_count: int

    @property
    def is_na(self) -> bool:
        return self.tau is None


def localize_seeds(g: Graph, seeds: SeedMap, voi, h: int) -> SeedMap:
    """Seed pairs whose first-graph vertex lies within ``h`` hops of ``voi``."""
    voi = str(voi)
    x = g.index(voi)
    if voi in seeds.left:
        raise ValueError(f"vertex of interest {voi!r} is itself a seed")
    near = neighborhood(g, [x], h)
    return SeedMap(tuple((a, b) for a, b in seeds.pairs if g.index(a) in near))


def nominate(g: Graph, g2: Graph, seeds: SeedMap, voi, cfg: VnConfig = VnConfig()) -> NominationList:
    """Rank vertices of ``g2`` as candidate counterparts of ``voi`` in ``g``.

    The seeds near ``voi`` (within ``cfg.h`` hops) define local neighborhoods
    of radius ``cfg.ell`` in both graphs; the induced subgraphs are
    soft-matched and the non-seed vertices of the second neighborhood are
    ordered by decreasing match score, ties by label. With no seed near
    ``voi`` the list comes back empty with ``stopped=True``.
    """
    voi = str(voi)
    seeds.validate(g, g2)
    local = localize_seeds(g, seeds, voi, cfg.h)
    if local.s == 0:
        return NominationList(voi, [], 0, 0, 0, local, stopped=True, config=cfg)
    vx = neighborhood(g, g.indices(local.left), cfg.ell)
    vx2 = neighborhood(g2, g2.indices(local.right), cfg.ell)
    if g.index(voi) not in vx:
        raise ValueError(f"vertex of interest {voi!r} lies outside its matched neighborhood")
    gx = induced_subgraph(g, vx)
    gx2 = induced_subgraph(g2, vx2)
    match = soft_sgm(gx, gx2, local, cfg.soft)
    return nomination_from_match(match, voi, gx.n_vertices, gx2.n_vertices, cfg)


def nomination_from_match(match: SoftMatch, voi: str, size_g: int, size_g2: int,
                          cfg: VnConfig | None = None) -> NominationList:
    scores, pad_mass = score_row(match, voi)
    scores.sort(key=lambda item: (-item[1], item[0]))
    return NominationList(voi, scores, match.seeds.s, size_g, size_g2, match.seeds, pad_mass, False, cfg)


def evaluate_tau(nl: NominationList, truth) -> TauResult:
    """Expected rank of ``truth`` under uniform tie-breaking and its normalized rank.

    ``tau = max((rank - 1) / (|C| - 1), 0)``; a single candidate gives
    ``tau = 0``. If ``truth`` is not a candidate, ``tau`` is ``None`` (NA) and
    ``rank`` is NaN.
    """
    truth = str(truth)
    scores = dict(nl.candidates)
    c = len(nl.candidates)
    if truth not in scores:
        return TauResult(math.nan, None, c)
    target = scores[truth]
    greater = sum(1 for _, sc in nl.candidates if sc > target)
    tied = sum(1 for _, sc in nl.candidates if sc == target)
    rank = greater + (tied + 1) / 2.0
    tau = 0.0 if c == 1 else max((rank - 1.0) / (c - 1.0), 0.0)
    return TauResult(rank, tau, c)
