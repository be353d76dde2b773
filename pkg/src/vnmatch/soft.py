"""SoftSGM: seeded graph matching averaged over randomized restarts."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import Graph, SeedMap, adjacency_matrix, reorder_seeds_first
from .rng import substream
from .sgm import PaddedPair, frank_wolfe_sgm, pad_and_center

PAD_PREFIX = "⊥"


@dataclass(frozen=True)
class SoftSgmConfig:
    restarts: int = 100
    gamma: float = 0.1
    eps: float = 1e-6
    max_iter: int = 100
    rng_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.eps <= 0 or self.max_iter < 1:
            raise ValueError("eps must be positive and max_iter >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d


def random_start(dim: int, gamma: float, rng: np.random.Generator) -> np.ndarray:
    """``beta Q + (1 - beta) J / dim`` with ``Q`` a uniform permutation and ``beta ~ U(0, gamma)``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    sigma = rng.permutation(dim)
    beta = rng.uniform(0.0, gamma) if gamma > 0 else 0.0
    p = np.full((dim, dim), (1.0 - beta) / dim)
    p[np.arange(dim), sigma] += beta
    return p


def restart_permutation(pair: PaddedPair, cfg: SoftSgmConfig, index: int) -> np.ndarray:
    """Matched permutation from restart ``index``, drawn from its own sub-stream."""
    rng = substream(cfg.rng_seed, index)
    p0 = random_start(pair.dim, cfg.gamma, rng)
    return frank_wolfe_sgm(pair, p0, eps=cfg.eps, max_iter=cfg.max_iter).permutation


@dataclass(frozen=True, eq=False)
class SoftMatch:
    """Average of the restart permutation matrices over the non-seed vertices.

    Rows are non-seed vertices of the first graph, columns those of the
    second; both are extended with pad vertices (labels starting with ``⊥``)
    when the graphs differ in size, so ``p`` stays doubly stochastic.
    """

    p: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    n_row_pad: int
    n_col_pad: int
    seeds: SeedMap
    config: SoftSgmConfig
    _row_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_row_index", {lab: i for i, lab in enumerate(self.row_labels)})

    @property
    def col_is_pad(self) -> np.ndarray:
        mask = np.zeros(len(self.col_labels), dtype=bool)
        mask[len(self.col_labels) - self.n_col_pad:] = True
        return mask

    @property
    def pad_mass(self) -> np.ndarray:
        """Per-row probability mass on pad columns (no counterpart)."""
        return self.p[:, self.col_is_pad].sum(axis=1)

    def row(self, label) -> int:
        label = str(label)
        if label in self.seeds.left:
            raise ValueError(f"{label!r} is a seed; seeds have no soft-match row")
        if label.startswith(PAD_PREFIX) or label not in self._row_index:
            raise KeyError(f"{label!r} is not a non-seed row of this match")
        return self._row_index[label]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seeds": [list(pair) for pair in self.seeds.pairs],
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "n_row_pad": self.n_row_pad,
            "n_col_pad": self.n_col_pad,
            "p": self.p.tolist(),
            "pad_mass": self.pad_mass.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> SoftMatch:
        return cls(np.asarray(d["p"], dtype=np.float64), tuple(d["row_labels"]), tuple(d["col_labels"]),
                   int(d["n_row_pad"]), int(d["n_col_pad"]), SeedMap(tuple(map(tuple, d["seeds"]))),
                   SoftSgmConfig(**d["config"]))


def soft_sgm(g: Graph, g2: Graph, seeds: SeedMap, cfg: SoftSgmConfig = SoftSgmConfig()) -> SoftMatch:
    """Soft-match the non-seed vertices of ``g`` and ``g2``.

    Restart ``i`` draws its random start from the stream keyed by
    ``(cfg.rng_seed, i)``; permutation counts are summed in restart order and
    divided by ``cfg.restarts``, so the result depends only on the inputs and
    the seed, not on scheduling.
    """
    if g.n_vertices == 0 or g2.n_vertices == 0:
        raise ValueError("graphs must be nonempty")
    gr, g2r, s = reorder_seeds_first(g, g2, seeds)
    pair = pad_and_center(adjacency_matrix(gr), adjacency_matrix(g2r), s)
    size = pair.size
    rows = list(gr.labels[s:]) + [f"{PAD_PREFIX}{i}" for i in range(size - gr.n_vertices)]
    cols = list(g2r.labels[s:]) + [f"{PAD_PREFIX}{i}" for i in range(size - g2r.n_vertices)]
    k = pair.dim

    counts = np.zeros((k, k), dtype=np.int64)
    if k:
        if cfg.workers > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                perms = list(pool.map(lambda i: restart_permutation(pair, cfg, i), range(cfg.restarts)))
        else:
            perms = [restart_permutation(pair, cfg, i) for i in range(cfg.restarts)]
        idx = np.arange(k)
        for sigma in perms:
            counts[idx, sigma] += 1
    return SoftMatch(counts / cfg.restarts, tuple(rows), tuple(cols),
                     size - gr.n_vertices, size - g2r.n_vertices, seeds, cfg)


def score_row(m: SoftMatch, voi_label) -> tuple[list[tuple[str, float]], float]:
    """Scores ``p(voi, .)`` over real candidate columns, plus the pad-column mass."""
    i = m.row(voi_label)
    real = ~m.col_is_pad
    scores = [(lab, float(m.p[i, j])) for j, lab in enumerate(m.col_labels) if real[j]]
    return scores, float(m.p[i, ~real].sum())
