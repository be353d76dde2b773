"""Random graph models and rho-correlated graph pairs.

A correlated pair shares a core of vertices whose edge indicators have
identical Bernoulli marginals in both graphs and Pearson correlation ``rho``;
each graph may also carry unshared vertices whose edges are independent.
The second graph's vertex order is shuffled so that its internal indices
carry no information about the true correspondence.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .graph import Graph, save_edge_list
from .rng import substream


@dataclass(frozen=True)
class SbmSpec:
    block_sizes: tuple[int, ...]
    lam: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(b) for b in self.block_sizes)
        lam = np.asarray(self.lam, dtype=np.float64)
        object.__setattr__(self, "block_sizes", sizes)
        object.__setattr__(self, "lam", lam)
        if not sizes or min(sizes) < 1:
            raise ValueError("block sizes must be positive")
        if lam.shape != (len(sizes), len(sizes)):
            raise ValueError(f"lambda must be {len(sizes)}x{len(sizes)}")
        if not np.allclose(lam, lam.T) or lam.min() < 0 or lam.max() > 1:
            raise ValueError("lambda must be symmetric with entries in [0, 1]")

    @classmethod
    def equal_blocks(cls, n: int, lam) -> SbmSpec:
        """``k`` blocks of (near-)equal size, sizes differing by at most one."""
        k = np.asarray(lam).shape[0]
        return cls(tuple(n // k + (1 if i < n % k else 0) for i in range(k)), lam)

    @property
    def k(self) -> int:
        return len(self.block_sizes)

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def blocks(self) -> np.ndarray:
        return np.repeat(np.arange(self.k), self.block_sizes)

    def probabilities(self) -> np.ndarray:
        b = self.blocks()
        return self.lam[np.ix_(b, b)]

    def to_dict(self) -> dict:
        return {"model": "sbm", "block_sizes": list(self.block_sizes), "lambda": self.lam.tolist()}


@dataclass(frozen=True)
class RdpgSpec:
    x: np.ndarray

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.x, dtype=np.float64))
        object.__setattr__(self, "x", x)
        p = x @ x.T
        if p.min() < -1e-12 or p.max() > 1 + 1e-12:
            raise ValueError("latent positions must give dot products in [0, 1]")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.clip(self.x @ self.x.T, 0.0, 1.0)

    def to_dict(self) -> dict:
        return {"model": "rdpg", "x": self.x.tolist()}


CoreSpec = Union[SbmSpec, RdpgSpec]


@dataclass(frozen=True)
class UnsharedSpec:
    """Vertices present in only one graph.

    For a block-model core, ``blocks`` gives their block labels (uniform over
    the core blocks when omitted) and ``lam`` an optional enlarged block
    matrix whose upper-left corner must equal the core's. For a dot-product
    core, ``positions`` gives their latent vectors (resampled from the core's
    rows when omitted).
    """

    count: int = 0
    blocks: tuple[int, ...] | None = None
    lam: np.ndarray | None = None
    positions: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {"count": self.count}
        if self.blocks is not None:
            d["blocks"] = list(self.blocks)
        if self.lam is not None:
            d["lambda"] = np.asarray(self.lam).tolist()
        if self.positions is not None:
            d["positions"] = np.asarray(self.positions).tolist()
        return d


@dataclass(frozen=True)
class CorrelatedPairSpec:
    core: CoreSpec
    rho: float
    unshared_g: UnsharedSpec = field(default_factory=UnsharedSpec)
    unshared_g2: UnsharedSpec = field(default_factory=UnsharedSpec)
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if self.unshared_g.count < 0 or self.unshared_g2.count < 0:
            raise ValueError("unshared vertex counts must be >= 0")

    def to_dict(self) -> dict:
        return {"core": self.core.to_dict(), "rho": self.rho, "unshared_g": self.unshared_g.to_dict(),
                "unshared_g2": self.unshared_g2.to_dict(), "rng_seed": self.rng_seed}


@dataclass
class LabeledPair:
    g: Graph
    g2: Graph
    truth: dict[str, str]
    voi: str
    voi2: str
    blocks_g: np.ndarray | None = None
    blocks_g2: np.ndarray | None = None
    manifest: dict = field(default_factory=dict)

    @property
    def shared(self) -> list[str]:
        """Shared vertex labels of ``g`` in index order."""
        return [lab for lab in self.g.labels if lab in self.truth]

    @property
    def seed_pool(self) -> list[str]:
        return [lab for lab in self.shared if lab != self.voi]

    def save(self, directory: Union[str, Path]) -> dict[str, Path]:
        """Write ``g.edges``, ``g2.edges``, ``truth.csv`` and ``manifest.json``."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"g": out / "g.edges", "g2": out / "g2.edges",
                 "truth": out / "truth.csv", "manifest": out / "manifest.json"}
        save_edge_list(self.g, paths["g"])
        save_edge_list(self.g2, paths["g2"])
        with open(paths["truth"], "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label_g", "label_g2"])
            for lab in self.shared:
                w.writerow([lab, self.truth[lab]])
        manifest = dict(self.manifest, voi=self.voi, voi2=self.voi2,
                        n_g=self.g.n_vertices, n_g2=self.g2.n_vertices, n_shared=len(self.truth))
        if self.blocks_g is not None:
            manifest["blocks_g"] = self.blocks_g.tolist()
            manifest["blocks_g2"] = self.blocks_g2.tolist()
        paths["manifest"].write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return paths


def sample_correlated_bernoulli_pair(p, rho: float, rng: np.random.Generator, size=None):
    """Draw ``(A, A')`` with ``A, A' ~ Bern(p)`` and ``corr(A, A') = rho``.

    ``A' | A = 1 ~ Bern(p + rho (1 - p))`` and ``A' | A = 0 ~ Bern(p (1 - rho))``.
    ``p`` may be an array, in which case draws are elementwise.
    """
    p = np.asarray(p, dtype=np.float64)
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    shape = p.shape if size is None else size
    a = rng.random(shape) < p
    cond = np.where(a, p + rho * (1.0 - p), p * (1.0 - rho))
    a2 = rng.random(shape) < cond
    if size is None and p.ndim == 0:
        return int(a), int(a2)
    return a.astype(np.int8), a2.astype(np.int8)


def _upper(n: int):
    return np.triu_indices(n, k=1)


def _graph_from_upper(n: int, iu, bits, labels) -> Graph:
    keep = bits.astype(bool)
    return Graph.from_edges(labels, zip(iu[0][keep], iu[1][keep]))


def _extended(core: CoreSpec, extra: UnsharedSpec, rng: np.random.Generator):
    """Edge-probability matrix of core + unshared vertices, and block labels if any."""
    m = extra.count
    if isinstance(core, SbmSpec):
        if extra.blocks is not None:
            eb = np.asarray(extra.blocks, dtype=np.int64)
            if eb.size != m:
                raise ValueError("unshared block labels must match the unshared count")
        else:
            eb = rng.integers(core.k, size=m)
        lam = core.lam
        if extra.lam is not None:
            lam = np.asarray(extra.lam, dtype=np.float64)
            if lam.shape[0] < core.k or not np.allclose(lam[:core.k, :core.k], core.lam):
                raise ValueError("extended lambda must contain the core lambda in its upper-left corner")
            if not np.allclose(lam, lam.T) or lam.min() < 0 or lam.max() > 1:
                raise ValueError("extended lambda must be symmetric with entries in [0, 1]")
        if eb.size and (eb.min() < 0 or eb.max() >= lam.shape[0]):
            raise ValueError("unshared block label out of range")
        b = np.concatenate([core.blocks(), eb])
        return lam[np.ix_(b, b)], b
    if extra.positions is not None:
        y = np.atleast_2d(np.asarray(extra.positions, dtype=np.float64))
        if y.shape != (m, core.x.shape[1]):
            raise ValueError("unshared latent positions have the wrong shape")
    else:
        y = core.x[rng.integers(core.n, size=m)]
    z = np.vstack([core.x, y])
    p = z @ z.T
    if p.min() < -1e-12 or p.max() > 1 + 1e-12:
        raise ValueError("extended latent positions give dot products outside [0, 1]")
    return np.clip(p, 0.0, 1.0), None


def _assemble(core_n, probs_g, probs_g2, a_core, a2_core, rng):
    """Build both graphs from core draws and independent unshared draws."""
    n_g, n_g2 = probs_g.shape[0], probs_g2.shape[0]
    iu_g, iu_g2 = _upper(n_g), _upper(n_g2)
    core_mask_g = iu_g[1] < core_n
    core_mask_g2 = iu_g2[1] < core_n
    bits_g = np.zeros(iu_g[0].size, dtype=np.int8)
    bits_g2 = np.zeros(iu_g2[0].size, dtype=np.int8)
    bits_g[core_mask_g] = a_core
    bits_g2[core_mask_g2] = a2_core
    extra_g = ~core_mask_g
    extra_g2 = ~core_mask_g2
    bits_g[extra_g] = rng.random(extra_g.sum()) < probs_g[iu_g[0][extra_g], iu_g[1][extra_g]]
    bits_g2[extra_g2] = rng.random(extra_g2.sum()) < probs_g2[iu_g2[0][extra_g2], iu_g2[1][extra_g2]]
    return (iu_g, bits_g), (iu_g2, bits_g2)


def _shuffled_second(n_g2: int, iu, bits, rng):
    """Second graph with a uniformly shuffled internal order; returns graph and old->new index map."""
    order = rng.permutation(n_g2)
    new_of_old = np.empty(n_g2, dtype=np.int64)
    new_of_old[order] = np.arange(n_g2)
    labels = [f"w{j}" for j in range(n_g2)]
    keep = bits.astype(bool)
    g2 = Graph.from_edges(labels, zip(new_of_old[iu[0][keep]], new_of_old[iu[1][keep]]))
    return g2, new_of_old


def sample_pair(spec: CorrelatedPairSpec) -> LabeledPair:
    """Sample ``(G, G')`` from a rho-correlated model with optional unshared vertices.

    ``G`` has labels ``v0..`` with the shared core first; ``G'`` has labels
    ``w0..`` in shuffled order. The vertex of interest is a uniformly chosen
    shared vertex.
    """
    rng = substream(spec.rng_seed, 0)
    core = spec.core
    n = core.n
    probs_g, blocks_g = _extended(core, spec.unshared_g, rng)
    probs_g2, blocks_g2 = _extended(core, spec.unshared_g2, rng)
    iu = _upper(n)
    a_core, a2_core = sample_correlated_bernoulli_pair(probs_g[:n, :n][iu], spec.rho, rng)
    (iu_g, bits_g), (iu_g2, bits_g2) = _assemble(n, probs_g, probs_g2, a_core, a2_core, rng)
    n_g, n_g2 = probs_g.shape[0], probs_g2.shape[0]
    g = _graph_from_upper(n_g, iu_g, bits_g, [f"v{i}" for i in range(n_g)])
    g2, new_of_old = _shuffled_second(n_g2, iu_g2, bits_g2, rng)
    truth = {f"v{i}": f"w{new_of_old[i]}" for i in range(n)}
    x = int(rng.integers(n))
    b2 = None if blocks_g2 is None else blocks_g2[np.argsort(new_of_old)]
    return LabeledPair(g, g2, truth, f"v{x}", truth[f"v{x}"], blocks_g, b2,
                       manifest={"kind": "correlated-pair", "spec": spec.to_dict()})


def sample_ratio_pair(core: SbmSpec, r: float, rho: float, rng_seed: int = 0) -> LabeledPair:
    """Pair where ``G' `` covers a uniformly random ``ceil(r N)`` subset of ``G``'s vertices.

    ``G ~ SBM(core)`` on ``N`` vertices; ``G'`` is rho-correlated with the
    induced subgraph of ``G`` on the chosen subset, and the truth map covers
    that subset only.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("ratio r must lie in (0, 1]")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    rng = substream(rng_seed, 1)
    n = core.n
    n2 = max(1, math.ceil(round(r * n, 9)))
    probs = core.probabilities()
    iu = _upper(n)
    a = (rng.random(iu[0].size) < probs[iu]).astype(np.int8)
    subset = np.sort(rng.choice(n, size=n2, replace=False))
    # correlated draw for pairs inside the subset, conditioned on the realized G edges
    dense = np.zeros((n, n), dtype=np.int8)
    dense[iu] = a
    iu2 = _upper(n2)
    su, sv = subset[iu2[0]], subset[iu2[1]]
    a_sub = dense[su, sv].astype(bool)
    p_sub = probs[su, sv]
    cond = np.where(a_sub, p_sub + rho * (1.0 - p_sub), p_sub * (1.0 - rho))
    bits2 = (rng.random(iu2[0].size) < cond).astype(np.int8)
    g = _graph_from_upper(n, iu, a, [f"v{i}" for i in range(n)])
    g2, new_of_old = _shuffled_second(n2, iu2, bits2, rng)
    truth = {f"v{subset[i]}": f"w{new_of_old[i]}" for i in range(n2)}
    x = int(subset[rng.integers(n2)])
    blocks = core.blocks()
    return LabeledPair(g, g2, truth, f"v{x}", truth[f"v{x}"], blocks, blocks[subset][np.argsort(new_of_old)],
                       manifest={"kind": "ratio-pair", "core": core.to_dict(), "r": r, "rho": rho,
                                 "rng_seed": rng_seed})


def sample_sbm(spec: SbmSpec, rng: np.random.Generator, labels=None) -> Graph:
    """Single ``SBM(k, b, lambda)`` graph with contiguous blocks."""
    n = spec.n
    iu = _upper(n)
    bits = rng.random(iu[0].size) < spec.probabilities()[iu]
    return _graph_from_upper(n, iu, bits, labels or [f"v{i}" for i in range(n)])


def block_densities(g: Graph, blocks) -> tuple[np.ndarray, np.ndarray]:
    """Empirical edge density per block pair and the number of vertex pairs behind each."""
    blocks = np.asarray(blocks)
    k = int(blocks.max()) + 1
    edges = g.edges()
    counts = np.zeros((k, k))
    np.add.at(counts, (blocks[edges[:, 0]], blocks[edges[:, 1]]), 1)
    counts = counts + counts.T - np.diag(np.diag(counts))
    sizes = np.bincount(blocks, minlength=k).astype(float)
    slots = np.outer(sizes, sizes)
    slots[np.diag_indices(k)] = sizes * (sizes - 1) / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        return counts / slots, slots
