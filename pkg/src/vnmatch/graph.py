"""Simple undirected graphs, neighborhoods, induced subgraphs and edge-list I/O."""
from __future__ import annotations

import io
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

INFINITY = math.inf

_SPLIT = re.compile(r"\s*,\s*|\s+")
_VERTEX_DIRECTIVE = "# vertex "


class EdgeListError(ValueError):
    """Raised when an edge-list or seed file cannot be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph with string labels.

    Vertices are addressed internally by dense indices ``0..n-1``; ``labels[i]``
    is the external identifier of vertex ``i``. Adjacency is kept as a
    symmetric sparse CSR matrix with a zero diagonal.
    """

    labels: tuple[str, ...]
    adjacency: sp.csr_matrix = field(repr=False)
    dropped_loops: int = field(default=0, repr=False)
    collapsed_duplicates: int = field(default=0, repr=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        index = {lab: i for i, lab in enumerate(self.labels)}
        if len(index) != n:
            raise ValueError("vertex labels must be unique")
        adj = self.adjacency
        if adj.shape != (n, n):
            raise ValueError(f"adjacency shape {adj.shape} does not match {n} labels")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, labels: Sequence, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from index pairs; loops dropped, duplicates collapsed."""
        labels = tuple(str(lab) for lab in labels)
        n = len(labels)
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise IndexError("edge endpoint out of range")
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        adj = sp.coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n)).tocsr()
        adj.data[:] = 1  # collapse duplicates summed by tocsr
        adj.sort_indices()
        return cls(labels, adj)

    @classmethod
    def from_adjacency(cls, matrix, labels: Sequence | None = None) -> Graph:
        """Build a graph from a dense or sparse 0/1 adjacency matrix (upper triangle is read)."""
        m = sp.csr_matrix(matrix)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if labels is None:
            labels = [str(i) for i in range(n)]
        upper = sp.triu(m, k=1).tocoo()
        keep = upper.data != 0
        return cls.from_edges(labels, zip(upper.row[keep], upper.col[keep]))

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.nnz // 2)

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"vertex {label!r} not in graph") from None

    def indices(self, labels: Iterable) -> list[int]:
        return [self.index(lab) for lab in labels]

    def __contains__(self, label) -> bool:
        return str(label) in self._index

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def edges(self) -> np.ndarray:
        """Edge list as an ``(E, 2)`` index array with ``u < v``, sorted."""
        upper = sp.triu(self.adjacency, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    def edge_label_set(self) -> set[frozenset]:
        return {frozenset((self.labels[u], self.labels[v])) for u, v in self.edges()}

    def permute(self, order: Sequence[int]) -> Graph:
        """Return the same graph with internal index ``i`` taken from old index ``order[i]``."""
        order = np.asarray(order, dtype=np.int64)
        if sorted(order.tolist()) != list(range(self.n_vertices)):
            raise ValueError("order must be a permutation of the vertex indices")
        adj = self.adjacency[order][:, order].tocsr()
        adj.sort_indices()
        return Graph(tuple(self.labels[i] for i in order), adj)

    def __repr__(self):
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


@dataclass(frozen=True)
class SeedMap:
    """Bijection between seed labels of two graphs, kept in a fixed order."""

    pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        pairs = tuple((str(a), str(b)) for a, b in self.pairs)
        left = [a for a, _ in pairs]
        right = [b for _, b in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("seed map must be injective in both coordinates")
        object.__setattr__(self, "pairs", pairs)

    @property
    def s(self) -> int:
        return len(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def left(self) -> list[str]:
        return [a for a, _ in self.pairs]

    @property
    def right(self) -> list[str]:
        return [b for _, b in self.pairs]

    def validate(self, g: Graph, g2: Graph) -> None:
        for a, b in self.pairs:
            if a not in g:
                raise KeyError(f"seed label {a!r} not in first graph")
            if b not in g2:
                raise KeyError(f"seed label {b!r} not in second graph")


# ----------------------------------------------------------------------------
# structural operations

def _as_index_array(g: Graph, t: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.fromiter((int(i) for i in t), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= g.n_vertices):
        raise IndexError("vertex index out of range")
    return idx


def induced_subgraph(g: Graph, t: Iterable[int]) -> Graph:
    """Induced subgraph ``g[t]``; vertices keep their labels and ascending index order."""
    idx = _as_index_array(g, t)
    if idx.size == 0:
        raise ValueError("induced subgraph needs a nonempty vertex set")
    adj = g.adjacency[idx][:, idx].tocsr()
    adj.sort_indices()
    return Graph(tuple(g.labels[i] for i in idx), adj)


def neighborhood(g: Graph, seeds: Iterable[int], h: float = 1) -> set[int]:
    """All vertices within shortest-path distance ``h`` of any vertex in ``seeds``.

    ``h`` may be :data:`INFINITY`, in which case the union of the connected
    components containing ``seeds`` is returned. The seed set itself is always
    included, so ``h = 0`` returns ``seeds``.
    """
    idx = _as_index_array(g, seeds)
    if idx.size == 0:
        raise ValueError("neighborhood needs at least one seed vertex")
    if not (h == INFINITY or (h >= 0 and float(h).is_integer())):
        raise ValueError(f"hop count must be a nonnegative integer or INFINITY, got {h!r}")
    reached = np.zeros(g.n_vertices, dtype=bool)
    reached[idx] = True
    frontier = reached.copy()
    adj = g.adjacency
    step = 0
    while frontier.any() and (h == INFINITY or step < h):
        touched = (adj @ frontier.astype(np.int32)) > 0  # int8 sums wrap in dense graphs
        frontier = touched & ~reached
        reached |= frontier
        step += 1
    return set(np.flatnonzero(reached).tolist())


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense symmetric 0/1 float adjacency matrix."""
    return g.adjacency.toarray().astype(np.float64)


def reorder_seeds_first(g: Graph, g2: Graph, seeds: SeedMap) -> tuple[Graph, Graph, int]:
    """Relabel both graphs internally so that seed pair ``i`` sits at index ``i``.

    Non-seed vertices keep their relative order; external labels are untouched.
    """
    seeds.validate(g, g2)
    out = []
    for graph, side in ((g, seeds.left), (g2, seeds.right)):
        head = graph.indices(side)
        taken = set(head)
        tail = [i for i in range(graph.n_vertices) if i not in taken]
        order = head + tail
        out.append(graph if order == list(range(graph.n_vertices)) else graph.permute(order))
    return out[0], out[1], seeds.s


# ----------------------------------------------------------------------------
# I/O

PathOrStream = Union[str, Path, TextIO]


def _open_text(source: PathOrStream):
    if isinstance(source, (str, Path)):
        return open(source, encoding="utf-8"), True
    return source, False


def _tokens(line: str) -> list[str]:
    return [tok for tok in _SPLIT.split(line.strip()) if tok]


def load_edge_list(source: PathOrStream) -> Graph:
    """Parse an edge list (two labels per line, whitespace or comma separated).

    Lines starting with ``#`` are comments, except that ``# vertex <label>``
    declares a vertex at that point (used by :func:`save_edge_list` for
    isolated vertices and to pin vertex order).
    Duplicate edges are collapsed and self-loops dropped; the number of dropped
    loops is logged. Vertex order is first-appearance order.
    """
    stream, owned = _open_text(source)
    index: dict[str, int] = {}
    edges = []
    loops = dupes = 0
    seen = set()
    try:
        for lineno, line in enumerate(stream, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                if text.startswith(_VERTEX_DIRECTIVE.strip()) and len(text.split()) == 3:
                    index.setdefault(text.split()[2], len(index))
                continue
            toks = _tokens(text)
            if len(toks) != 2:
                raise EdgeListError(f"expected two vertex labels, got {len(toks)} token(s): {text!r}", lineno)
            u = index.setdefault(toks[0], len(index))
            v = index.setdefault(toks[1], len(index))
            if u == v:
                loops += 1
                continue
            key = (min(u, v), max(u, v))
            if key in seen:
                dupes += 1
                continue
            seen.add(key)
            edges.append(key)
    finally:
        if owned:
            stream.close()
    if not index:
        raise EdgeListError("edge list is empty")
    if loops or dupes:
        logger.warning("edge list normalized: %d self-loop(s) dropped, %d duplicate edge(s) collapsed", loops, dupes)
    g = Graph.from_edges(list(index), edges)
    return Graph(g.labels, g.adjacency, dropped_loops=loops, collapsed_duplicates=dupes)


def loads_edge_list(text: str) -> Graph:
    return load_edge_list(io.StringIO(text))


def save_edge_list(g: Graph, target: PathOrStream) -> None:
    """Write ``g`` as a space-separated edge list, one ``u v`` line per edge.

    Edges are grouped by their higher endpoint, and a vertex with no
    lower-indexed neighbor is announced with ``# vertex <label>``, so reading
    the file back reproduces the vertex order exactly.
    """
    stream, owned = (open(target, "w", encoding="utf-8", newline="\n"), True) \
        if isinstance(target, (str, Path)) else (target, False)
    try:
        stream.write(f"# vertices {g.n_vertices} edges {g.n_edges}\n")
        adj = g.adjacency
        for v in range(g.n_vertices):
            lower = adj.indices[adj.indptr[v]:adj.indptr[v + 1]]
            lower = np.sort(lower[lower < v])
            if lower.size == 0:
                stream.write(f"{_VERTEX_DIRECTIVE}{g.labels[v]}\n")
            for u in lower:
                stream.write(f"{g.labels[u]} {g.labels[v]}\n")
    finally:
        if owned:
            stream.close()


def load_label_pairs(source: PathOrStream) -> list[tuple[str, str]]:
    """Read a two-column label file (seed or truth map); ``#`` lines ignored.

    A first line of ``label_g,label_g2`` is treated as a CSV header.
    """
    stream, owned = _open_text(source)
    pairs = []
    try:
        for lineno, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            toks = _tokens(text)
            if len(toks) != 2:
                raise EdgeListError(f"expected two labels, got {len(toks)} token(s): {text!r}", lineno)
            if not pairs and toks == ["label_g", "label_g2"]:
                continue
            pairs.append((toks[0], toks[1]))
    finally:
        if owned:
            stream.close()
    return pairs


def load_seed_map(source: PathOrStream) -> SeedMap:
    return SeedMap(tuple(load_label_pairs(source)))
