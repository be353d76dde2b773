from __future__ import annotations

import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse.csgraph import floyd_warshall

from vnmatch.graph import (
    INFINITY,
    EdgeListError,
    Graph,
    SeedMap,
    adjacency_matrix,
    induced_subgraph,
    load_edge_list,
    load_seed_map,
    loads_edge_list,
    neighborhood,
    reorder_seeds_first,
    save_edge_list,
)
from vnmatch.models import SbmSpec, sample_sbm


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    a = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_adjacency(a | a.T)


def path_graph():
    return loads_edge_list("a b\nb c\nc d\n")


# ---------------------------------------------------------------- loading

def test_load_basic():
    g = loads_edge_list("a b\nb c")
    assert g.n_vertices == 3 and g.n_edges == 2
    assert g.labels == ("a", "b", "c")


def test_load_dedup_and_loops():
    g = loads_edge_list("a b\nb a\na a")
    assert (g.n_vertices, g.n_edges) == (2, 1)
    assert g.dropped_loops == 1
    assert g.collapsed_duplicates == 1


def test_load_comma_and_comments():
    g = loads_edge_list("# header\nx,y\n\n  y z  \n")
    assert g.labels == ("x", "y", "z")
    assert g.has_edge(g.index("x"), g.index("y"))


def test_load_malformed_reports_line():
    with pytest.raises(EdgeListError) as err:
        loads_edge_list("a b\nc\n")
    assert err.value.lineno == 2
    assert "2" in str(err.value)


@pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
def test_load_empty_rejected(text):
    with pytest.raises(EdgeListError):
        loads_edge_list(text)


def test_sbm_round_trip(tmp_path):
    lam = np.array([[0.7, 0.3, 0.4], [0.3, 0.7, 0.3], [0.4, 0.3, 0.7]])
    g = sample_sbm(SbmSpec.equal_blocks(300, lam), np.random.default_rng(3))
    path = tmp_path / "g.edges"
    save_edge_list(g, path)
    back = load_edge_list(path)
    assert back.labels == g.labels
    assert np.array_equal(adjacency_matrix(back), adjacency_matrix(g))


def test_round_trip_keeps_isolated_vertices():
    g = Graph.from_edges(["a", "b", "lonely", "c"], [(0, 1), (1, 3)])
    buf = io.StringIO()
    save_edge_list(g, buf)
    back = loads_edge_list(buf.getvalue())
    assert back.labels == g.labels
    assert np.array_equal(adjacency_matrix(back), adjacency_matrix(g))


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        Graph.from_edges(["a", "a"], [])


def test_seed_file(tmp_path):
    path = tmp_path / "seeds.csv"
    path.write_text("label_g,label_g2\nv1,w3\nv2 w9\n")
    sm = load_seed_map(path)
    assert sm.pairs == (("v1", "w3"), ("v2", "w9"))
    assert sm.s == 2


@pytest.mark.parametrize("pairs", [(("a", "x"), ("a", "y")), (("a", "x"), ("b", "x"))])
def test_seed_map_must_be_injective(pairs):
    with pytest.raises(ValueError):
        SeedMap(pairs)


def test_seed_map_validate_names_missing_label():
    g, g2 = path_graph(), path_graph()
    with pytest.raises(KeyError, match="zz"):
        SeedMap((("a", "a"), ("zz", "b"))).validate(g, g2)


# ---------------------------------------------------------------- induced subgraph

def test_induced_triangle_pair():
    tri = loads_edge_list("a b\nb c\na c")
    sub = induced_subgraph(tri, {0, 1})
    assert sub.n_vertices == 2 and sub.n_edges == 1
    assert sub.labels == ("a", "b")


def test_induced_full_set_is_identity():
    g = random_graph(30, 0.2, 1)
    sub = induced_subgraph(g, range(g.n_vertices))
    assert sub.labels == g.labels
    assert sub.edge_label_set() == g.edge_label_set()


def test_induced_matches_filter_oracle():
    g = random_graph(50, 0.15, 2)
    rng = np.random.default_rng(5)
    t = set(rng.choice(50, size=20, replace=False).tolist())
    sub = induced_subgraph(g, t)
    expected = {frozenset((g.labels[u], g.labels[v])) for u, v in g.edges() if u in t and v in t}
    assert sub.edge_label_set() == expected
    assert set(sub.labels) == {g.labels[i] for i in t}


@pytest.mark.parametrize("t", [set(), {0, 99}, {-1}])
def test_induced_bad_sets(t):
    with pytest.raises((ValueError, IndexError)):
        induced_subgraph(path_graph(), t)


# ---------------------------------------------------------------- neighborhoods

def test_neighborhood_path():
    g = path_graph()
    assert {g.labels[i] for i in neighborhood(g, [g.index("a")], 2)} == {"a", "b", "c"}


def test_neighborhood_h0_is_seed_set():
    g = random_graph(40, 0.1, 3)
    seeds = {1, 7, 22}
    assert neighborhood(g, seeds, 0) == seeds


def test_neighborhood_infinity_is_component_union():
    g = loads_edge_list("a b\nb c\nx y\n# vertex q\n")
    comp = neighborhood(g, [g.index("a")], INFINITY)
    assert {g.labels[i] for i in comp} == {"a", "b", "c"}
    assert neighborhood(g, [g.index("q")], INFINITY) == {g.index("q")}


def test_neighborhood_empty_seeds_rejected():
    with pytest.raises(ValueError):
        neighborhood(path_graph(), [], 1)


def test_neighborhood_matches_floyd_warshall():
    lam = np.full((3, 3), 0.01) + np.eye(3) * 0.02
    g = sample_sbm(SbmSpec.equal_blocks(300, lam), np.random.default_rng(8))
    dist = floyd_warshall(g.adjacency.astype(float), directed=False, unweighted=True)
    rng = np.random.default_rng(9)
    seeds = rng.choice(300, size=4, replace=False)
    expected = set(np.flatnonzero(dist[seeds].min(axis=0) <= 3).tolist())
    assert neighborhood(g, seeds, 3) == expected



@pytest.mark.parametrize("h", [1, 2])
def test_neighborhood_dense_graph_many_seeds(h):
    # seed rows share hundreds of neighbors, which overflowed a narrow counter
    lam = np.array([[0.7, 0.3, 0.4], [0.3, 0.7, 0.3], [0.4, 0.3, 0.7]])
    g = sample_sbm(SbmSpec.equal_blocks(300, lam), np.random.default_rng(3))
    dist = floyd_warshall(g.adjacency.astype(float), directed=False, unweighted=True)
    seeds = np.random.default_rng(4).choice(300, size=290, replace=False)
    expected = set(np.flatnonzero(dist[seeds].min(axis=0) <= h).tolist())
    assert neighborhood(g, seeds, h) == expected
    assert neighborhood(g, seeds, h) == set(range(300))

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 6))
def test_neighborhood_monotone_and_saturating(seed, h):
    g = random_graph(25, 0.08, seed)
    src = [seed % 25]
    small, big = neighborhood(g, src, h), neighborhood(g, src, h + 1)
    assert small <= big
    if small == big:
        assert neighborhood(g, src, h + 5) == small
        assert neighborhood(g, src, INFINITY) == small


# ---------------------------------------------------------------- adjacency

def test_adjacency_empty_and_triangle():
    empty = Graph.from_edges(["a", "b", "c"], [])
    assert np.array_equal(adjacency_matrix(empty), np.zeros((3, 3)))
    tri = loads_edge_list("a b\nb c\na c")
    assert np.array_equal(adjacency_matrix(tri), np.ones((3, 3)) - np.eye(3))


def test_adjacency_row_sums_are_degrees():
    g = random_graph(60, 0.1, 4)
    a = adjacency_matrix(g)
    assert np.array_equal(a, a.T) and not np.diag(a).any()
    deg = np.zeros(60, dtype=int)
    for u, v in g.edges():
        deg[u] += 1
        deg[v] += 1
    assert np.array_equal(a.sum(axis=1), deg)


# ---------------------------------------------------------------- seed reordering

def test_reorder_identity_when_seeds_first():
    g = random_graph(6, 0.5, 1)
    g2 = random_graph(6, 0.5, 2)
    seeds = SeedMap(((g.labels[0], g2.labels[0]), (g.labels[1], g2.labels[1])))
    gr, g2r, s = reorder_seeds_first(g, g2, seeds)
    assert s == 2
    assert gr.labels == g.labels and g2r.labels == g2.labels
    assert np.array_equal(adjacency_matrix(gr), adjacency_matrix(g))


def test_reorder_empty_seedmap_is_noop():
    g = random_graph(5, 0.5, 1)
    gr, g2r, s = reorder_seeds_first(g, g, SeedMap())
    assert s == 0 and gr.labels == g.labels


def test_reorder_preserves_edges_through_labels():
    g = random_graph(5, 0.5, 11)
    g2 = random_graph(5, 0.5, 12).permute([4, 3, 2, 1, 0])
    seeds = SeedMap(((g.labels[3], g2.labels[1]), (g.labels[1], g2.labels[4])))
    gr, g2r, s = reorder_seeds_first(g, g2, seeds)
    assert s == 2
    for i, (a, b) in enumerate(seeds.pairs):
        assert gr.labels[i] == a and g2r.labels[i] == b
    assert gr.edge_label_set() == g.edge_label_set()
    assert g2r.edge_label_set() == g2.edge_label_set()
    # non-seed relative order preserved
    assert [lab for lab in gr.labels[2:]] == [lab for lab in g.labels if lab not in seeds.left]
    for u, v in itertools.combinations(range(5), 2):
        assert gr.has_edge(u, v) == g.has_edge(g.index(gr.labels[u]), g.index(gr.labels[v]))


def test_reorder_missing_label():
    g = path_graph()
    with pytest.raises(KeyError, match="nope"):
        reorder_seeds_first(g, g, SeedMap((("nope", "a"),)))
