# %% [markdown]
# # Graphs, neighborhoods and edge lists
#
# `Graph` is an immutable simple graph with string labels over a sparse
# adjacency. Everything downstream works with internal indices, and labels
# are only used at the boundaries.

# %%
import io

import numpy as np

from vnmatch import INFINITY, Graph, adjacency_matrix, induced_subgraph, neighborhood
from vnmatch.graph import loads_edge_list, save_edge_list

# %% [markdown]
# Edge lists accept whitespace or a comma between labels. Duplicate edges
# and self-loops are normalized away, and the counts are kept on the graph.

# %%
g = loads_edge_list("""
# a small road network
a b
b,c
c d
d e
b a
c c
x y
""")
print(g)
print("dropped loops:", g.dropped_loops, "collapsed duplicates:", g.collapsed_duplicates)

# %% [markdown]
# Hop neighborhoods grow outward from a set of sources. `h = 0` returns the
# sources, and `INFINITY` returns their connected components.

# %%
src = [g.index("a")]
for h in (0, 1, 2, 3, INFINITY):
    print(h, sorted(g.labels[i] for i in neighborhood(g, src, h)))

# %% [markdown]
# Induced subgraphs keep the original labels in ascending index order.

# %%
sub = induced_subgraph(g, neighborhood(g, src, 2))
print(sub.labels, sub.n_edges)
print(adjacency_matrix(sub))

# %% [markdown]
# Saving writes a plain edge list. Vertices with no lower-indexed neighbor
# are declared with a `# vertex` comment, so reading the file back gives the
# same vertex order, isolated vertices included.

# %%
h = Graph.from_edges(["p", "q", "lonely", "r"], [(0, 1), (1, 3)])
buf = io.StringIO()
save_edge_list(h, buf)
print(buf.getvalue())
back = loads_edge_list(buf.getvalue())
assert back.labels == h.labels
assert np.array_equal(adjacency_matrix(back), adjacency_matrix(h))
