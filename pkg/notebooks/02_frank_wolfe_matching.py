# %% [markdown]
# # One Frank-Wolfe seeded matching run
#
# Two graphs are centered (edges +1, non-edges -1, padding 0) and the
# non-seed block is matched by Frank-Wolfe over doubly stochastic matrices.
# Each step solves a linear assignment on the gradient and then takes the
# exact best point on the segment, so the objective never goes down.

# %%
import numpy as np

from vnmatch.assignment import max_assignment
from vnmatch.sgm import frank_wolfe_sgm, objective_f, pad_and_center
from vnmatch.soft import random_start

rng = np.random.default_rng(0)


def random_adj(n, p):
    a = np.triu(rng.random((n, n)) < p, 1).astype(float)
    return a + a.T


# %% [markdown]
# The linear assignment solver maximizes the trace of the selected entries.

# %%
m = rng.normal(size=(5, 5))
res = max_assignment(m)
print(res.permutation, round(res.objective, 4))

# %% [markdown]
# Match a graph against a shuffled copy of itself. The first `s` vertices
# are seeds and stay fixed; the rest are permuted.

# %%
n, s = 40, 4
a = random_adj(n, 0.3)
perm = np.concatenate([np.arange(s), s + rng.permutation(n - s)])
b = a[np.ix_(perm, perm)]
pair = pad_and_center(a, b, s)

trace = []
run = frank_wolfe_sgm(pair, random_start(pair.dim, 0.1, rng), callback=lambda j, p: trace.append(j))
print("iterations:", run.iterations, "converged:", run.converged)
print("objective trace:", np.round(run.objective_trace, 2))

# %% [markdown]
# `b[i, j] = a[perm[i], perm[j]]`, so non-seed vertex `i` of `a` is matched
# correctly when it is sent to the position `j` with `perm[j] = i`.

# %%
inverse = np.argsort(perm)[s:] - s
print("fraction matched correctly:", np.mean(run.permutation == inverse))
print("f at projection:", run.final_objective, " f at truth:",
      objective_f(pair.blocks(), np.eye(n - s)[inverse]))

# %% [markdown]
# Graphs of different sizes are padded with zero rows, so the dimension of
# the problem is `max(n, n') - s`.

# %%
pair = pad_and_center(random_adj(12, 0.4), random_adj(9, 0.4), 3)
print(pair.size, pair.dim, pair.b[-1])
