# %% [markdown]
# # Nominating a counterpart for a vertex of interest
#
# Seeds within `h` hops of the vertex of interest are kept. Both graphs are
# cut down to the `ell`-hop neighborhoods of those seeds and soft-matched.
# The second graph's non-seed vertices are then ranked by their score
# against the vertex of interest.

# %%
import numpy as np

from vnmatch import (CorrelatedPairSpec, SbmSpec, SeedMap, SoftSgmConfig, VnConfig, evaluate_tau,
                     localize_seeds, nominate, sample_pair)

lam = np.array([[0.7, 0.3, 0.4], [0.3, 0.7, 0.3], [0.4, 0.3, 0.7]]) * 0.15
pair = sample_pair(CorrelatedPairSpec(SbmSpec.equal_blocks(150, lam), rho=0.9, rng_seed=7))
seeds = SeedMap(tuple((v, pair.truth[v]) for v in pair.seed_pool[::6]))
print("seeds:", seeds.s, "vertex of interest:", pair.voi, "->", pair.voi2)

# %%
for h in (1, 2, 3):
    print("h =", h, "local seeds:", localize_seeds(pair.g, seeds, pair.voi, h).s)

# %%
cfg = VnConfig(h=2, ell=2, soft=SoftSgmConfig(restarts=30, rng_seed=2))
nl = nominate(pair.g, pair.g2, seeds, pair.voi, cfg)
print(f"|S_x|={nl.s_x}  |G_x|={nl.size_g}  |G'_x|={nl.size_g2}  candidates={nl.candidate_count}")
print(nl.to_csv().splitlines()[:6])

# %% [markdown]
# The normalized rank is the expected position of the truth under random
# tie-breaking, rescaled to [0, 1]. Zero means the truth was ranked first.

# %%
t = evaluate_tau(nl, pair.voi2)
print("rank:", t.rank, "tau:", t.tau)

# %% [markdown]
# A vertex with no seed nearby stops early with an empty list.

# %%
far = SeedMap(((pair.seed_pool[0], pair.truth[pair.seed_pool[0]]),))
res = nominate(pair.g, pair.g2, far, pair.voi, VnConfig(h=1, ell=1))
print("stopped:", res.stopped, res.candidates)
