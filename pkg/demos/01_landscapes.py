# %% [markdown]
# # Correlated NKCS landscapes
#
# Five units each own four binary decisions.  A task's payoff depends on its
# own decision and on the decisions it is coupled to, inside its own unit
# (K) and in S other units (C per unit).  Units face similar environments:
# homologous payoff tables are correlated across units.

# %%
import numpy as np

from nkcs_conformity.landscape import (
    build_interaction_matrix,
    correlated_uniforms,
    make_landscape,
    org_performance,
)

# %% [markdown]
# ## Coupling structure
# Internal only (K=3) gives five dense 4x4 blocks; K=C=S=2 adds two foreign
# blocks per row.  Every row and column has the same number of crosses.

# %%
for regime in [(3, 0, 0), (2, 2, 2)]:
    im = build_interaction_matrix(5, 4, *regime, np.random.default_rng(0))
    print(f"K, C, S = {regime}")
    for row in im.cells.astype(int):
        print("".join(".x"[v] for v in row))
    print("row sums", set(im.cells.sum(1)), "column sums", set(im.cells.sum(0)), "\n")

# %% [markdown]
# ## Correlation between units
# A Gaussian copula keeps the marginals uniform while the Pearson
# correlation of the uniforms hits the target.

# %%
u = correlated_uniforms((200_000,), 5, 0.9, np.random.default_rng(1))
print("pairwise Pearson:\n", np.round(np.corrcoef(u.T), 3))
print("marginal quartiles:", np.round(np.quantile(u[:, 0], [0.25, 0.5, 0.75]), 3))

# %% [markdown]
# ## Global optimum
# All 2**20 organization states are enumerated once per landscape so that
# performance can be reported as a fraction of the best achievable.

# %%
ls = make_landscape(5, 4, 2, 2, 2, 0.9, seed=7)
print("global max", round(ls.global_max, 4), "at", "".join(map(str, ls.global_argmax)))
rng = np.random.default_rng(2)
random_phi = [org_performance(ls, rng.integers(0, 2, 20)) / ls.global_max for _ in range(1000)]
print("random states reach on average", round(float(np.mean(random_phi)), 3), "of the optimum")
