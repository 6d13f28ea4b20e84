# %% [markdown]
# # Agents, memory and who listens to whom
#
# Each period an agent tries flipping one of its decisions and keeps the
# change only if it raises
# `alpha * own performance + beta * conformity`,
# where conformity is the share of matching bits against the peer decisions
# it remembers from the last 50 periods.

# %%
import numpy as np

from nkcs_conformity.agent import AgentState
from nkcs_conformity.landscape import make_landscape
from nkcs_conformity.network import build_network

# %%
for kind in ("star", "line", "cycle", "ring"):
    net = build_network(kind, 5)
    print(f"{kind:5s}", sorted(net.edges))
    print("      listens to:", {q: net.in_neighbors(q) for q in range(5)})

# %% [markdown]
# ## A pure conformist following a fixed peer
# Conformity is switched off for the first 50 periods, so nothing happens
# until then; afterwards the agent walks to the peer's decisions and stays.

# %%
ls = make_landscape(5, 4, 3, 0, 0, 0.9, seed=3)
peer = np.array([1, 0, 1, 1])
agent = AgentState(1, np.array([0, 1, 0, 0]), alpha=0.0, beta=1.0)
context = np.zeros(20, dtype=int)
rng = np.random.default_rng(0)
for t in range(1, 81):
    agent.own_bits = agent.decide(agent.propose(rng), context, t, ls)
    agent.observe([(0, peer)], t)
    if t in (10, 50, 51, 52, 55, 60, 80):
        print(t, agent.own_bits, "conformity", round(agent.conformity(agent.own_bits, t + 1), 2))
