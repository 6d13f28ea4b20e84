"""Directed information-sharing topologies over ``P`` agents.

Agents are labelled ``0 .. P-1``; agent 0 is the hub of the star and the
head of the line.  An edge ``(p, q)`` means ``q`` receives ``p``'s decisions.

Star and line pass decisions one way only.  The cycle is the directed loop
``0 -> 1 -> ... -> P-1 -> 0``; the ring is the same loop with every link
bidirectional, so each agent hears both neighbours directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import ConfigurationError


class Topology(str, Enum):
    STAR = "star"
    RING = "ring"
    CYCLE = "cycle"
    LINE = "line"


TOPOLOGIES = tuple(t.value for t in Topology)


@dataclass(frozen=True)
class Network:
    kind: Topology
    P: int
    edges: frozenset[tuple[int, int]]

    def in_neighbors(self, q: int) -> list[int]:
        return sorted(p for p, r in self.edges if r == q)

    def out_neighbors(self, p: int) -> list[int]:
        return sorted(r for s, r in self.edges if s == p)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.P, self.P), dtype=bool)
        for p, q in self.edges:
            a[p, q] = True
        return a

    def in_neighbor_array(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded ``P x max_in_degree`` sender table and in-degrees."""
        lists = [self.in_neighbors(q) for q in range(self.P)]
        deg = np.array([len(v) for v in lists], dtype=np.int64)
        table = np.full((self.P, max(1, int(deg.max()))), -1, dtype=np.int64)
        for q, v in enumerate(lists):
            table[q, :len(v)] = v
        return table, deg


def build_network(kind: Topology | str, P: int) -> Network:
    try:
        kind = Topology(kind)
    except ValueError:
        raise ConfigurationError(f"unknown topology {kind!r}; expected one of {TOPOLOGIES}",
                                 "topology") from None
    if P < 3:
        raise ConfigurationError(f"need at least 3 agents, got {P}", "P")

    path = {(p, p + 1) for p in range(P - 1)}
    if kind is Topology.STAR:
        edges = {(0, q) for q in range(1, P)}
    elif kind is Topology.LINE:
        edges = path
    elif kind is Topology.CYCLE:
        edges = path | {(P - 1, 0)}
    else:
        cycle = path | {(P - 1, 0)}
        edges = cycle | {(q, p) for p, q in cycle}
    return Network(kind, P, frozenset(edges))


def in_neighbors(net: Network, q: int) -> list[int]:
    """Senders whose decisions agent ``q`` receives, ascending."""
    return net.in_neighbors(q)
