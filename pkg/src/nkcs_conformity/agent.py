"""Agents that trade off own performance against conformity to their peers.

This is the readable, object-level model.  The engine runs a compiled
equivalent (``_kernels.simulate``) and the test suite checks both agree
trajectory for trajectory.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError
from .landscape import LandscapeSet, agent_performance


def check_weights(alpha: float, beta: float) -> None:
    if alpha < 0 or beta < 0:
        raise ConfigurationError(f"weights must be non-negative, got {[alpha, beta]}", "weights")
    if not np.isclose(alpha + beta, 1.0, rtol=0, atol=1e-12):
        raise ConfigurationError(f"weights must sum to 1, got {[alpha, beta]}", "weights")


@dataclass
class AgentState:
    """One unit of the organization.

    ``memory`` holds ``(bits, period_received)`` pairs observed from
    in-neighbours; entries are forgotten once they are ``memory_span`` periods
    old.  With ``warmup`` on, conformity is zero for ``t <= memory_span``.
    """

    index: int
    own_bits: np.ndarray
    alpha: float = 0.5
    beta: float = 0.5
    memory_span: int = 50
    warmup: bool = True
    memory: deque = field(default_factory=deque)

    def __post_init__(self):
        check_weights(self.alpha, self.beta)
        self.own_bits = np.asarray(self.own_bits, dtype=np.int64).copy()

    @property
    def N(self) -> int:
        return self.own_bits.size

    def observe(self, shared, t: int) -> None:
        """Store vectors shared at period ``t`` and forget expired ones."""
        for _sender, bits in shared:
            bits = np.asarray(bits, dtype=np.int64)
            if bits.size != self.N:
                raise ValueError(f"shared vector has {bits.size} bits, expected {self.N}")
            self.memory.append((bits.copy(), t))
        while self.memory and t - self.memory[0][1] >= self.memory_span:
            self.memory.popleft()

    def conformity(self, candidate, t: int) -> float:
        """Mean fraction of bits of ``candidate`` matching remembered vectors."""
        if self.warmup and t <= self.memory_span:
            return 0.0
        if not self.memory:
            return 0.0
        candidate = np.asarray(candidate)
        matches = sum(int(np.count_nonzero(bits == candidate)) for bits, _ in self.memory)
        return matches / (len(self.memory) * self.N)

    def _with_block(self, candidate, context) -> np.ndarray:
        x = np.array(context, dtype=np.int64)
        x[self.index * self.N:(self.index + 1) * self.N] = candidate
        return x

    def utility(self, candidate, context, t: int, ls: LandscapeSet) -> float:
        """``alpha * performance + beta * conformity`` of ``candidate``,
        with all other agents' bits held at ``context``.
        """
        perf = agent_performance(ls, self._with_block(candidate, context), self.index)
        return self.alpha * perf + self.beta * self.conformity(candidate, t)

    def flip(self, position: int) -> np.ndarray:
        proposal = self.own_bits.copy()
        proposal[position] = 1 - proposal[position]
        return proposal

    def propose(self, rng: np.random.Generator) -> np.ndarray:
        """Own bits with one uniformly chosen bit switched."""
        return self.flip(int(rng.integers(self.N)))

    def decide(self, proposal, context, t: int, ls: LandscapeSet) -> np.ndarray:
        """Keep the status quo unless the proposal has strictly higher utility."""
        if self.utility(proposal, context, t, ls) > self.utility(self.own_bits, context, t, ls):
            return np.asarray(proposal, dtype=np.int64).copy()
        return self.own_bits.copy()
