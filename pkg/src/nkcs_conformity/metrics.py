"""Synchrony and normalized performance of organization-wide decisions."""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateLandscapeError
from .landscape import LandscapeSet, org_performance


def hamming(u, v) -> int:
    """Number of positions where two equal-length bit vectors differ."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return int(np.count_nonzero(u != v))


def _blocks(x, P: int, N: int) -> np.ndarray:
    x = np.asarray(x)
    if x.size != P * N:
        raise ValueError(f"expected {P * N} bits, got {x.size}")
    return x.reshape(P, N)


def asynchrony(x, P: int, N: int) -> int:
    """Sum of Hamming distances over all unordered pairs of agent blocks."""
    blocks = _blocks(x, P, N)
    return sum(hamming(blocks[p], blocks[q]) for p in range(P) for q in range(p, P))


def max_asynchrony(P: int, N: int) -> int:
    # per bit position at most floor(P/2) * ceil(P/2) pairs disagree
    return N * (P // 2) * (P - P // 2)


def synchrony(x, P: int, N: int) -> float:
    """``1 - asynchrony / max_asynchrony``; 1 means all agents decide alike."""
    return 1.0 - asynchrony(x, P, N) / max_asynchrony(P, N)


def normalized_performance(x, ls: LandscapeSet) -> float:
    if ls.global_max <= 0.0:
        raise DegenerateLandscapeError("global maximum is zero; cannot normalize")
    return org_performance(ls, x) / ls.global_max
