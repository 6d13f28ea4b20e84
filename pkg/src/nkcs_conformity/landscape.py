"""NKCS task environment.

The organization-wide decision vector has ``M = P * N`` bits; agent ``p`` owns
the contiguous block ``x[p*N:(p+1)*N]``.  Each task ``i`` has a contribution
table indexed by the joint configuration of its own bit and the bits it is
coupled to.  Tables of homologous tasks (same position inside their block)
are drawn jointly across agents from a Gaussian copula so that agents face
similar, but not identical, environments.

Coupled bits are ordered per agent frame: the task's own bit is the most
significant, then the coupled positions inside the own block in ascending
order, then, for each external slot in slot order, the coupled positions in
that slot's foreign block in ascending order.  With homologous patterns this
makes the same row index mean the same configuration for every agent.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import ndtr

from . import _kernels
from .exceptions import ConfigurationError

DEFAULT_ENUMERATION_BITS = 24


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    """Coupling structure between the ``M`` tasks.

    Attributes:
        cells: ``M x M`` bool array; ``cells[i, j]`` means the contribution
            of task ``i`` depends on decision ``j``.
        deps: ``M x (K + C*S)`` int array of coupled task indices in
            canonical row-index order (own bit excluded).
        slots: ``P x S`` int array; ``slots[b, s]`` is the foreign block
            referenced by block ``b`` in external slot ``s``.
    """

    P: int
    N: int
    K: int
    C: int
    S: int
    cells: np.ndarray
    deps: np.ndarray
    slots: np.ndarray

    @property
    def M(self) -> int:
        return self.P * self.N

    @property
    def degree(self) -> int:
        """Number of coupled decisions per task, own decision excluded."""
        return self.K + self.C * self.S

    @property
    def rows(self) -> int:
        return 1 << (1 + self.degree)

    def block_of(self, i: int) -> int:
        return i // self.N


@dataclass(frozen=True, eq=False)
class LandscapeSet:
    """Contribution tables of all tasks plus the exact global optimum."""

    structure: InteractionMatrix
    tables: np.ndarray
    rho: float
    global_max: float
    global_argmax: np.ndarray
    seed: int | None = field(default=None)
    homologous: bool = True


def check_params(P: int, N: int, K: int, C: int, S: int) -> None:
    if P < 1:
        raise ConfigurationError("need at least one agent", "P")
    if N < 1:
        raise ConfigurationError("need at least one task per agent", "N")
    for name, v in (("K", K), ("C", C), ("S", S)):
        if v < 0:
            raise ConfigurationError("must be non-negative", name)
    if K > N - 1:
        raise ConfigurationError(f"K={K} exceeds N-1={N - 1}", "K")
    if C > N:
        raise ConfigurationError(f"C={C} exceeds N={N}", "C")
    if S > P - 1:
        raise ConfigurationError(f"S={S} exceeds P-1={P - 1}", "S")


def _disjoint_permutations(n: int, count: int, rng: np.random.Generator,
                           derangements: bool, max_tries: int = 10_000) -> list[np.ndarray]:
    """Sample ``count`` permutations of ``range(n)`` that never map an index
    to the same image twice (and avoid fixed points if ``derangements``).

    Their superposition is an ``n x n`` 0/1 matrix with every row and column
    summing to ``count``.  Collisions are handled by restarting the set.
    """
    for _ in range(max_tries):
        used = np.zeros((n, n), dtype=bool)
        if derangements:
            used[np.arange(n), np.arange(n)] = True
        perms = []
        for _ in range(count):
            for _ in range(200):
                perm = rng.permutation(n)
                if not used[np.arange(n), perm].any():
                    break
            else:
                break
            used[np.arange(n), perm] = True
            perms.append(perm)
        if len(perms) == count:
            return perms
    raise ConfigurationError(f"no regular pattern found for n={n}, degree={count}")


def _pattern(n: int, degree: int, rng: np.random.Generator, derangements: bool) -> np.ndarray:
    pattern = np.zeros((n, n), dtype=bool)
    for perm in _disjoint_permutations(n, degree, rng, derangements):
        pattern[np.arange(n), perm] = True
    return pattern


def build_interaction_matrix(P: int, N: int, K: int, C: int, S: int,
                             rng: np.random.Generator,
                             homologous_patterns: bool = True) -> InteractionMatrix:
    """Random regular coupling structure.

    Every task depends on exactly ``K`` other tasks in its own block and on
    ``C`` tasks in each of ``S`` distinct foreign blocks; every task is in
    turn depended upon by the same numbers.  The block-level graph is a
    random ``S``-regular digraph.  With ``homologous_patterns`` one internal
    pattern and one external pattern per slot are shared by all blocks.
    """
    check_params(P, N, K, C, S)
    M = P * N
    slots = np.zeros((P, S), dtype=np.int64)
    if S:
        for s, perm in enumerate(_disjoint_permutations(P, S, rng, derangements=True)):
            slots[:, s] = perm

    if homologous_patterns:
        internal = [_pattern(N, K, rng, derangements=True)] * P
        external_shared = [_pattern(N, C, rng, derangements=False) for _ in range(S)]
        external = [external_shared] * P
    else:
        internal = [_pattern(N, K, rng, derangements=True) for _ in range(P)]
        external = [[_pattern(N, C, rng, derangements=False) for _ in range(S)]
                    for _ in range(P)]

    cells = np.zeros((M, M), dtype=bool)
    deps = np.zeros((M, K + C * S), dtype=np.int64)
    for b in range(P):
        for j in range(N):
            i = b * N + j
            cells[i, i] = True
            row = [b * N + k for k in np.flatnonzero(internal[b][j])]
            for s in range(S):
                f = slots[b, s]
                row.extend(f * N + k for k in np.flatnonzero(external[b][s][j]))
            cells[i, row] = True
            deps[i] = row
    cells.flags.writeable = False
    deps.flags.writeable = False
    slots.flags.writeable = False
    return InteractionMatrix(P, N, K, C, S, cells, deps, slots)


def equicorrelation_for(rho: float) -> float:
    """Normal correlation whose probit-transformed uniforms have Pearson ``rho``."""
    return 2.0 * np.sin(np.pi * rho / 6.0)


def correlated_uniforms(size: tuple[int, ...], P: int, rho: float,
                        rng: np.random.Generator) -> np.ndarray:
    """Draw ``size + (P,)`` uniforms; the last axis is equicorrelated.

    Gaussian copula with one common factor: ``z = sqrt(r) c + sqrt(1-r) e``.
    """
    if not 0.0 <= rho <= 1.0:
        raise ConfigurationError(f"rho={rho} outside [0, 1]", "rho")
    # sin(pi/6) rounds below 0.5; rho == 1 must give identical draws
    r = 1.0 if rho == 1.0 else min(1.0, equicorrelation_for(rho))
    common = rng.standard_normal(size + (1,))
    idio = rng.standard_normal(size + (P,))
    return ndtr(np.sqrt(r) * common + np.sqrt(1.0 - r) * idio)


def generate_landscape_set(im: InteractionMatrix, rho: float, rng: np.random.Generator,
                           max_enumeration_bits: int = DEFAULT_ENUMERATION_BITS,
                           seed: int | None = None,
                           homologous: bool = True) -> LandscapeSet:
    """Draw correlated contribution tables and enumerate the global optimum."""
    u = correlated_uniforms((im.N, im.rows), im.P, rho, rng)
    # u[j, row, p] -> tables[p*N + j, row]
    tables = np.ascontiguousarray(u.transpose(2, 0, 1).reshape(im.M, im.rows))
    tables.flags.writeable = False
    best, argmax = _enumerate(im, tables, max_enumeration_bits)
    return LandscapeSet(im, tables, float(rho), best, argmax, seed, homologous)


def _enumerate(im: InteractionMatrix, tables: np.ndarray,
               max_enumeration_bits: int) -> tuple[float, np.ndarray]:
    if im.M > max_enumeration_bits:
        raise ConfigurationError(
            f"2**{im.M} states exceed the enumeration budget of 2**{max_enumeration_bits}",
            "max_enumeration_bits")
    best, code = _kernels.enumerate_max(np.asarray(im.deps), np.asarray(tables))
    argmax = np.array([(code >> (im.M - 1 - i)) & 1 for i in range(im.M)], dtype=np.int64)
    argmax.flags.writeable = False
    return float(best), argmax


def enumerate_global_max(ls: LandscapeSet,
                         max_enumeration_bits: int = DEFAULT_ENUMERATION_BITS
                         ) -> tuple[float, np.ndarray]:
    """Exact ``max Phi`` over all ``2**M`` states; lowest argmax in lexicographic order."""
    return _enumerate(ls.structure, ls.tables, max_enumeration_bits)


def contribution(ls: LandscapeSet, x, i: int) -> float:
    """Contribution of task ``i`` under decision vector ``x``."""
    x = np.asarray(x, dtype=np.int64)
    return float(ls.tables[i, _kernels.row_index(x, i, ls.structure.deps)])


def agent_performance(ls: LandscapeSet, x, p: int) -> float:
    """Mean contribution over the block of agent ``p``."""
    N = ls.structure.N
    total = 0.0
    for i in range(p * N, (p + 1) * N):
        total += contribution(ls, x, i)
    return total / N


def org_performance(ls: LandscapeSet, x) -> float:
    """Mean of all agents' performances.

    Blocks have equal size, so this is the mean over all ``M`` contributions;
    it is summed in task order to agree bit-for-bit with the enumeration.
    """
    total = 0.0
    for i in range(ls.structure.M):
        total += contribution(ls, x, i)
    return total / ls.structure.M


# -- construction from a seed -------------------------------------------------

def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    structure_ss, tables_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(structure_ss), np.random.default_rng(tables_ss)


def make_landscape(P: int, N: int, K: int, C: int, S: int, rho: float, seed: int,
                   homologous_patterns: bool = True,
                   max_enumeration_bits: int = DEFAULT_ENUMERATION_BITS) -> LandscapeSet:
    """Build structure and tables from one integer seed.

    Results are memoized: landscapes are immutable and runs that share a seed
    (e.g. different topologies on common random numbers) reuse them.
    """
    return _make_landscape(int(P), int(N), int(K), int(C), int(S), float(rho), int(seed),
                           bool(homologous_patterns), int(max_enumeration_bits))


@lru_cache(maxsize=2048)
def _make_landscape(P, N, K, C, S, rho, seed, homologous, max_bits):
    structure_rng, tables_rng = _streams(seed)
    im = build_interaction_matrix(P, N, K, C, S, structure_rng, homologous)
    return generate_landscape_set(im, rho, tables_rng, max_bits, seed, homologous)


# -- binary fixtures ----------------------------------------------------------

_MAGIC = b"NKCS"
_HEADER = struct.Struct("<4sB?5idq")


def dump_landscape(ls: LandscapeSet, fh: io.BufferedIOBase) -> None:
    """Write header ``(P, N, K, C, S, rho, seed)`` and the tables as
    little-endian float64, task-major then row-minor.
    """
    if ls.seed is None:
        raise ValueError("only seeded landscapes can be dumped")
    im = ls.structure
    fh.write(_HEADER.pack(_MAGIC, 1, ls.homologous, im.P, im.N, im.K, im.C, im.S,
                          ls.rho, ls.seed))
    fh.write(np.asarray(ls.tables, dtype="<f8").tobytes(order="C"))


def load_landscape(fh: io.BufferedIOBase,
                   max_enumeration_bits: int = DEFAULT_ENUMERATION_BITS) -> LandscapeSet:
    """Inverse of :func:`dump_landscape`; the structure is rebuilt from the seed."""
    magic, version, homologous, P, N, K, C, S, rho, seed = _HEADER.unpack(
        fh.read(_HEADER.size))
    if magic != _MAGIC or version != 1:
        raise ValueError("not a landscape dump")
    structure_rng, _ = _streams(seed)
    im = build_interaction_matrix(P, N, K, C, S, structure_rng, homologous)
    raw = fh.read(im.M * im.rows * 8)
    tables = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(im.M, im.rows)
    tables.flags.writeable = False
    best, argmax = _enumerate(im, tables, max_enumeration_bits)
    return LandscapeSet(im, tables, rho, best, argmax, seed, homologous)
