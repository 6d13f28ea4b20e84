"""Simulation runs and Monte Carlo experiments.

One run: build the landscape, draw a random initial state, then for ``T``
periods every agent proposes a one-bit change and accepts it if it strictly
raises its utility, evaluated against the frozen state of the previous
period.  All decisions commit together; afterwards each agent shares its
new block with its out-neighbours.

Randomness of a run is split from its integer seed with ``SeedSequence``:
children 0 and 1 build the landscape, child 2 the initial state, and child 3
is spawned once more into one flip stream per agent.  Landscape draws are
therefore shared by all scenarios that differ only in topology or weights.
"""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .agent import AgentState, check_weights
from .exceptions import ConfigurationError
from .landscape import DEFAULT_ENUMERATION_BITS, LandscapeSet, check_params, make_landscape
from .metrics import normalized_performance, synchrony
from .network import Network, build_network


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully specified scenario; defaults follow the paper's main parameters."""

    P: int = 5
    N: int = 4
    K: int = 3
    C: int = 0
    S: int = 0
    rho: float = 0.9
    memory_span: int = 50
    periods: int = 500
    runs: int = 1000
    alpha: float = 0.5
    beta: float = 0.5
    topology: str = "ring"
    seed: int = 0
    homologous_patterns: bool = True
    warmup_conformity: bool = True
    max_enumeration_bits: int = DEFAULT_ENUMERATION_BITS

    def __post_init__(self):
        check_params(self.P, self.N, self.K, self.C, self.S)
        check_weights(self.alpha, self.beta)
        object.__setattr__(self, "topology", build_network(self.topology, self.P).kind.value)
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigurationError(f"rho={self.rho} outside [0, 1]", "rho")
        if self.memory_span < 1:
            raise ConfigurationError("must be positive", "memory_span")
        if self.periods < 0:
            raise ConfigurationError("must be non-negative", "periods")
        if self.runs < 1:
            raise ConfigurationError("must be positive", "runs")
        if self.P * self.N > self.max_enumeration_bits:
            raise ConfigurationError(
                f"M={self.P * self.N} exceeds the enumeration budget", "max_enumeration_bits")

    @property
    def M(self) -> int:
        return self.P * self.N

    @property
    def regime(self) -> tuple[int, int, int]:
        return (self.K, self.C, self.S)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def landscape(self, seed: int) -> LandscapeSet:
        return make_landscape(self.P, self.N, self.K, self.C, self.S, self.rho, seed,
                              self.homologous_patterns, self.max_enumeration_bits)

    def network(self) -> Network:
        return build_network(self.topology, self.P)


@dataclass
class RunResult:
    performance: np.ndarray  # normalized Phi after each period 1..T
    synchrony: np.ndarray
    seed: int
    final_state: np.ndarray
    history: np.ndarray | None = field(default=None, repr=False)


@dataclass
class ExperimentResult:
    config: ScenarioConfig
    mean_performance: np.ndarray
    se_performance: np.ndarray
    mean_synchrony: np.ndarray
    se_synchrony: np.ndarray
    run_seeds: np.ndarray
    terminal_performance: np.ndarray
    terminal_synchrony: np.ndarray

    @property
    def runs(self) -> int:
        return len(self.run_seeds)

    @property
    def terminal_performance_cv(self) -> float:
        """Coefficient of variation of terminal performance across runs."""
        if self.runs < 2:
            return 0.0
        return float(np.std(self.terminal_performance, ddof=1)
                     / np.mean(self.terminal_performance))


def _initial_and_flips(cfg: ScenarioConfig, seed: int) -> tuple[np.ndarray, np.ndarray]:
    _, _, init_ss, agents_ss = np.random.SeedSequence(seed).spawn(4)
    x0 = np.random.default_rng(init_ss).integers(0, 2, size=cfg.M, dtype=np.int64)
    flips = np.empty((cfg.periods, cfg.P), dtype=np.int64)
    for p, ss in enumerate(agents_ss.spawn(cfg.P)):
        flips[:, p] = np.random.default_rng(ss).integers(0, cfg.N, size=cfg.periods)
    return x0, flips


def run_once(cfg: ScenarioConfig, seed: int, keep_history: bool = False) -> RunResult:
    """Simulate one run of ``cfg.periods`` periods; deterministic in ``seed``."""
    ls = cfg.landscape(seed)
    x0, flips = _initial_and_flips(cfg, seed)
    in_nbrs, in_deg = cfg.network().in_neighbor_array()
    history = np.empty((cfg.periods + 1, cfg.M), dtype=np.int64)
    perf = np.empty(cfg.periods)
    sync = np.empty(cfg.periods)
    _kernels.simulate(np.asarray(ls.structure.deps), np.asarray(ls.tables), x0, flips,
                      in_nbrs, in_deg, float(cfg.alpha), float(cfg.beta),
                      cfg.memory_span, cfg.warmup_conformity, ls.global_max,
                      cfg.P, cfg.N, history, perf, sync)
    return RunResult(perf, sync, int(seed), history[-1].copy(),
                     history if keep_history else None)


def run_reference(cfg: ScenarioConfig, seed: int, order=None) -> RunResult:
    """Object-level run with :class:`AgentState`; slow, used as an oracle.

    ``order`` permutes the sequence in which agents are evaluated inside a
    period; under the synchronous contract it must not change anything.
    """
    ls = cfg.landscape(seed)
    x0, flips = _initial_and_flips(cfg, seed)
    net = cfg.network()
    N = cfg.N
    agents = [AgentState(p, x0[p * N:(p + 1) * N], cfg.alpha, cfg.beta,
                         cfg.memory_span, cfg.warmup_conformity) for p in range(cfg.P)]
    order = list(range(cfg.P)) if order is None else list(order)
    x = x0.copy()
    history = [x.copy()]
    perf, sync = [], []
    for t in range(1, cfg.periods + 1):
        context = x.copy()
        chosen = {}
        for p in order:
            a = agents[p]
            chosen[p] = a.decide(a.flip(int(flips[t - 1, p])), context, t, ls)
        for p, bits in chosen.items():
            agents[p].own_bits = bits
            x[p * N:(p + 1) * N] = bits
        for q, a in enumerate(agents):
            a.observe([(p, agents[p].own_bits) for p in net.in_neighbors(q)], t)
        history.append(x.copy())
        perf.append(normalized_performance(x, ls))
        sync.append(synchrony(x, cfg.P, cfg.N))
    return RunResult(np.array(perf), np.array(sync), int(seed), x.copy(), np.array(history))


def run_seeds(master_seed: int, runs: int) -> np.ndarray:
    """Per-run integer seeds split off ``master_seed``.

    Seed ``i`` does not depend on ``runs``, so smaller experiments are
    prefixes of larger ones.
    """
    children = np.random.SeedSequence(master_seed).spawn(runs)
    return np.array([c.generate_state(1, np.uint64)[0] for c in children], dtype=np.uint64)


def _run_many(cfg: ScenarioConfig, seeds) -> list[RunResult]:
    return [run_once(cfg, int(s)) for s in seeds]


def run_experiment(cfg: ScenarioConfig, workers: int | None = 1) -> ExperimentResult:
    """Run ``cfg.runs`` independent repetitions and average per period.

    Runs are reduced in seed order, so the result does not depend on
    ``workers``.  ``workers=None`` uses every available core.
    """
    seeds = run_seeds(cfg.seed, cfg.runs)
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or cfg.runs == 1:
        results = _run_many(cfg, seeds)
    else:
        chunks = np.array_split(seeds, min(workers * 4, cfg.runs))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_run_many, [cfg] * len(chunks), chunks)
                       for r in part]
    return aggregate(cfg, results)


def aggregate(cfg: ScenarioConfig, results: list[RunResult]) -> ExperimentResult:
    perf = np.stack([r.performance for r in results]) if results else np.empty((0, 0))
    sync = np.stack([r.synchrony for r in results]) if results else np.empty((0, 0))
    n = len(results)

    def se(a):
        if n < 2:
            return np.zeros(a.shape[1])
        return a.std(axis=0, ddof=1) / np.sqrt(n)

    def terminal(a):
        return a[:, -1].copy() if a.shape[1] else np.empty(n)

    return ExperimentResult(
        config=cfg,
        mean_performance=perf.mean(axis=0),
        se_performance=se(perf),
        mean_synchrony=sync.mean(axis=0),
        se_synchrony=se(sync),
        run_seeds=np.array([r.seed for r in results], dtype=np.uint64),
        terminal_performance=terminal(perf),
        terminal_synchrony=terminal(sync),
    )
