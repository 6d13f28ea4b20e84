"""Compiled inner loops: exhaustive search over all states and the period loop.

Everything here operates on plain arrays so it can be jitted.  The Python
modules wrap these kernels and keep pure-Python reference paths for testing.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def row_index(x, i, deps):
    idx = x[i]
    for d in range(deps.shape[1]):
        idx = idx * 2 + x[deps[i, d]]
    return idx


@njit(cache=True)
def enumerate_max(deps, tables):
    """Return ``(max Phi, argmax state code)`` over all 2**M states.

    State codes put task 0 in the most significant bit, so integer order is
    lexicographic bit order and the strict comparison keeps the lowest argmax.
    """
    m = tables.shape[0]
    n_dep = deps.shape[1]
    bits = np.empty(m, dtype=np.int64)
    best = -1.0
    best_code = 0
    for code in range(1 << m):
        for i in range(m):
            bits[i] = (code >> (m - 1 - i)) & 1
        total = 0.0
        for i in range(m):
            idx = bits[i]
            for d in range(n_dep):
                idx = idx * 2 + bits[deps[i, d]]
            total += tables[i, idx]
        phi = total / m
        if phi > best:
            best = phi
            best_code = code
    return best, best_code


@njit(cache=True)
def _block_performance(state, p, n, deps, tables):
    total = 0.0
    for j in range(n):
        i = p * n + j
        total += tables[i, row_index(state, i, deps)]
    return total / n


@njit(cache=True)
def _conformity(history, t, cand, p, n, in_nbrs, in_deg, memory_span, warmup):
    if warmup and t <= memory_span:
        return 0.0
    lo = max(1, t - memory_span)
    entries = in_deg[p] * (t - lo)
    if entries <= 0:
        return 0.0
    matches = 0
    for s in range(lo, t):
        for k in range(in_deg[p]):
            q = in_nbrs[p, k]
            for j in range(n):
                if history[s, q * n + j] == cand[j]:
                    matches += 1
    return matches / (entries * n)


@njit(cache=True)
def simulate(deps, tables, x0, flips, in_nbrs, in_deg, alpha, beta,
             memory_span, warmup, global_max, n_agents, n_tasks,
             history, perf_out, sync_out):
    """Synchronous propose/decide/share loop.

    ``history[t]`` holds the committed state after period t (row 0 is x_0).
    Memory of agent p at period t is the committed sub-vectors of its
    in-neighbours from periods ``max(1, t - memory_span) .. t - 1``.
    """
    m = n_agents * n_tasks
    periods = flips.shape[0]
    history[0, :] = x0
    trial = np.empty(m, dtype=history.dtype)
    own = np.empty(n_tasks, dtype=history.dtype)
    cand = np.empty(n_tasks, dtype=history.dtype)
    half_lo = n_agents // 2
    max_h = n_tasks * half_lo * (n_agents - half_lo)
    for t in range(1, periods + 1):
        prev = history[t - 1]
        for p in range(n_agents):
            base = p * n_tasks
            for j in range(n_tasks):
                own[j] = prev[base + j]
                cand[j] = prev[base + j]
            f = flips[t - 1, p]
            cand[f] = 1 - cand[f]

            trial[:] = prev
            perf_own = _block_performance(trial, p, n_tasks, deps, tables)
            for j in range(n_tasks):
                trial[base + j] = cand[j]
            perf_cand = _block_performance(trial, p, n_tasks, deps, tables)

            conf_own = _conformity(history, t, own, p, n_tasks, in_nbrs,
                                   in_deg, memory_span, warmup)
            conf_cand = _conformity(history, t, cand, p, n_tasks, in_nbrs,
                                    in_deg, memory_span, warmup)
            u_own = alpha * perf_own + beta * conf_own
            u_cand = alpha * perf_cand + beta * conf_cand
            chosen = cand if u_cand > u_own else own
            for j in range(n_tasks):
                history[t, base + j] = chosen[j]

        state = history[t]
        total = 0.0
        for i in range(m):
            total += tables[i, row_index(state, i, deps)]
        perf_out[t - 1] = (total / m) / global_max

        h = 0
        for j in range(n_tasks):
            ones = 0
            for p in range(n_agents):
                ones += state[p * n_tasks + j]
            h += ones * (n_agents - ones)
        sync_out[t - 1] = 1.0 - h / max_h
