"""Exact Markov-chain simulator of the per-node SIS process."""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

import numpy as np

from .model import ModelParams, StarlikeTopology


@dataclass
class ChainState:
    infected: np.ndarray  # bool, length node_count
    t: int = 0


def make_chain_state(topo: StarlikeTopology, infected_nodes=None, all_infected=False) -> ChainState:
    inf = np.zeros(topo.node_count, dtype=bool)
    if all_infected:
        inf[:] = True
    elif infected_nodes is not None:
        inf[np.asarray(infected_nodes, dtype=np.intp)] = True
    return ChainState(infected=inf, t=0)


@lru_cache(maxsize=32)
def _directed_edges(topo: StarlikeTopology):
    """Directed edge arrays (source, target) sorted by (target, source)."""
    src, dst = [], []
    for i, nbrs in enumerate(topo.neighbors):
        for j in nbrs:
            src.append(int(j))
            dst.append(i)
    return np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp)


def conditional_infection_probability(state: ChainState, params: ModelParams,
                                      topo: StarlikeTopology) -> np.ndarray:
    """One-step infection probability of each node given the current configuration."""
    a, b = params.a, params.b
    s = state.infected.astype(float)
    out = np.empty(topo.node_count)
    for i, nbrs in enumerate(topo.neighbors):
        prod = 1.0
        for j in nbrs:
            prod *= 1.0 - b * s[j]
        out[i] = 1.0 - (1.0 - a * s[i]) * prod
    return out


def step_chain(state: ChainState, params: ModelParams, topo: StarlikeTopology,
               rng: np.random.Generator) -> ChainState:
    """One step of the chain.

    An infected node stays infected with probability a; every infected
    neighbor independently transmits with probability b (one draw per
    directed edge); a node is infected next step iff it stayed infected or
    received at least one transmission.  Draws are consumed in a fixed order
    (all node draws, then all edge draws sorted by target) so the stream is
    independent of the configuration.
    """
    a, b = params.a, params.b
    src, dst = _directed_edges(topo)
    u_node = rng.random(topo.node_count)
    u_edge = rng.random(len(src))
    stayed = state.infected & (u_node < a)
    transmitted = state.infected[src] & (u_edge < b)
    nxt = stayed.copy()
    np.logical_or.at(nxt, dst[transmitted], True)
    return ChainState(infected=nxt, t=state.t + 1)


@dataclass
class RunSummary:
    prevalence: np.ndarray            # (horizon + 1, k) mean per-level infected fraction
    extinction_steps: List[Optional[int]]  # per trial, step at which all-healthy was reached
    master_seed: int
    trials: int


def run_trials(params: ModelParams, topo: StarlikeTopology, init: ChainState,
               horizon: int, trials: int, master_seed: int) -> RunSummary:
    """Average per-level prevalence over independent trials.

    Per-trial RNG streams are spawned from the master seed, so the result is
    deterministic and independent of execution order.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if init.infected.shape != (topo.node_count,):
        raise ValueError("initial state does not match topology")
    offs = topo.level_offsets
    sizes = np.array(topo.level_sizes, dtype=float)
    seeds = np.random.SeedSequence(master_seed).spawn(trials)
    total = np.zeros((horizon + 1, topo.k))
    extinction = []
    for seq in seeds:
        rng = np.random.default_rng(seq)
        state = ChainState(infected=init.infected.copy(), t=init.t)
        ext = None
        for t in range(horizon + 1):
            inf = state.infected
            total[t] += [inf[offs[m]:offs[m + 1]].sum() for m in range(topo.k)]
            if ext is None and not inf.any():
                ext = t
            if t < horizon:
                state = step_chain(state, params, topo, rng)
        extinction.append(ext)
    return RunSummary(prevalence=total / (trials * sizes), extinction_steps=extinction,
                      master_seed=master_seed, trials=trials)
