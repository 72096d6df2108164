"""Policy-driven episodes: encode once, then decode step by step.

greedy_rollout picks the argmax node each step (ties: lowest id);
sample_rollout draws k episodes from the step distributions and keeps the
best final cost, never worse than the greedy episode because that one is
always included. Label choice is delegated to the problem's label rule, so
the policy only ranks nodes.
"""

from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .decoder import ContextCache, decode_step
from .encoder import encode
from .errors import ParameterError
from .features import degree_features
from .graphs import Graph
from .model import view_of
from .problems import (
    MdpState,
    ProblemDefinition,
    Trajectory,
    _bulk_complete,
    apply_action,
)

# default sample counts per problem for best-of-k solving
DEFAULT_SAMPLES = {"gc": 100, "mvc": 10, "mis": 10}


def _greedy_select(probs: ad.Tensor) -> int:
    p = probs.data
    ad.note_selection(p.size)
    return int(np.argmax(p))


def _make_sampler(rng):
    def select(probs: ad.Tensor) -> int:
        p = probs.data
        ad.note_selection(p.size)
        c = np.cumsum(p)
        idx = int(np.searchsorted(c, rng.random(), side="right"))
        if idx >= p.size:  # cumulative sum fell short of 1 by rounding
            idx = int(np.flatnonzero(p > 0)[-1])
        return idx

    return select


def run_episode(problem: ProblemDefinition, graph: Graph, H, params, select,
                decode_mode=None, record_logp=False):
    """Drive one episode off precomputed node embeddings H.

    Returns (Trajectory, logp) where logp is the summed log-probability of
    the chosen nodes as a 0-d tensor (None unless record_logp).
    """
    view = view_of(params)
    state = MdpState(graph)
    cache = ContextCache(H, view)
    dstate = None
    steps: list = []
    logps: list = []
    while not state.terminal:
        if problem.bulk_zero_when_covered and state.labeling.uncovered_by_ones == 0:
            break
        g_t = cache.context()
        dstate = decode_step(state, H, g_t, dstate, view, decode_mode)
        v = select(dstate.probs)
        l = problem.label_rule(state, v)
        if record_logp:
            lp = ad.log(ad.take_at(dstate.probs, v))
            logps.append(lp)
            lp_val = float(lp.data[0])
        else:
            lp_val = float(np.log(dstate.probs.data[v]))
        apply_action(problem, state, v, l)
        cache.update(v, l)
        steps.append((v, l, lp_val))
    policy_steps = len(steps)
    if not state.terminal:
        _bulk_complete(state.labeling, steps)
    labels = state.labeling.labels.copy()
    traj = Trajectory(steps, labels, problem.cost(labels), policy_steps)
    logp = ad.sum_all(ad.concat(logps)) if logps and record_logp else None
    return traj, logp


def _encode_for(graph: Graph, params) -> ad.Tensor:
    view = view_of(params)
    x = degree_features(graph, view.d_in, subtract_mean=view.subtract_mean)
    return encode(graph, x, view, mode="eval")


def greedy_rollout(problem: ProblemDefinition, graph: Graph, params,
                   decode_mode=None) -> Trajectory:
    """One deterministic episode: argmax node each step."""
    H = _encode_for(graph, params)
    traj, _ = run_episode(problem, graph, H, params, _greedy_select, decode_mode)
    return traj


def sample_rollout(problem: ProblemDefinition, graph: Graph, params, k: int,
                   seed: int = 0, decode_mode=None) -> Trajectory:
    """Best of the greedy episode plus k sampled episodes (cost ties keep
    the earliest, so the greedy result wins exact ties)."""
    if k < 0:
        raise ParameterError(f"sample count must be >= 0, got {k}")
    H = _encode_for(graph, params)
    best, _ = run_episode(problem, graph, H, params, _greedy_select, decode_mode)
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(k):
        traj, _ = run_episode(problem, graph, H, params, _make_sampler(rng),
                              decode_mode)
        if traj.terminal_cost < best.terminal_cost:
            best = traj
    return best
