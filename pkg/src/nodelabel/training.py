"""Policy-gradient training with a greedy self-baseline.

Each update samples one episode per training graph, scores it against the
greedy episode of a frozen baseline copy of the model, and follows the
advantage-weighted log-probability gradient (single optimizer step per
batch, graphs grouped by node count and encoded as one disjoint union so
normalization sees the whole group). After every epoch the candidate plays
the baseline on a held-out challenge set; a one-sided paired t-test below
the configured alpha promotes the candidate to baseline and redraws the
challenge set.

Everything is driven by one integer seed: parameter init, dataset, episode
sampling, challenge draws and epoch shuffles come from separate child
streams of a single SeedSequence, so runs repeat bitwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .encoder import encode
from .errors import NumericError, ParameterError
from .features import degree_features
from .graphs import FAMILIES, GeneratorSpec, Graph, disjoint_union, generate_graph
from .model import ModelParameters, init_parameters, view_of
from .problems import get_problem
from .rollout import _make_sampler, greedy_rollout, run_episode
from .stats import paired_t_test


@dataclass
class TrainConfig:
    problem: str = "gc"
    epochs: int = 10
    node_counts: tuple = (20, 40, 50, 70, 100)
    families: tuple = ("SER", "WS", "BA")
    train_size: int = 2000
    batch_per_n: int = 64
    learning_rate: float = 1e-4
    grad_clip: float | None = 1.0
    t_test_alpha: float = 0.05
    challenge_size: int = 256
    seed: int = 0
    model: dict = field(default_factory=dict)
    family_params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.node_counts = tuple(int(n) for n in self.node_counts)
        self.families = tuple(self.families)
        if not self.node_counts or any(n < 2 for n in self.node_counts):
            raise ParameterError(f"node counts must all be >= 2, got {self.node_counts}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ParameterError(f"unknown family {fam!r}, want one of {FAMILIES}")
        if self.epochs < 1 or self.train_size < 1 or self.batch_per_n < 1:
            raise ParameterError("epochs, train_size and batch_per_n must be positive")
        if self.challenge_size < 2:
            raise ParameterError("challenge_size must be >= 2 for the paired test")
        if not (0.0 < self.t_test_alpha < 1.0):
            raise ParameterError(f"alpha must lie in (0, 1), got {self.t_test_alpha}")
        if self.learning_rate <= 0:
            raise ParameterError("learning_rate must be positive")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ParameterError("grad_clip must be positive or None")

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "epochs": self.epochs,
            "node_counts": list(self.node_counts),
            "families": list(self.families),
            "train_size": self.train_size,
            "batch_per_n": self.batch_per_n,
            "learning_rate": self.learning_rate,
            "grad_clip": self.grad_clip,
            "t_test_alpha": self.t_test_alpha,
            "challenge_size": self.challenge_size,
            "seed": self.seed,
            "model": dict(self.model),
            "family_params": dict(self.family_params),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ParameterError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)


class Adam:
    """Adam with bias correction; moments keyed by tensor name."""

    def __init__(self, learning_rate: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m: dict = {}
        self.v: dict = {}

    def step(self, params: ModelParameters, grads: dict) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for name in params.trainable_names():
            arr = params.tensors[name]
            g = grads.get(name)
            if g is None:
                g = np.zeros_like(arr)
            m = self.m.get(name)
            if m is None:
                m = np.zeros_like(arr)
                self.m[name] = m
                self.v[name] = np.zeros_like(arr)
            v = self.v[name]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * (g * g)
            arr -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def _spec_for(cfg: TrainConfig, family: str, n: int, seed: int) -> GeneratorSpec:
    kwargs = dict(cfg.family_params.get(family, {}))
    return GeneratorSpec(family=family, n=n, seed=seed, **kwargs)


def make_dataset(cfg: TrainConfig, ss: np.random.SeedSequence) -> dict:
    """Fixed training graphs, grouped by node count. Families rotate within
    each group; graph seeds come from the given seed stream."""
    seeds = ss.generate_state(cfg.train_size, dtype=np.uint64)
    dataset: dict = {n: [] for n in cfg.node_counts}
    for i in range(cfg.train_size):
        n = cfg.node_counts[i % len(cfg.node_counts)]
        fam = cfg.families[(i // len(cfg.node_counts)) % len(cfg.families)]
        dataset[n].append(generate_graph(_spec_for(cfg, fam, n, int(seeds[i]))))
    return dataset


def challenge_batch(cfg: TrainConfig, rng) -> list:
    """Fresh held-out graphs drawn from the training distribution."""
    out = []
    for _ in range(cfg.challenge_size):
        n = cfg.node_counts[int(rng.integers(0, len(cfg.node_counts)))]
        fam = cfg.families[int(rng.integers(0, len(cfg.families)))]
        seed = int(rng.integers(0, 2**63))
        out.append(generate_graph(_spec_for(cfg, fam, n, seed)))
    return out


def greedy_costs(problem, graphs, params) -> np.ndarray:
    return np.asarray(
        [greedy_rollout(problem, g, params).terminal_cost for g in graphs],
        dtype=np.float64,
    )


def _baseline_costs(problem, graphs, baseline, cache: dict) -> list:
    out = []
    for g in graphs:
        key = id(g)
        c = cache.get(key)
        if c is None:
            c = greedy_rollout(problem, g, baseline).terminal_cost
            cache[key] = c
        out.append(c)
    return out


def reinforce_batch_update(params: ModelParameters, baseline: ModelParameters,
                           graphs: list, opt: Adam, cfg: TrainConfig,
                           episode_rng, bl_cache: dict) -> dict:
    """One optimizer step over a batch of graphs.

    Same-size graphs are encoded together as a disjoint union in training
    mode; each graph then runs one sampled episode on the shared tape. The
    surrogate loss is mean(advantage * episode log-probability) over the
    whole batch, gradients are accumulated across the size groups, globally
    L2-clipped, and applied with Adam.
    """
    problem = get_problem(cfg.problem)
    groups: dict = {}
    for g in graphs:
        groups.setdefault(g.n, []).append(g)
    total = len(graphs)
    acc: dict = {}
    cost_sum = 0
    for gs in groups.values():
        bl = _baseline_costs(problem, gs, baseline, bl_cache)
        union = disjoint_union(gs)
        x = degree_features(union, params.d_in, subtract_mean=params.subtract_mean)
        tape = ad.Tape()
        view = view_of(params, tape)
        H = encode(union, x, view, mode="train")
        offsets = np.cumsum([0] + [g.n for g in gs])
        terms = []
        for i, g in enumerate(gs):
            rows = np.arange(offsets[i], offsets[i + 1])
            traj, logp = run_episode(problem, g, ad.gather_rows(H, rows), view,
                                     _make_sampler(episode_rng), record_logp=True)
            cost_sum += traj.terminal_cost
            adv = float(traj.terminal_cost - bl[i])
            if adv != 0.0 and logp is not None:
                terms.append(ad.scale(logp, adv / total))
        if not terms:  # zero advantage everywhere: gradient is identically zero
            continue
        loss = terms[0]
        for t in terms[1:]:
            loss = ad.add(loss, t)
        gdict = ad.backward(tape, loss)
        for name in params.trainable_names():
            g = gdict.get(view.tensor[name].node)
            if g is not None:
                prev = acc.get(name)
                acc[name] = g if prev is None else prev + g

    sq = 0.0
    for g in acc.values():
        sq += float(np.sum(g * g))
    gnorm = math.sqrt(sq)
    if not math.isfinite(gnorm):
        raise NumericError("non-finite gradient in training batch")
    if cfg.grad_clip is not None and gnorm > cfg.grad_clip:
        factor = cfg.grad_clip / gnorm
        acc = {k: v * factor for k, v in acc.items()}
    opt.step(params, acc)
    return {"cost_sum": cost_sum, "episodes": total, "grad_norm": gnorm}


def train(cfg: TrainConfig, progress=None):
    """Full training run. Returns (parameters, per-epoch records).

    progress, if given, is called with each epoch record as it is produced.
    """
    problem = get_problem(cfg.problem)
    root = np.random.SeedSequence(cfg.seed)
    ss_init, ss_data, ss_chal, ss_ep, ss_shuf = root.spawn(5)
    params = init_parameters(seed=int(ss_init.generate_state(1)[0]), **cfg.model)
    baseline = params.copy()
    dataset = make_dataset(cfg, ss_data)
    chal_rng = np.random.Generator(np.random.PCG64(ss_chal))
    episode_rng = np.random.Generator(np.random.PCG64(ss_ep))
    shuffle_rng = np.random.Generator(np.random.PCG64(ss_shuf))
    challenge = challenge_batch(cfg, chal_rng)
    opt = Adam(cfg.learning_rate)
    bl_cache: dict = {}
    base_costs = None
    records = []
    bpn = cfg.batch_per_n
    for epoch in range(cfg.epochs):
        orders = {n: shuffle_rng.permutation(len(dataset[n])) for n in cfg.node_counts}
        steps = max(-(-len(dataset[n]) // bpn) for n in cfg.node_counts)
        cost_sum = 0
        episodes = 0
        for s in range(steps):
            batch = []
            for n in cfg.node_counts:
                for i in orders[n][s * bpn:(s + 1) * bpn]:
                    batch.append(dataset[n][int(i)])
            if not batch:
                continue
            out = reinforce_batch_update(params, baseline, batch, opt, cfg,
                                         episode_rng, bl_cache)
            cost_sum += out["cost_sum"]
            episodes += out["episodes"]
        cand = greedy_costs(problem, challenge, params)
        if base_costs is None:
            base_costs = greedy_costs(problem, challenge, baseline)
        p = paired_t_test(cand, base_costs)
        swapped = bool(p < cfg.t_test_alpha)
        record = {
            "epoch": epoch,
            "train_cost": cost_sum / episodes if episodes else 0.0,
            "challenge_cost": float(cand.mean()),
            "baseline_cost": float(base_costs.mean()),
            "p_value": float(p),
            "swapped": swapped,
        }
        if swapped:
            baseline = params.copy()
            bl_cache.clear()
            challenge = challenge_batch(cfg, chal_rng)
            base_costs = None
        records.append(record)
        if progress is not None:
            progress(record)
    return params, records


def write_log(records: list, path) -> None:
    """One JSON object per line, keys in a fixed order."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
