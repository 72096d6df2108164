"""Attention decoder: per-step node scores from a context embedding.

The context g_t stacks the graph embedding (max-pool over all node rows)
with the embeddings of the last `context_size` labeled nodes and of their
label classes (elementwise max over the class, evaluated at the current
step); a learned vector fills the slots that do not exist yet. Node v's raw
weight is clip·tanh((Θ1 g_t)·(Θ2 h_v)/√d); labeled nodes are excluded from
the softmax outright, never by -inf arithmetic.

Recompute modes: "local" refreshes only the unlabeled neighbors of the last
labeled node (everything at t=0), "static" keeps the t=0 weights, "global"
refreshes every unlabeled node. Untouched entries carry their stale values
bitwise unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .errors import UsageError
from .graphs import Graph
from .model import DECODE_MODES, view_of
from .problems import UNLABELED, MdpState


@dataclass
class DecoderState:
    """Carry-over between steps: cached raw weights (stale entries allowed),
    the probabilities they induced, the step they were computed at, and the
    unlabeled mask used."""

    weights: ad.Tensor
    probs: ad.Tensor
    step: int
    mask: np.ndarray


def _h0_slot(view, j: int) -> ad.Tensor:
    """Learned filler for history slot j (1-based), as a (2d,) tensor."""
    d = view.d
    lo = 2 * d * (j - 1)
    return ad.gather_rows(view.tensor["decoder.h0"], np.arange(lo, lo + 2 * d))


def _class_embedding(H, members) -> ad.Tensor:
    rows = np.asarray(sorted(int(v) for v in members), dtype=np.int64)
    return ad.reshape(ad.maxpool_rows(ad.gather_rows(H, rows)), (-1,))


def context_embedding(state: MdpState, H, params) -> ad.Tensor:
    """g_t of length (2·context_size + 1)·d, rebuilt from scratch.

    Episode loops use ContextCache instead; both produce identical values
    (max-pooling is order-independent)."""
    view = view_of(params)
    hist = state.history
    parts = [ad.reshape(ad.maxpool_rows(H), (-1,))]
    for j in range(1, view.context_size + 1):
        if j <= len(hist):
            v, l = hist[-j]
            hv = ad.reshape(ad.gather_rows(H, np.asarray([v])), (-1,))
            hl = _class_embedding(H, state.labeling.label_classes[l])
            parts.extend((hv, hl))
        else:
            parts.append(_h0_slot(view, j))
    return ad.concat(parts)


class ContextCache:
    """Incremental context for one episode: the graph embedding is computed
    once, label-class embeddings fold in each new node with one elementwise
    max, and the action history keeps the last context_size steps."""

    def __init__(self, H, view):
        self.H = H
        self.view = view
        self.h_graph = ad.reshape(ad.maxpool_rows(H), (-1,))
        self.label_max: dict[int, ad.Tensor] = {}
        self.history: list = []

    def update(self, v: int, l: int) -> None:
        hv = ad.reshape(ad.gather_rows(self.H, np.asarray([v])), (-1,))
        prev = self.label_max.get(l)
        self.label_max[l] = hv if prev is None else ad.maximum(prev, hv)
        self.history.append((v, l))

    def context(self) -> ad.Tensor:
        parts = [self.h_graph]
        for j in range(1, self.view.context_size + 1):
            if j <= len(self.history):
                v, l = self.history[-j]
                hv = ad.reshape(ad.gather_rows(self.H, np.asarray([v])), (-1,))
                parts.extend((hv, self.label_max[l]))
            else:
                parts.append(_h0_slot(self.view, j))
        return ad.concat(parts)


def _fresh_weights(H, idx: np.ndarray, g_t, view) -> ad.Tensor:
    """clip·tanh((Θ1 g_t)·(Θ2 h_v)/√d) for each v in idx; the Θ2 h_v
    projection is recomputed on every call by design (no per-node caching)."""
    d = view.d
    q = ad.matmul(view.tensor["decoder.theta1"], ad.reshape(g_t, (-1, 1)))  # (d, 1)
    z = ad.matmul(ad.gather_rows(H, idx), ad.transpose(view.tensor["decoder.theta2"]))
    scores = ad.reshape(ad.matmul(z, q), (-1,))
    return ad.scale(ad.tanh(ad.scale(scores, 1.0 / np.sqrt(d))), view.clip)


def update_set(state: MdpState, mode: str) -> np.ndarray:
    """Node ids whose weights step t recomputes under `mode`."""
    lab = state.labeling.labels
    if state.step == 0:
        return np.arange(state.graph.n, dtype=np.int64)
    if mode == "static":
        return np.empty(0, dtype=np.int64)
    if mode == "local":
        last_v = state.last_action[0]
        nbrs = state.graph.neighbors(last_v)
        return np.asarray([int(u) for u in nbrs if lab[u] == UNLABELED], dtype=np.int64)
    return np.flatnonzero(lab == UNLABELED).astype(np.int64)


def decode_step(
    state: MdpState,
    H,
    g_t,
    prev: DecoderState | None,
    params,
    mode: str | None = None,
    update_override: np.ndarray | None = None,
) -> DecoderState:
    """One decoding step: refresh the update set's weights, keep the rest
    stale, and renormalize over the unlabeled nodes.

    update_override substitutes the mode's update set (diagnostics only).
    """
    view = view_of(params)
    if mode is None:
        mode = view.decode_mode
    if mode not in DECODE_MODES:
        raise UsageError(f"decode_step: unknown mode {mode!r}, want one of {DECODE_MODES}")
    if state.terminal:
        raise UsageError("decode_step on a terminal state")
    t = state.step
    if (prev is None) != (t == 0):
        raise UsageError("prev decoder state required exactly when t > 0")
    idx = update_override if update_override is not None else update_set(state, mode)
    if t == 0:
        weights = _fresh_weights(H, idx, g_t, view)
    elif len(idx):
        weights = ad.scatter_update(prev.weights, idx, _fresh_weights(H, idx, g_t, view))
    else:
        weights = prev.weights
    mask = state.labeling.labels == UNLABELED
    probs = ad.masked_softmax(weights, mask)
    return DecoderState(weights, probs, t, mask)
