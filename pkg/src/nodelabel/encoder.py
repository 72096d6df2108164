"""Graph attention encoder.

Three rounds of multi-head neighborhood attention over N(v) ∪ {v}, each
wrapped as BatchNorm(h + heads(h)) with a leaky ReLU between rounds. All
per-node reductions run through the order-canonical segment ops, so the
eval-mode forward pass is exactly equivariant under node relabeling.
Work grows as O(d·m + d²·n).
"""

from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .errors import ShapeError, UsageError
from .graphs import Graph
from .model import NUM_HEADS, NUM_LAYERS, view_of

LEAKY_SLOPE = 0.2

ENCODER_MODES = ("train", "eval")


def attention_structure(g: Graph):
    """Edge list of the self-loop-augmented graph, sorted by destination:
    (src ids (E,), dst ids (E,), indptr (n+1,)) with E = 2m + n. Cached on
    the graph."""
    cached = g._cache.get("attn")
    if cached is not None:
        return cached
    n = g.n
    counts = np.diff(g.indptr).astype(np.int64) + 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    src = np.empty(indptr[-1], dtype=np.int64)
    for v in range(n):
        row = g.neighbors(v)
        pos = int(np.searchsorted(row, v))
        lo = indptr[v]
        src[lo : lo + pos] = row[:pos]
        src[lo + pos] = v
        src[lo + pos + 1 : lo + counts[v]] = row[pos:]
    dst = np.repeat(np.arange(n, dtype=np.int64), counts)
    g._cache["attn"] = (src, dst, indptr)
    return g._cache["attn"]


def _gat_layer(g: Graph, h, view, layer: int):
    """Multi-head attention output (n, d): per head, additive-attention
    logits lrelu(a_dst·Wh_v + a_src·Wh_u) over incoming edges u -> v,
    softmax-normalized per destination, then the alpha-weighted sum of
    source projections; heads concatenate."""
    src, dst, indptr = attention_structure(g)
    dh = view.d // NUM_HEADS
    half = np.arange(dh, dtype=np.int64)
    head_outs = []
    for head in range(NUM_HEADS):
        w = view.tensor[f"gat{layer}.h{head}.weight"]
        a = view.tensor[f"gat{layer}.h{head}.attn"]
        a_dst = ad.reshape(ad.gather_rows(a, half), (dh, 1))
        a_src = ad.reshape(ad.gather_rows(a, half + dh), (dh, 1))
        wh = ad.matmul(h, w)  # (n, dh)
        s_dst = ad.reshape(ad.matmul(wh, a_dst), (-1,))
        s_src = ad.reshape(ad.matmul(wh, a_src), (-1,))
        logits = ad.add(ad.gather_rows(s_dst, dst), ad.gather_rows(s_src, src))
        alpha = ad.segment_softmax(ad.leaky_relu(logits, LEAKY_SLOPE), indptr)
        head_outs.append(
            ad.segment_weighted_rowsum(alpha, ad.gather_rows(wh, src), indptr)
        )
    return ad.concat(head_outs)


def encode(g: Graph, x, params, mode: str = "eval"):
    """Node embeddings (n, d) from features x (n, d_in).

    params may be ModelParameters or a ParameterView (pass a taped view to
    train). mode="train" normalizes by batch statistics and updates the
    running buffers in place; mode="eval" reads the buffers and is
    deterministic.
    """
    if mode not in ENCODER_MODES:
        raise UsageError(f"encode: unknown mode {mode!r}, want one of {ENCODER_MODES}")
    view = view_of(params)
    x = ad._as_tensor(x)
    if x.data.ndim != 2 or x.data.shape != (g.n, view.d_in):
        raise ShapeError(
            f"encode: features {x.data.shape} do not match (n={g.n}, d_in={view.d_in})"
        )
    training = mode == "train"
    h = ad.add_rowvec(ad.matmul(x, view.tensor["input.weight"]), view.tensor["input.bias"])
    for layer in range(NUM_LAYERS):
        gat = _gat_layer(g, h, view, layer)
        h = ad.batch_norm(
            ad.add(h, gat),
            view.tensor[f"gat{layer}.norm.scale"],
            view.tensor[f"gat{layer}.norm.shift"],
            view.buffers[f"gat{layer}.norm.running_mean"],
            view.buffers[f"gat{layer}.norm.running_var"],
            training,
        )
        if layer < NUM_LAYERS - 1:
            h = ad.leaky_relu(h, LEAKY_SLOPE)
    return h
