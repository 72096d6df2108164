"""Reverse-mode automatic differentiation over float64 numpy arrays.

A Tape records operations as they execute; backward() replays them in
reverse. Tensors without a tape are constants, so the same op functions
serve training (tape attached) and inference (no recording) with one code
path. No broadcasting beyond explicit scalar variants: elementwise ops
demand equal shapes and fail loudly otherwise.

Two global work counters can be armed with count_operations(): `arithmetic`
for multiply/add style work (encoder message passing, projections, decoder
weight math) and `selection` for comparison-style work (softmax
normalization over candidates, max-pooling, argmax and sampling).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, UsageError


@dataclass
class OpCounter:
    arithmetic: int = 0
    selection: int = 0


_counter: OpCounter | None = None


@contextmanager
def count_operations():
    """Arm the work counters inside the block; yields the counter."""
    global _counter
    prev = _counter
    _counter = c = OpCounter()
    try:
        yield c
    finally:
        _counter = prev


def _arith(k):
    if _counter is not None:
        _counter.arithmetic += int(k)


def _select(k):
    if _counter is not None:
        _counter.selection += int(k)


def note_selection(k: int) -> None:
    """Record comparison-style work done outside tensor ops (argmax over
    candidates, sampling)."""
    _select(k)


class Tape:
    """Operation record. nodes[i] = (parent node ids, backward closure);
    leaves carry no closure. Construction order is already topological."""

    __slots__ = ("nodes",)

    def __init__(self):
        self.nodes = []

    def _record(self, parents, bwd) -> int:
        self.nodes.append((parents, bwd))
        return len(self.nodes) - 1

    def leaf(self, data) -> "Tensor":
        t = Tensor(data, self)
        t.node = self._record((), None)
        return t


class Tensor:
    """float64 array plus its position on a tape (node is None off-tape)."""

    __slots__ = ("data", "tape", "node")

    def __init__(self, data, tape: Tape | None = None):
        self.data = np.asarray(data, dtype=np.float64)
        self.tape = tape
        self.node = None

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        if self.data.size != 1:
            raise UsageError(f"item() on tensor of shape {self.data.shape}")
        return float(self.data.reshape(()))

    def __repr__(self):
        tag = "const" if self.tape is None else f"node {self.node}"
        return f"Tensor(shape={self.data.shape}, {tag})"


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _join_tape(name, *tensors) -> Tape | None:
    tape = None
    for t in tensors:
        if t.tape is None:
            continue
        if tape is None:
            tape = t.tape
        elif tape is not t.tape:
            raise UsageError(f"{name}: operands live on different tapes")
    return tape


def _make(name, out_data, inputs, bwd):
    """Wrap op output; record on the tape when any input is tracked.

    bwd(g) must return one gradient (or None) per entry of `inputs`, in
    order, as fresh arrays.
    """
    tape = _join_tape(name, *inputs)
    out = Tensor(out_data, tape)
    if tape is not None:
        parents = tuple(t.node if t.tape is tape else None for t in inputs)
        out.node = tape._record(parents, bwd)
    return out


def backward(tape: Tape, loss: Tensor) -> dict:
    """Gradients of a scalar loss w.r.t. every reachable tape node.

    Returns {node id: gradient array}; leaves the loss cannot reach are
    simply absent (callers treat that as a zero gradient).
    """
    if loss.tape is not tape or loss.node is None:
        raise UsageError("loss is not on this tape")
    if loss.data.size != 1:
        raise UsageError(f"loss must be scalar, got shape {loss.data.shape}")
    grads: dict[int, np.ndarray] = {loss.node: np.ones_like(loss.data)}
    for i in range(loss.node, -1, -1):
        g = grads.get(i)
        if g is None:
            continue
        parents, bwd = tape.nodes[i]
        if bwd is None:
            continue
        for pid, pg in zip(parents, bwd(g)):
            if pid is None or pg is None:
                continue
            prev = grads.get(pid)
            grads[pid] = pg if prev is None else prev + pg
    return grads


def _need_shape(cond, name, detail):
    if not cond:
        raise ShapeError(f"{name}: {detail}")


# ---------------------------------------------------------------------------
# elementwise and linear ops
# ---------------------------------------------------------------------------


def matmul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _need_shape(a.data.ndim == 2 and b.data.ndim == 2, "matmul",
                f"need 2-D operands, got {a.data.shape} @ {b.data.shape}")
    _need_shape(a.data.shape[1] == b.data.shape[0], "matmul",
                f"inner dims differ: {a.data.shape} @ {b.data.shape}")
    out = a.data @ b.data
    _arith(2 * a.data.shape[0] * a.data.shape[1] * b.data.shape[1])
    ad, bd = a.data, b.data

    def bwd(g):
        _arith(2 * g.shape[0] * g.shape[1] * (ad.shape[1] + bd.shape[0]))
        return g @ bd.T, ad.T @ g

    return _make("matmul", out, (a, b), bwd)


def transpose(a) -> Tensor:
    a = _as_tensor(a)
    _need_shape(a.data.ndim == 2, "transpose", f"need 2-D, got {a.data.shape}")
    return _make("transpose", a.data.T, (a,), lambda g: (g.T,))


def reshape(a, shape) -> Tensor:
    a = _as_tensor(a)
    old = a.data.shape
    return _make("reshape", a.data.reshape(shape), (a,), lambda g: (g.reshape(old),))


def _binary(name, a, b, fwd, bwd_pair):
    a, b = _as_tensor(a), _as_tensor(b)
    _need_shape(a.data.shape == b.data.shape, name,
                f"shapes differ: {a.data.shape} vs {b.data.shape}")
    out = fwd(a.data, b.data)
    _arith(out.size)
    return _make(name, out, (a, b), lambda g: bwd_pair(g, a.data, b.data))


def add(a, b) -> Tensor:
    return _binary("add", a, b, lambda x, y: x + y, lambda g, x, y: (g + 0.0, g + 0.0))


def sub(a, b) -> Tensor:
    return _binary("sub", a, b, lambda x, y: x - y, lambda g, x, y: (g + 0.0, -g))


def mul(a, b) -> Tensor:
    return _binary("mul", a, b, lambda x, y: x * y, lambda g, x, y: (g * y, g * x))


def scale(a, s: float) -> Tensor:
    a = _as_tensor(a)
    s = float(s)
    out = a.data * s
    _arith(out.size)
    return _make("scale", out, (a,), lambda g: (g * s,))


def add_scalar(a, s: float) -> Tensor:
    a = _as_tensor(a)
    s = float(s)
    out = a.data + s
    _arith(out.size)
    return _make("add_scalar", out, (a,), lambda g: (g + 0.0,))


def add_rowvec(x, b) -> Tensor:
    """x (n, d) plus a row vector b (d,) added to every row."""
    x, b = _as_tensor(x), _as_tensor(b)
    _need_shape(x.data.ndim == 2 and b.data.ndim == 1, "add_rowvec",
                f"need (n,d) and (d,), got {x.data.shape} and {b.data.shape}")
    _need_shape(x.data.shape[1] == b.data.shape[0], "add_rowvec",
                f"width mismatch: {x.data.shape} vs {b.data.shape}")
    out = x.data + b.data[None, :]
    _arith(out.size)
    return _make("add_rowvec", out, (x, b), lambda g: (g + 0.0, g.sum(axis=0)))


def concat(tensors) -> Tensor:
    """Concatenate along the last axis."""
    ts = [_as_tensor(t) for t in tensors]
    if not ts:
        raise UsageError("concat of nothing")
    nd = ts[0].data.ndim
    _need_shape(all(t.data.ndim == nd for t in ts), "concat", "rank mismatch")
    _need_shape(
        all(t.data.shape[:-1] == ts[0].data.shape[:-1] for t in ts),
        "concat", "leading dims differ",
    )
    out = np.concatenate([t.data for t in ts], axis=-1)
    sizes = [t.data.shape[-1] for t in ts]
    splits = np.cumsum(sizes)[:-1]

    def bwd(g):
        return tuple(np.ascontiguousarray(p) for p in np.split(g, splits, axis=-1))

    return _make("concat", out, tuple(ts), bwd)


def leaky_relu(x, slope: float = 0.2) -> Tensor:
    x = _as_tensor(x)
    pos = x.data > 0
    out = np.where(pos, x.data, slope * x.data)
    _arith(2 * out.size)
    return _make("leaky_relu", out, (x,), lambda g: (np.where(pos, g, slope * g),))


def tanh(x) -> Tensor:
    x = _as_tensor(x)
    out = np.tanh(x.data)
    _arith(out.size)
    return _make("tanh", out, (x,), lambda g: (g * (1.0 - out * out),))


def log(x) -> Tensor:
    x = _as_tensor(x)
    if np.any(x.data <= 0.0) or not np.all(np.isfinite(x.data)):
        raise DomainError("log expects strictly positive finite input")
    out = np.log(x.data)
    _arith(out.size)
    xd = x.data
    return _make("log", out, (x,), lambda g: (g / xd,))


def maximum(a, b) -> Tensor:
    """Elementwise max; gradient routes to the first operand on ties."""

    a, b = _as_tensor(a), _as_tensor(b)
    _need_shape(a.data.shape == b.data.shape, "maximum",
                f"shapes differ: {a.data.shape} vs {b.data.shape}")
    take_a = a.data >= b.data
    out = np.where(take_a, a.data, b.data)
    _select(out.size)
    return _make("maximum", out, (a, b),
                 lambda g: (np.where(take_a, g, 0.0), np.where(take_a, 0.0, g)))


def sum_all(x) -> Tensor:
    x = _as_tensor(x)
    out = np.asarray(np.sum(x.data))
    _arith(x.data.size)
    shp = x.data.shape
    return _make("sum_all", out, (x,), lambda g: (np.full(shp, float(g)),))


# ---------------------------------------------------------------------------
# indexing ops
# ---------------------------------------------------------------------------


def gather_rows(x, idx) -> Tensor:
    """x[idx] along axis 0; duplicate indices allowed (grads accumulate)."""
    x = _as_tensor(x)
    idx = np.asarray(idx, dtype=np.int64)
    _need_shape(idx.ndim == 1, "gather_rows", f"index must be 1-D, got {idx.shape}")
    if idx.size and (idx.min() < 0 or idx.max() >= x.data.shape[0]):
        raise UsageError("gather_rows: index out of range")
    out = x.data[idx]
    shp = x.data.shape

    def bwd(g):
        dx = np.zeros(shp, dtype=np.float64)
        np.add.at(dx, idx, g)
        return (dx,)

    return _make("gather_rows", out, (x,), bwd)


def take_at(x, i: int) -> Tensor:
    """Single entry of a vector as a (1,) tensor."""
    x = _as_tensor(x)
    _need_shape(x.data.ndim == 1, "take_at", f"need 1-D, got {x.data.shape}")
    i = int(i)
    if not (0 <= i < x.data.shape[0]):
        raise UsageError(f"take_at: index {i} out of range")
    out = x.data[i : i + 1].copy()
    shp = x.data.shape

    def bwd(g):
        dx = np.zeros(shp, dtype=np.float64)
        dx[i] = g[0]
        return (dx,)

    return _make("take_at", out, (x,), bwd)


def scatter_update(base, idx, values) -> Tensor:
    """Copy of `base` (1-D) with base[idx] replaced by `values`; idx must not
    repeat."""
    base, values = _as_tensor(base), _as_tensor(values)
    idx = np.asarray(idx, dtype=np.int64)
    _need_shape(base.data.ndim == 1 and values.data.ndim == 1, "scatter_update",
                f"need vectors, got {base.data.shape} and {values.data.shape}")
    _need_shape(idx.shape == values.data.shape, "scatter_update",
                f"index/value shapes differ: {idx.shape} vs {values.data.shape}")
    if idx.size:
        if idx.min() < 0 or idx.max() >= base.data.shape[0]:
            raise UsageError("scatter_update: index out of range")
        if len(np.unique(idx)) != len(idx):
            raise UsageError("scatter_update: duplicate indices")
    out = base.data.copy()
    out[idx] = values.data

    def bwd(g):
        db = g.copy()
        db[idx] = 0.0
        return db, g[idx].copy()

    return _make("scatter_update", out, (base, values), bwd)


def maxpool_rows(x) -> Tensor:
    """Column-wise max over the rows of an (n, d) matrix; the backward pass
    routes each column's gradient to its argmax row (first row on ties)."""
    x = _as_tensor(x)
    _need_shape(x.data.ndim == 2 and x.data.shape[0] >= 1, "maxpool_rows",
                f"need non-empty (n,d), got {x.data.shape}")
    arg = np.argmax(x.data, axis=0)
    out = x.data[arg, np.arange(x.data.shape[1])]
    _select(x.data.size)
    shp = x.data.shape

    def bwd(g):
        dx = np.zeros(shp, dtype=np.float64)
        dx[arg, np.arange(shp[1])] = g
        return (dx,)

    return _make("maxpool_rows", out, (x,), bwd)


# ---------------------------------------------------------------------------
# softmax and normalization
# ---------------------------------------------------------------------------


def masked_softmax(x, mask) -> Tensor:
    """Softmax over the last axis restricted to mask==True positions.

    Excluded positions get probability exactly 0.0 (they never enter the
    exponential or the normalizer). Every row needs at least one admitted
    entry."""
    x = _as_tensor(x)
    mask = np.asarray(mask, dtype=bool)
    _need_shape(mask.shape == x.data.shape, "masked_softmax",
                f"mask shape {mask.shape} differs from {x.data.shape}")
    if not np.all(mask.any(axis=-1)):
        raise DomainError("masked_softmax: a row excludes every entry")
    rowmax = np.max(np.where(mask, x.data, -np.inf), axis=-1, keepdims=True)
    e = np.exp(np.where(mask, x.data - rowmax, 0.0))
    e *= mask
    denom = e.sum(axis=-1, keepdims=True)
    p = e / denom
    _select(5 * p.size)

    def bwd(g):
        inner = np.sum(g * p, axis=-1, keepdims=True)
        return (p * (g - inner),)

    return _make("masked_softmax", p, (x,), bwd)


def batch_norm(x, gamma, beta, running_mean, running_var, training: bool,
               momentum: float = 0.1, eps: float = 1e-5) -> Tensor:
    """Per-channel normalization of x (n, c) over the row axis.

    Training mode normalizes by batch statistics and folds them into the
    running buffers (plain arrays, mutated in place); eval mode uses the
    buffers as-is. gamma/beta are learnable (c,) tensors.
    """
    x, gamma, beta = _as_tensor(x), _as_tensor(gamma), _as_tensor(beta)
    c = x.data.shape[-1]
    _need_shape(x.data.ndim == 2, "batch_norm", f"need (n,c), got {x.data.shape}")
    _need_shape(gamma.data.shape == (c,) and beta.data.shape == (c,), "batch_norm",
                f"scale/shift must be ({c},), got {gamma.data.shape}/{beta.data.shape}")
    n = x.data.shape[0]
    if training:
        mu = x.data.mean(axis=0)
        var = x.data.var(axis=0)
        running_mean *= 1.0 - momentum
        running_mean += momentum * mu
        unbiased = var * (n / (n - 1)) if n > 1 else var
        running_var *= 1.0 - momentum
        running_var += momentum * unbiased
    else:
        mu = running_mean
        var = running_var
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (x.data - mu) * inv
    out = gamma.data * xhat + beta.data
    _arith(8 * out.size)
    gd = gamma.data

    if training:

        def bwd(g):
            dxhat = g * gd
            dvar = np.sum(dxhat * (x.data - mu), axis=0) * -0.5 * inv**3
            dmu = -np.sum(dxhat, axis=0) * inv + dvar * np.mean(-2.0 * (x.data - mu), axis=0)
            dx = dxhat * inv + dvar * 2.0 * (x.data - mu) / n + dmu / n
            return dx, np.sum(g * xhat, axis=0), np.sum(g, axis=0)

    else:

        def bwd(g):
            return g * gd * inv, np.sum(g * xhat, axis=0), np.sum(g, axis=0)

    return _make("batch_norm", out, (x, gamma, beta), bwd)


# ---------------------------------------------------------------------------
# segment ops (message passing over dst-sorted edge lists)
# ---------------------------------------------------------------------------


def _check_segments(indptr, total, name):
    if indptr[0] != 0 or indptr[-1] != total:
        raise UsageError(f"{name}: segment pointer does not span the values")
    if np.any(np.diff(indptr) < 1):
        raise UsageError(f"{name}: empty segment")


def segment_softmax(values, indptr) -> Tensor:
    """Independent softmax inside each segment of a 1-D tensor.

    Segments are contiguous slices values[indptr[i]:indptr[i+1]], all
    non-empty. The normalizer sums exponentials in ascending value order, so
    the result depends only on each segment's multiset of values (exact
    equivariance under relabeling)."""
    values = _as_tensor(values)
    indptr = np.asarray(indptr, dtype=np.int64)
    _need_shape(values.data.ndim == 1, "segment_softmax", "need 1-D values")
    _check_segments(indptr, values.data.shape[0], "segment_softmax")
    counts = np.diff(indptr)
    seg_id = np.repeat(np.arange(len(counts)), counts)
    m = np.maximum.reduceat(values.data, indptr[:-1])
    e = np.exp(values.data - m[seg_id])
    order = np.lexsort((e, seg_id))
    denom = np.add.reduceat(e[order], indptr[:-1])
    p = e / denom[seg_id]
    _arith(5 * p.size)

    def bwd(g):
        s = np.add.reduceat(p * g, indptr[:-1])
        return (p * (g - s[seg_id]),)

    return _make("segment_softmax", p, (values,), bwd)


def segment_weighted_rowsum(alpha, rows, indptr) -> Tensor:
    """Per-segment sum of alpha[e] * rows[e]: output row i aggregates the
    slice indptr[i]:indptr[i+1]. Terms are added in lexicographic row order
    inside each segment, so sums are invariant to within-segment reordering."""
    alpha, rows = _as_tensor(alpha), _as_tensor(rows)
    indptr = np.asarray(indptr, dtype=np.int64)
    _need_shape(alpha.data.ndim == 1 and rows.data.ndim == 2, "segment_weighted_rowsum",
                f"need (e,) and (e,d), got {alpha.data.shape} and {rows.data.shape}")
    _need_shape(alpha.data.shape[0] == rows.data.shape[0], "segment_weighted_rowsum",
                f"edge counts differ: {alpha.data.shape} vs {rows.data.shape}")
    _check_segments(indptr, alpha.data.shape[0], "segment_weighted_rowsum")
    counts = np.diff(indptr)
    seg_id = np.repeat(np.arange(len(counts)), counts)
    terms = alpha.data[:, None] * rows.data
    keys = [terms[:, j] for j in range(terms.shape[1] - 1, -1, -1)]
    keys.append(seg_id)
    order = np.lexsort(keys)
    out = np.add.reduceat(terms[order], indptr[:-1], axis=0)
    _arith(3 * terms.size)
    ad, rd = alpha.data, rows.data

    def bwd(g):
        gseg = g[seg_id]
        return (gseg * rd).sum(axis=1), ad[:, None] * gseg

    return _make("segment_weighted_rowsum", out, (alpha, rows), bwd)
