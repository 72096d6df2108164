"""Policy parameters: shapes, seeded initialization, checkpoint round-trip.

Checkpoints are JSON with full float64 fidelity (repr round-trip), sorted
keys and fixed layout, so identical parameters always serialize to identical
bytes.
"""

from __future__ import annotations

import json

import numpy as np

from . import autodiff as ad
from .errors import CheckpointError, ParameterError
from .graphs import _rng

FORMAT_VERSION = 1
NUM_LAYERS = 3
NUM_HEADS = 4
DECODE_MODES = ("local", "static", "global")

HYPER_FIELDS = {
    "d": int,
    "d_in": int,
    "context_size": int,
    "clip": float,
    "decode_mode": str,
    "subtract_mean": bool,
}

HYPER_DEFAULTS = {
    "d": 64,
    "d_in": 32,
    "context_size": 1,
    "clip": 10.0,
    "decode_mode": "local",
    "subtract_mean": False,
}


class ModelParameters:
    """Named float64 tensors plus the hyperparameters fixing their shapes.

    Batch-norm running statistics live here too: they are part of the model
    state (saved, restored) but are buffers, not trainable tensors.
    """

    def __init__(self, hyper: dict, tensors: dict):
        self.hyper = dict(hyper)
        self.tensors = tensors

    # -- structured access ---------------------------------------------------

    @property
    def d(self) -> int:
        return self.hyper["d"]

    @property
    def d_in(self) -> int:
        return self.hyper["d_in"]

    @property
    def context_size(self) -> int:
        return self.hyper["context_size"]

    @property
    def clip(self) -> float:
        return self.hyper["clip"]

    @property
    def decode_mode(self) -> str:
        return self.hyper["decode_mode"]

    @property
    def subtract_mean(self) -> bool:
        return self.hyper["subtract_mean"]

    def trainable_names(self) -> list:
        return [k for k in self.tensors if "running" not in k]

    def copy(self) -> "ModelParameters":
        return ModelParameters(self.hyper, {k: v.copy() for k, v in self.tensors.items()})


def expected_shapes(hyper: dict) -> dict:
    d = hyper["d"]
    d_in = hyper["d_in"]
    ctx = hyper["context_size"]
    dh = d // NUM_HEADS
    shapes = {
        "input.weight": (d_in, d),
        "input.bias": (d,),
    }
    for l in range(NUM_LAYERS):
        for h in range(NUM_HEADS):
            shapes[f"gat{l}.h{h}.weight"] = (d, dh)
            shapes[f"gat{l}.h{h}.attn"] = (2 * dh,)
        shapes[f"gat{l}.norm.scale"] = (d,)
        shapes[f"gat{l}.norm.shift"] = (d,)
        shapes[f"gat{l}.norm.running_mean"] = (d,)
        shapes[f"gat{l}.norm.running_var"] = (d,)
    shapes["decoder.theta1"] = (d, (2 * ctx + 1) * d)
    shapes["decoder.theta2"] = (d, d)
    shapes["decoder.h0"] = (2 * ctx * d,)
    return shapes


def _check_hyper(hyper: dict) -> dict:
    out = {}
    for name, typ in HYPER_FIELDS.items():
        if name not in hyper:
            raise ParameterError(f"hyperparameter {name!r} missing")
        out[name] = typ(hyper[name])
    extra = set(hyper) - set(HYPER_FIELDS)
    if extra:
        raise ParameterError(f"unknown hyperparameters {sorted(extra)}")
    if out["d"] < NUM_HEADS or out["d"] % NUM_HEADS != 0:
        raise ParameterError(f"d must be a positive multiple of {NUM_HEADS}, got {out['d']}")
    if out["d_in"] < 2 or out["d_in"] % 2 != 0:
        raise ParameterError(f"d_in must be even and >= 2, got {out['d_in']}")
    if out["context_size"] < 1:
        raise ParameterError(f"context_size must be >= 1, got {out['context_size']}")
    if out["decode_mode"] not in DECODE_MODES:
        raise ParameterError(f"decode_mode must be one of {DECODE_MODES}")
    return out


def init_parameters(seed: int = 0, **hyper) -> ModelParameters:
    """Fresh parameters, each weight uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)]
    (fan_in = input width; a vector's own length for the attention vectors and
    the learned initial context). Norm scale starts at 1, shift at 0, running
    stats at (0, 1). Deterministic in seed."""
    merged = dict(HYPER_DEFAULTS)
    merged.update(hyper)
    merged = _check_hyper(merged)
    shapes = expected_shapes(merged)
    rng = _rng(seed)
    d = merged["d"]
    d_in = merged["d_in"]
    ctx = merged["context_size"]
    fan_in = {
        "input.weight": d_in,
        "input.bias": d_in,
        "decoder.theta1": (2 * ctx + 1) * d,
        "decoder.theta2": d,
        "decoder.h0": 2 * ctx * d,
    }
    tensors = {}
    for name, shape in shapes.items():
        if name.endswith("norm.scale") or name.endswith("running_var"):
            tensors[name] = np.ones(shape, dtype=np.float64)
        elif name.endswith("norm.shift") or name.endswith("running_mean"):
            tensors[name] = np.zeros(shape, dtype=np.float64)
        else:
            if name in fan_in:
                fi = fan_in[name]
            elif name.endswith(".weight"):
                fi = d
            else:  # attention vectors
                fi = shape[0]
            bound = 1.0 / np.sqrt(fi)
            tensors[name] = rng.uniform(-bound, bound, size=shape)
    return ModelParameters(merged, tensors)


class ParameterView:
    """ModelParameters exposed as autodiff tensors.

    With a tape, each trainable tensor becomes a leaf (so gradients flow back
    to it); without one they are constants. Running statistics stay plain
    arrays in `buffers` and are mutated in place by train-mode normalization.
    """

    def __init__(self, params: ModelParameters, tape: "ad.Tape | None" = None):
        self.params = params
        self.hyper = params.hyper
        self.tensor = {}
        self.buffers = {}
        for name, arr in params.tensors.items():
            if "running" in name:
                self.buffers[name] = arr
            elif tape is not None:
                self.tensor[name] = tape.leaf(arr)
            else:
                self.tensor[name] = ad.Tensor(arr)

    def __getattr__(self, name):
        return getattr(self.params, name)


def view_of(params, tape=None) -> ParameterView:
    if isinstance(params, ParameterView):
        return params
    return ParameterView(params, tape)


# ---------------------------------------------------------------------------
# checkpoint io
# ---------------------------------------------------------------------------


def checkpoint_bytes(params: ModelParameters) -> bytes:
    payload = {
        "format_version": FORMAT_VERSION,
        "hyper": params.hyper,
        "tensors": {
            name: {"shape": list(t.shape), "data": [float(x) for x in t.ravel()]}
            for name, t in params.tensors.items()
        },
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("ascii")


def save_checkpoint(params: ModelParameters, path) -> None:
    with open(path, "wb") as fh:
        fh.write(checkpoint_bytes(params))


def parse_checkpoint(raw: bytes) -> ModelParameters:
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise CheckpointError("checkpoint root must be an object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"checkpoint format_version {version!r} unsupported (want {FORMAT_VERSION})"
        )
    try:
        hyper = _check_hyper(payload["hyper"])
    except KeyError:
        raise CheckpointError("checkpoint missing hyper section") from None
    except ParameterError as exc:
        raise CheckpointError(f"bad hyper section: {exc}") from None
    shapes = expected_shapes(hyper)
    raw_tensors = payload.get("tensors")
    if not isinstance(raw_tensors, dict):
        raise CheckpointError("checkpoint missing tensors section")
    missing = sorted(set(shapes) - set(raw_tensors))
    if missing:
        raise CheckpointError(f"checkpoint missing tensors: {missing}")
    extra = sorted(set(raw_tensors) - set(shapes))
    if extra:
        raise CheckpointError(f"checkpoint has unexpected tensors: {extra}")
    tensors = {}
    for name, want in shapes.items():
        entry = raw_tensors[name]
        got = tuple(entry.get("shape", ()))
        if got != want:
            raise CheckpointError(f"tensor {name!r} has shape {got}, want {want}")
        data = entry.get("data")
        size = int(np.prod(want)) if want else 1
        if not isinstance(data, list) or len(data) != size:
            raise CheckpointError(f"tensor {name!r} has wrong element count")
        try:
            arr = np.asarray([float(x) for x in data], dtype=np.float64).reshape(want)
        except (TypeError, ValueError):
            raise CheckpointError(f"tensor {name!r} has non-numeric entries") from None
        tensors[name] = arr
    # keep the canonical name order so save(load(x)) == x byte for byte
    return ModelParameters(hyper, {name: tensors[name] for name in shapes})


def load_checkpoint(path) -> ModelParameters:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    return parse_checkpoint(raw)
