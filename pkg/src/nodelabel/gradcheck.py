"""Finite-difference verification of tape gradients.

gradient_check rebuilds the function under test from scratch for every
probe, so the callable must be pure: same arrays in, same scalar out.
"""

from __future__ import annotations

import numpy as np

from .autodiff import Tape, backward
from .errors import UsageError


def _evaluate(f, arrays) -> float:
    tape = Tape()
    leaves = [tape.leaf(a) for a in arrays]
    out = f(leaves)
    if out.data.shape != ():
        raise UsageError(f"gradient_check needs a scalar output, got shape {out.data.shape}")
    return float(out.data)


def gradient_check(f, arrays, step: float = 1e-5, max_coords: int = 64,
                   rng=None, zero_floor: float = 1e-5) -> float:
    """Compare tape gradients of f against central differences.

    f maps a list of leaf tensors (one per input array) to a scalar tensor.
    At most max_coords coordinates per array are probed (all of them when the
    array is small; a seeded random subset otherwise). Returns the worst
    relative error |a - n| / max(|a|, |n|, zero_floor) over all probes.

    zero_floor keeps coordinates whose true gradient is zero from being
    scored against pure rounding noise: a central difference of a loss of
    magnitude F carries noise around ulp(F)/(2 step), about 2e-10 for F near
    10 at the default step, so both sides of such a comparison are garbage.
    Any floor comfortably above that noise and below real gradient scales
    works; shrink it when hunting for tiny systematic errors.
    """
    arrays = [np.asarray(a, dtype=np.float64).copy() for a in arrays]
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(0))

    tape = Tape()
    leaves = [tape.leaf(a) for a in arrays]
    out = f(leaves)
    if out.data.shape != ():
        raise UsageError(f"gradient_check needs a scalar output, got shape {out.data.shape}")
    grads = backward(tape, out)

    worst = 0.0
    for i, arr in enumerate(arrays):
        g = grads.get(leaves[i].node)
        if g is None:
            g = np.zeros_like(arr)
        size = arr.size
        if size <= max_coords:
            coords = np.arange(size)
        else:
            coords = rng.choice(size, size=max_coords, replace=False)
        flat = arr.reshape(-1)
        gflat = np.asarray(g, dtype=np.float64).reshape(-1)
        for c in coords:
            c = int(c)
            orig = flat[c]
            flat[c] = orig + step
            up = _evaluate(f, arrays)
            flat[c] = orig - step
            down = _evaluate(f, arrays)
            flat[c] = orig
            numeric = (up - down) / (2.0 * step)
            analytic = float(gflat[c])
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), zero_floor)
            worst = max(worst, rel)
    return worst
