"""Fixed sinusoidal node features derived from degrees.

Each node's row interleaves sin and cos of its (optionally centered) degree
at geometrically spaced wavelengths, so equal-degree nodes share a row and
every entry stays in [-1, 1].
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .graphs import Graph

WAVELENGTH_BASE = 10000.0


def degree_features(g: Graph, d_in: int = 32, subtract_mean: bool = False) -> np.ndarray:
    """(n, d_in) float64 feature matrix.

    Column pair i holds sin(x / w_i), cos(x / w_i) with w_i = 10000^(2i/d_in)
    and x the node degree, centered on the mean degree when subtract_mean is
    set (useful when a family's degrees concentrate far from zero).
    """
    if d_in < 2 or d_in % 2 != 0:
        raise ParameterError(f"d_in must be a positive even number, got {d_in}")
    deg = g.degrees.astype(np.float64)
    if subtract_mean:
        # exact integer sum; keeps the shift reproducible across node orders
        deg = deg - (int(g.degrees.sum()) / g.n)
    half = d_in // 2
    wavelengths = WAVELENGTH_BASE ** (2.0 * np.arange(half) / d_in)
    phase = deg[:, None] / wavelengths[None, :]
    out = np.empty((g.n, d_in), dtype=np.float64)
    out[:, 0::2] = np.sin(phase)
    out[:, 1::2] = np.cos(phase)
    return out
