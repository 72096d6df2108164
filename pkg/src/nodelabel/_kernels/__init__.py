"""Kernel backend selection.

The compiled extension is preferred when importable; set NODELABEL_PURE_PYTHON
to any non-empty value to force the pure-Python fallback. Both backends expose
the same functions with bit-identical results.
"""

import os

from . import pykernels

if os.environ.get("NODELABEL_PURE_PYTHON"):
    _impl = pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = pykernels

BACKEND = _impl.BACKEND_KIND

color_rollout = _impl.color_rollout
cover_rollout = _impl.cover_rollout
mis_rollout = _impl.mis_rollout
best_ordering_gc = _impl.best_ordering_gc
best_ordering_mvc = _impl.best_ordering_mvc
best_ordering_mis = _impl.best_ordering_mis


def get_backend(name: str):
    """Return a specific backend module ("python" or "compiled") for
    side-by-side comparison; raises ImportError if unavailable."""
    if name == "python":
        return pykernels
    if name == "compiled":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
