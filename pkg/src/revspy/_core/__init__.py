"""Solver kernel selection: compiled extension when available, NumPy otherwise.

Set REVSPY_PURE=1 to force the NumPy fallback (used by the benchmark to
compare backends).  Both backends implement the same wave-synchronized
attractor and return identical losing sets and ranks.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("REVSPY_PURE"):
    attractor = pure.attractor
    BACKEND = "pure"
else:
    try:
        from ._attractor import attractor  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        attractor = pure.attractor
        BACKEND = "pure"

__all__ = ["attractor", "BACKEND", "pure"]
