"""Backend selection for the hot kernels.

The compiled extension is used when it imported successfully; otherwise the
pure-Python twin takes over. Set SMH_PURE_PYTHON=1 to force the fallback.
Both backends are required to produce bit-identical results.
"""

from __future__ import annotations

import os

if os.environ.get("SMH_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND_NAME = _impl.BACKEND_NAME

eliminate = _impl.eliminate
elimination_bags = _impl.elimination_bags
dijkstra_multi = _impl.dijkstra_multi
canon_labels = _impl.canon_labels
dp_leaf = _impl.dp_leaf
dp_introduce_vertex = _impl.dp_introduce_vertex
dp_introduce_edge = _impl.dp_introduce_edge
dp_forget = _impl.dp_forget
dp_join = _impl.dp_join


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _kernels_cy  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names


def load_backend(name: str):
    """Explicitly load one backend module (used by tests and benchmarks)."""
    if name == "python":
        from . import _kernels_py

        return _kernels_py
    if name == "cython":
        from . import _kernels_cy  # type: ignore[attr-defined]

        return _kernels_cy
    raise ValueError(f"unknown kernel backend: {name!r}")
