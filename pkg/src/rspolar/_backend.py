"""Kernel backend selection.

The compiled `_kernels` extension and the pure-Python `_kernels_py` module
expose the same functions with the same semantics; whichever is available
is picked at import. Set RSPOLAR_BACKEND=python to force the fallback
(e.g. for parity testing or debugging).
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("RSPOLAR_BACKEND", "").lower()

if _forced == "python":
    impl = _kernels_py
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
    except ImportError:
        if _forced in ("compiled", "c", "cython"):
            raise ImportError(
                "RSPOLAR_BACKEND requested the compiled backend but the "
                "rspolar._kernels extension is not built")
        impl = _kernels_py

BACKEND_NAME: str = impl.BACKEND_NAME
HAS_FRAME_KERNELS: bool = hasattr(impl, "frame_decode")
LLR_MAX: float = impl.LLR_MAX


def get_python_backend():
    return _kernels_py


def get_compiled_backend():
    """The compiled backend module, or None if not built."""
    try:
        from . import _kernels
        return _kernels
    except ImportError:
        return None
