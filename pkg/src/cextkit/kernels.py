"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``CEXTKIT_PURE=1`` to
force the pure-Python fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("CEXTKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

closure = _impl.closure
associativity_witness = _impl.associativity_witness
hom_witness = _impl.hom_witness

# Process-wide ceiling on enumeration candidates; None means "use the
# caller's budget".  The command line sets this from --cap.
GLOBAL_CAP = None


def set_global_cap(cap):
    global GLOBAL_CAP
    GLOBAL_CAP = None if cap is None else int(cap)


def enumerate_constrained(sizes, maps, constraints, cap):
    if GLOBAL_CAP is not None:
        cap = min(int(cap), GLOBAL_CAP)
    return _impl.enumerate_constrained(sizes, maps, constraints, cap)


__all__ = [
    "BACKEND",
    "closure",
    "associativity_witness",
    "hom_witness",
    "enumerate_constrained",
    "set_global_cap",
]
