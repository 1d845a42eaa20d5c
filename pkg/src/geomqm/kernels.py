"""Backend selection for the projected-gradient kernels.

The compiled extension is used when it imports; setting ``GEOMQM_PURE_PYTHON=1``
forces the NumPy fallback.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("GEOMQM_PURE_PYTHON", "").strip() not in ("", "0") or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def get_backend(name=None):
    """Kernel module by name; ``None`` gives the active backend."""
    name = BACKEND if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None
