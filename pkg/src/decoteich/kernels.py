"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module.  Setting ``DECOTEICH_BACKEND=python``
forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("DECOTEICH_BACKEND", "").lower() == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

OK = _kernels_py.OK
COMMON_RAY = _kernels_py.COMMON_RAY
DEGENERATE_WITNESS = _kernels_py.DEGENERATE_WITNESS

extend_one = _impl.extend_one
extend_batch = _impl.extend_batch
lambda_batch = _impl.lambda_batch
lambda_one = _impl.lambda_one
spinor = _impl.spinor


def backends():
    """Available implementations by name (the fallback is always present)."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
