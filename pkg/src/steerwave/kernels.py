"""Backend selection for the hot Legendre kernels.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``SWT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("SWT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py


def legendre_table(d, lmax, x):
    return _impl.legendre_table(int(d), int(lmax), x)


def legendre_sum(d, weights, x):
    return _impl.legendre_sum(int(d), weights, x)
