"""Kernel backend selection.

The compiled extension is used when it imports; set ``LTPHI_PURE_PYTHON=1`` to
force the reference implementation.
"""

import os

from . import _kernels_py

BIG = _kernels_py.BIG

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("LTPHI_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

conv_trunc = _impl.conv_trunc
minplus_trunc = _impl.minplus_trunc
