"""Pick the compiled kernels when available; ``GPAIRS_BACKEND=python`` forces the fallback."""

import os

from . import _pykernels

pykernels = _pykernels

if os.environ.get("GPAIRS_BACKEND", "").lower() == "python":
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = kernels.BACKEND
