"""Select the compiled kernels when available, else the pure-Python twins.

Set ``KOOPSPEC_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("KOOPSPEC_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as impl
else:
    try:
        from . import _ckernels as impl
    except ImportError:  # extension not built
        from . import _pykernels as impl

BACKEND = impl.BACKEND
