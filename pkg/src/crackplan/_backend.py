"""Select the matching kernel at import time.

The compiled extension is used when it was built; setting
``CRACKPLAN_PURE_PYTHON=1`` forces the pure-Python kernel.
"""

import os

if os.environ.get("CRACKPLAN_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernel_py as kernel
    BACKEND = "python"
else:
    try:
        from . import _kernel as kernel
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernel_py as kernel
        BACKEND = "python"

build_program = kernel.build_program
match_mask = kernel.match_mask
signature_counts = kernel.signature_counts

__all__ = ["BACKEND", "kernel", "build_program", "match_mask", "signature_counts"]
