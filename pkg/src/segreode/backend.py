"""Kernel selection: compiled extension when available, else pure Python.

Set ``SEGREODE_BACKEND=python`` or ``SEGREODE_BACKEND=c`` to force a
choice (the latter raises if the extension was not built).  Both
kernels implement the same contract and produce identical dicts.
"""

import os

from . import _kernel_py

_choice = os.environ.get("SEGREODE_BACKEND", "").strip().lower()

if _choice == "python":
    _impl = _kernel_py
elif _choice == "c":
    from . import _kernel_c as _impl  # noqa: F401  (ImportError is the contract)
else:
    try:
        from . import _kernel_c as _impl
    except ImportError:
        _impl = _kernel_py

mul1 = _impl.mul1
mul3 = _impl.mul3
BACKEND_NAME = _impl.BACKEND_NAME


def get_kernels():
    """All importable kernels, name -> module (for benchmarks/tests)."""
    kernels = {"python": _kernel_py}
    try:
        from . import _kernel_c

        kernels["c"] = _kernel_c
    except ImportError:
        pass
    return kernels
