"""Import-time selection of the recurrence kernel backend.

Prefers the compiled Cython module; falls back to the pure-Python twin when
the extension is absent or SPECRANGE_PURE_PYTHON=1 is set.
"""

from __future__ import annotations

import os

from .config import PURE_PYTHON_ENV

if os.environ.get(PURE_PYTHON_ENV) == "1":
    from . import _recurrence_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _recurrence as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _recurrence_py as _impl
        BACKEND = "python"

three_term_scan = _impl.three_term_scan


def kernel_backend() -> str:
    """'compiled' or 'python', whichever three_term_scan dispatches to."""
    return BACKEND
