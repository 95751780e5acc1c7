"""Gibbs kernel backend selection.

Prefers the compiled extension and falls back to the pure-Python twin
when it is missing.  Set ``DOCSTRUCT_PURE=1`` to force the fallback
(useful for the backend-equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("DOCSTRUCT_PURE") == "1":
    from . import _gibbs_py as _impl
else:
    try:
        from . import _gibbs as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _gibbs_py as _impl

BACKEND_NAME: str = _impl.BACKEND_NAME
gibbs_train_sweep = _impl.gibbs_train_sweep
gibbs_infer_sweep = _impl.gibbs_infer_sweep
