"""Kernel selection: compiled speedups when built, pure Python otherwise.

Set BSMG_PURE_PYTHON=1 to force the pure path (used by the parity tests and
the benchmark).
"""

import os

if os.environ.get("BSMG_PURE_PYTHON"):
    from .reference import component_labels, perm_closure

    IMPLEMENTATION = "pure"
else:
    try:
        from ._speedups import component_labels, perm_closure

        IMPLEMENTATION = "compiled"
    except ImportError:
        from .reference import component_labels, perm_closure

        IMPLEMENTATION = "pure"

__all__ = ["component_labels", "perm_closure", "IMPLEMENTATION"]
