"""Non-dominated sorting backend selection.

The compiled extension is used when available; setting the environment
variable ``DYNMOO_PURE_PYTHON=1`` before import forces the numpy fallback
(useful for debugging and for the backend benchmark). Both backends return
identical rank arrays.
"""

import os

if os.environ.get("DYNMOO_PURE_PYTHON"):
    from ._nds_py import nds_ranks

    BACKEND = "python"
else:
    try:
        from ._nds import nds_ranks

        BACKEND = "compiled"
    except ImportError:
        from ._nds_py import nds_ranks

        BACKEND = "python"

__all__ = ["nds_ranks", "BACKEND"]
