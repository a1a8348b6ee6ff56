"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
NumPy fallback ``_kernels_py``.  Setting ``DJDQC1_PURE_PYTHON=1`` forces
the fallback.
"""

import os

if os.environ.get("DJDQC1_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import eigvalsh, measured_entropy, measured_entropy_grid, product_rotate

    BACKEND = "python"
else:
    try:
        from ._kernels import eigvalsh, measured_entropy, measured_entropy_grid, product_rotate

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import eigvalsh, measured_entropy, measured_entropy_grid, product_rotate

        BACKEND = "python"

__all__ = ["BACKEND", "eigvalsh", "measured_entropy", "measured_entropy_grid", "product_rotate"]
