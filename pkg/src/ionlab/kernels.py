"""Backend selection for the Numerov integration kernels.

The compiled extension is preferred; the pure-Python module is a drop-in
replacement selected automatically when the extension is missing, or
explicitly via the environment variable ``IONLAB_PURE_PYTHON=1``.
``BACKEND`` records which implementation is active.
"""

import os

if os.environ.get("IONLAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

numerov_count_nodes = _impl.numerov_count_nodes
numerov_outward = _impl.numerov_outward
numerov_inward = _impl.numerov_inward
