"""Select the compiled reduction kernel when available.

Set ``JETSPACE_PURE=1`` to force the pure-Python fallback.
"""

import os

if os.environ.get("JETSPACE_PURE", "") not in ("", "0"):
    from ._kernel_py import IMPLEMENTATION, axpy, normal_form, primitive
else:
    try:
        from ._kernel_c import IMPLEMENTATION, axpy, normal_form, primitive
    except ImportError:
        from ._kernel_py import IMPLEMENTATION, axpy, normal_form, primitive

__all__ = ["IMPLEMENTATION", "axpy", "normal_form", "primitive"]
