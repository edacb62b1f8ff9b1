"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin is used when the
extension is unavailable or when ISOFREE_PURE_PYTHON is set (useful for
benchmarks and for testing backend equivalence).
"""

import os

if os.environ.get("ISOFREE_PURE_PYTHON"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = _impl.BACKEND

reduce_letters = _impl.reduce_letters
invert_letters = _impl.invert_letters
concat_reduced = _impl.concat_reduced
conjugate_reduced = _impl.conjugate_reduced
substitute_reduced = _impl.substitute_reduced
exp_vector = _impl.exp_vector
cyclic_bounds = _impl.cyclic_bounds
