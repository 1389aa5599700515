"""Hot-kernel backend selection.

The package ships two interchangeable kernel sets: numba @njit loops
(numba_impl) and vectorized pure numpy (numpy_impl).  Selection happens once
at import via the TOLIFT_BACKEND environment variable:

    TOLIFT_BACKEND=numba   require the JIT backend (raise if numba missing)
    TOLIFT_BACKEND=numpy   force the pure-numpy fallback
    unset / auto           numba when importable, numpy otherwise

`get_backend(name)` returns either implementation module regardless of the
active choice, for benchmarks and cross-backend tests.
"""

import os

import numpy as np

_KERNEL_NAMES = (
    "eval_program_points",
    "find_identity_violation",
    "compat_violation",
    "close_under_ops",
    "complex_op_table",
)


def _load(name: str):
    if name == "numpy":
        from . import numpy_impl
        return numpy_impl
    if name == "numba":
        from . import numba_impl
        return numba_impl
    raise ValueError(f"unknown backend {name!r}")


def get_backend(name: str):
    """Return the kernel module for `name` ("numpy" or "numba")."""
    return _load(name)


_choice = os.environ.get("TOLIFT_BACKEND", "auto").strip().lower() or "auto"
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"TOLIFT_BACKEND={_choice!r} not understood; use auto, numba, or numpy")

if _choice == "numpy":
    _impl = _load("numpy")
elif _choice == "numba":
    _impl = _load("numba")
else:
    try:
        _impl = _load("numba")
    except ImportError:
        _impl = _load("numpy")

ACTIVE_BACKEND: str = _impl.BACKEND_NAME

eval_program_points = _impl.eval_program_points
find_identity_violation = _impl.find_identity_violation
compat_violation = _impl.compat_violation
close_under_ops = _impl.close_under_ops
complex_op_table = _impl.complex_op_table


def active_backend() -> str:
    return ACTIVE_BACKEND


def warm_up() -> None:
    """Run every kernel once on a tiny input to absorb JIT compilation."""
    table = np.array([0, 0, 0, 1], dtype=np.int64)  # 2-element meet
    off = np.array([0], dtype=np.int64)
    arities = np.array([2], dtype=np.int64)
    code = np.array([-1, -2, 0], dtype=np.int64)
    ptr = np.array([0, 0, 0, 2], dtype=np.int64)
    child = np.array([0, 1], dtype=np.int64)
    var_vals = np.array([[0, 1], [1, 1]], dtype=np.int64)
    eval_program_points(code, ptr, child, table, off, 2, var_vals)
    find_identity_violation(code, ptr, child, code, ptr, child, table, off, 2, 2, 0, 4)
    pairs = np.array([0, 1], dtype=np.int64)
    rel = np.ones((2, 2), dtype=np.uint8)
    compat_violation(table, 2, 2, pairs, pairs, rel)
    close_under_ops(table, off, arities, 2, np.eye(2, dtype=np.uint8))
    complex_op_table(table, 2, 2)
