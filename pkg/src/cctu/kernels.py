"""Kernel dispatch: compiled `_speedups` when importable, pure Python otherwise.

Set CCTU_PURE_PYTHON=1 to force the pure backend (used by the benchmark and
by tests that cross-check the two implementations).  The compiled kernels are
exact on their guarded domain; `_i64_safe` routes anything that could leave
64-bit range to the pure code, so results never depend on the backend.
"""

import os

from . import _kernels_py as _py

if os.environ.get("CCTU_PURE_PYTHON"):
    _impl = _py
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _py

BACKEND = _impl.BACKEND


def _i64_safe(values, bound=1 << 31):
    return all(-bound < v < bound for v in values)


def det_bareiss(flat, n):
    # Bareiss intermediates are n*n minors: Hadamard gives |minor| <= (n * A^2)^(n/2).
    if _impl is not _py:
        amax = max((abs(v) for v in flat), default=0)
        if n <= 13 and (n * amax * amax) ** (n // 2 + 1) < (1 << 62):
            return _impl.det_bareiss(flat, n)
    return _py.det_bareiss(flat, n)


def find_non_unit_subdet(flat, k, n, max_order=None):
    if _impl is not _py and _i64_safe(flat, 2) and min(k, n) <= 13:
        return _impl.find_non_unit_subdet(flat, k, n, max_order)
    return _py.find_non_unit_subdet(flat, k, n, max_order)


def ghouila_houri_ok(flat, k, n):
    if _impl is not _py:
        return _impl.ghouila_houri_ok(flat, k, n)
    return _py.ghouila_houri_ok(flat, k, n)


def box_search(tflat, k, n, b, gamma, m, rmask, lo, hi, c, minimize):
    if _impl is not _py:
        cvals = [] if c is None else list(c)
        if (
            _i64_safe(tflat, 1 << 20)
            and _i64_safe(b, 1 << 40)
            and _i64_safe(gamma, 1 << 20)
            and _i64_safe(list(lo) + list(hi), 1 << 20)
            and _i64_safe(cvals, 1 << 20)
            and n <= 24
            and m <= (1 << 16)
        ):
            return _impl.box_search(tflat, k, n, b, gamma, m, rmask, lo, hi, c, minimize)
    return _py.box_search(tflat, k, n, b, gamma, m, rmask, lo, hi, c, minimize)
