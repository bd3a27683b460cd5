"""JIT plumbing for the hot numeric kernels.

All kernels in ``_kernels`` are written as plain scalar Python that numba
can compile.  By default they run under ``@njit``; setting the environment
variable ``KERNELSCOPE_NUMBA=0`` (read once, at import time) selects the
pure-Python/NumPy fallback path, which executes the identical source
uncompiled.  ``benchmarks/bench_scan.py`` compares the two paths.
"""

from __future__ import annotations

import os


def _resolve_flag() -> bool:
    raw = os.environ.get("KERNELSCOPE_NUMBA", "1").strip().lower()
    if raw in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _resolve_flag()

if NUMBA_ENABLED:
    from numba import njit as _njit

    def maybe_njit(func):
        # nogil lets the scanner's row chunks run on real threads
        return _njit(cache=True, nogil=True)(func)

else:

    def maybe_njit(func):
        return func
