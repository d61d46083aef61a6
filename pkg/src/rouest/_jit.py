"""JIT shim: numba-compiled kernels with a pure-Python/numpy fallback.

Set the environment variable ``ROUEST_NO_NUMBA=1`` to disable compilation
and run every kernel through the plain interpreter instead (useful for
debugging and as a dependency-light fallback).  Kernels are written so that
both paths execute the identical arithmetic; ``benchmarks/bench_kernels.py``
compares their speed.
"""

import os

JIT_ENABLED = os.environ.get("ROUEST_NO_NUMBA", "0") != "1"

if JIT_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if not JIT_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
