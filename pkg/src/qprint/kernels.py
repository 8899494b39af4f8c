"""Kernel backend selection and deterministic row-partitioned execution.

The compiled extension is used when it imports; otherwise the numpy twin.
Set ``QPRINT_PURE_PYTHON=1`` to force the fallback.  Row blocks write
disjoint slices of the output and read a shared immutable input, so the
result does not depend on how many workers run them.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from . import _pykernels

if os.environ.get("QPRINT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
_pools: dict[int, ThreadPoolExecutor] = {}


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("QPRINT_THREADS", "1") or 1)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def _blocks(n: int, workers: int):
    workers = max(1, min(workers, n))
    edges = [n * k // workers for k in range(workers + 1)]
    return list(zip(edges[:-1], edges[1:]))


def run_rows(fn, n_rows: int, threads: int, *args, impl=None):
    """Call ``fn(*args, i0, i1)`` over row blocks; returns per-block results."""
    blocks = _blocks(n_rows, threads)
    if len(blocks) == 1:
        return [fn(*args, 0, n_rows)]
    pool = _pools.get(len(blocks))
    if pool is None:
        pool = _pools[len(blocks)] = ThreadPoolExecutor(len(blocks))
    futs = [pool.submit(fn, *args, i0, i1) for i0, i1 in blocks]
    return [f.result() for f in futs]


def get_backend(name: str | None = None):
    """Kernel module by name ('cython' or 'numpy'); default is the active one."""
    if name is None:
        return _impl
    if name == "numpy":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
