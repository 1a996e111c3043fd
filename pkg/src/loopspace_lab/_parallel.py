"""Sweep parallelism capped by the LOOPSPACE_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def max_workers(default: int = 4) -> int:
    raw = os.environ.get("LOOPSPACE_THREADS")
    if raw is None:
        return max(1, min(default, os.cpu_count() or 1))
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Ordered map over independent work items; serial when capped to 1."""
    workers = max_workers()
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
