import os
from concurrent.futures import ThreadPoolExecutor

WORKERS_ENV = "QPLASMA_WORKERS"


def max_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def pmap(fn, items):
    """Ordered map over ``items``; fan-out width capped by $QPLASMA_WORKERS."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
