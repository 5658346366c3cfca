import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("FRACPQ_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """Map ``fn`` over ``items`` keeping input order; threaded if FRACPQ_THREADS > 1."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
