from concurrent.futures import ProcessPoolExecutor

from superjets import config


def parallel_map(fn, items, workers=None):
    """Map ``fn`` over ``items`` keeping input order.

    ``fn`` must be picklable (a module-level function or a partial of one)
    when more than one worker is used.
    """
    items = list(items)
    workers = config.WORKERS if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
