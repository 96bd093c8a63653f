from concurrent.futures import ProcessPoolExecutor


def pmap(fn, items, workers=1):
    """Order-preserving map; uses a process pool when ``workers > 1``.

    ``fn`` must be picklable (module-level) for the pooled path.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
