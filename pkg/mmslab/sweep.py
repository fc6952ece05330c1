"""Ordered fan-out of independent sweep tasks

Functions:
    sweep_map(func, items, workers): map func over items, optionally across processes
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable


def sweep_map(func: Callable[[Any], Any], items: Iterable[Any], workers: int = 1) -> list[Any]:
    """Results of func over items, in input order

    With more than one worker the tasks run in a process pool;
    func must then be picklable (a module level function or a partial of one).
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return list(map(func, items))

    # Sweeps are processor-intensive
    # So multi-processing is used to speed things up
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(func, items))
