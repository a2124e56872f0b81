"""Deterministic parallel map over realization indices.

Work units are realization indices; each unit derives its own random
stream, so results depend only on the index, never on which worker ran
it.  Static block assignment keeps the partitioning reproducible and the
merge is an index-ordered fold.
"""

from __future__ import annotations

import math
import multiprocessing


def map_indices(fn, args_list, workers: int = 1):
    """Apply ``fn`` to each element, preserving order.

    ``fn`` and the arguments must be picklable when ``workers > 1``.
    """
    args_list = list(args_list)
    if workers <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    chunk = math.ceil(len(args_list) / workers)
    with multiprocessing.Pool(processes=workers) as pool:
        return pool.map(fn, args_list, chunksize=chunk)
