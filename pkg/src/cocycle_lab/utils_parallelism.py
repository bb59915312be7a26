# MIT License

# Copyright (c) 2024 The cocycle_lab Authors

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import multiprocessing as mp
import os
from typing import Callable, Iterable, TypeVar

from tqdm import tqdm

from cocycle_lab.logging.hierarchical_logger import hlog


T = TypeVar("T")
R = TypeVar("R")


def available_workers() -> int:
    """Number of cores the process may use, at least 1."""
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], num_workers: int = 1, desc: str | None = None) -> list[R]:
    """
    Applies `fn` to every item and returns the results in item order.

    With a single worker this is a plain loop. Otherwise the items are dispatched to a process pool with `imap`,
    which yields results in submission order, so any reduction done by the caller over the returned list is
    independent of the number of workers.

    Args:
        fn (Callable): must be picklable when `num_workers > 1` (a module level function or a callable instance).
        items (Iterable): work items.
        num_workers (int): number of processes.
        desc (str, optional): progress bar label.

    Returns:
        list: `[fn(item) for item in items]`
    """
    items = list(items)
    if num_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    processes = min(num_workers, len(items))
    hlog(f"Dispatching {len(items)} items to {processes} workers.")
    with mp.Pool(processes) as pool:
        results = list(tqdm(pool.imap(fn, items), total=len(items), desc=desc, disable=desc is None))
    return results
