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

import functools
import logging
import sys
import threading
import time
from datetime import timedelta
from typing import Any, Callable, Optional

from colorama import Fore, Style


logger = logging.getLogger("cocycle_lab")
if not logger.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)
    logger.propagate = False


class HierarchicalLogger:
    """
    Indents every message by the number of open blocks and times each block. Use it through [`hlog`] and its
    colored variants, [`htrack_block`] and [`htrack`].

    The stack of open blocks is shared by all threads of the process and guarded by a lock.
    """

    def __init__(self, step: str = "  ") -> None:
        self.step = step
        self.open_blocks: list[float] = []
        self._lock = threading.Lock()

    def _emit(self, text: str, level: int) -> None:
        logger.log(level, self.step * len(self.open_blocks) + text)

    def open(self, title: Any) -> None:
        with self._lock:
            self._emit(f"{title} {{", logging.INFO)
            self.open_blocks.append(time.perf_counter())

    def close(self) -> None:
        with self._lock:
            elapsed = timedelta(seconds=time.perf_counter() - self.open_blocks.pop())
            self._emit(f"}} [{elapsed}]", logging.INFO)

    def log(self, x: Any, level: int = logging.INFO, color: Optional[str] = None) -> None:
        text = str(x) if color is None else f"{color}{x}{Style.RESET_ALL}"
        with self._lock:
            self._emit(text, level)


HIERARCHICAL_LOGGER = HierarchicalLogger()


def set_verbosity(quiet: bool) -> None:
    """Only warnings and errors are printed when `quiet` is set."""
    logger.setLevel(logging.WARNING if quiet else logging.INFO)


def hlog(x: Any) -> None:
    HIERARCHICAL_LOGGER.log(x)


def hlog_warn(x: Any) -> None:
    """Yellow warning. Numerical caveats go here, they never raise."""
    HIERARCHICAL_LOGGER.log(x, logging.WARNING, Fore.YELLOW)


def hlog_important(x: Any) -> None:
    HIERARCHICAL_LOGGER.log(x, color=Fore.GREEN)


def hlog_err(x: Any) -> None:
    HIERARCHICAL_LOGGER.log(x, logging.ERROR, Fore.RED)


class htrack_block:
    """
    Context manager opening a timed, indented block:

        with htrack_block("Saving results"):
            hlog("wrote profile.csv")

    prints

        Saving results {
          wrote profile.csv
        } [0:00:00.001]
    """

    def __init__(self, title: Any) -> None:
        self.title = title

    def __enter__(self) -> None:
        HIERARCHICAL_LOGGER.open(self.title)

    def __exit__(self, *exc_info: Any) -> None:
        HIERARCHICAL_LOGGER.close()


class htrack:
    """Decorator wrapping each call in an [`htrack_block`] titled by the function and its keyword arguments."""

    def __call__(self, fn: Callable) -> Callable:
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):  # type:ignore
            title = fn.__qualname__
            if kwargs:
                title += ": " + ", ".join(f"{k}={_short_repr(v)}" for k, v in kwargs.items())
            with htrack_block(title):
                return fn(*args, **kwargs)

        return wrapper


def _short_repr(value: Any) -> str:
    # arrays are summarised by shape so that phase grids do not flood the log
    shape = getattr(value, "shape", None)
    if shape is not None:
        return f"<array {tuple(shape)}>"
    text = str(value)
    return text if len(text) <= 60 else text[:57] + "..."
