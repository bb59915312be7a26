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

import math
import warnings
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import bootstrap, norm

from cocycle_lab.logging.hierarchical_logger import hlog


def _stddev(arr):
    mu = np.mean(arr)
    return math.sqrt(sum([(x - mu) ** 2 for x in arr]) / (len(arr) - 1))


def mean_stderr(arr):
    return _stddev(arr) / math.sqrt(len(arr))


def binomial_stderr(hits: int, trials: int) -> float:
    """Standard error of a success fraction, sqrt(p (1 - p) / trials)."""
    if trials <= 0:
        return 0.0
    p = hits / trials
    return math.sqrt(p * (1.0 - p) / trials)


def binomial_confidence_interval(hits: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Normal approximation confidence interval of a success fraction, clipped to [0, 1].

    Args:
        hits (int): number of successes.
        trials (int): number of trials.
        level (float): two sided confidence level.

    Returns:
        tuple[float, float]: lower and upper bound.
    """
    if trials <= 0:
        return 0.0, 1.0
    p = hits / trials
    half_width = norm.ppf(0.5 + level / 2) * binomial_stderr(hits, trials)
    return max(0.0, p - half_width), min(1.0, p + half_width)


def bootstrap_stderr_scipy(
    statistic: Callable, population: Sequence, number_experiments: int = 1000, seed: int = 0
) -> Optional[float]:
    """Standard error of `statistic` over BCa resamplings (draw with replacement, same size as the population).

    Returns None when the resampled statistic is degenerate, for instance constant.
    """
    if len(population) < 2:
        return None
    hlog(f"Bootstrapping {getattr(statistic, '__name__', 'statistic')}'s stderr.")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = bootstrap(
            data=[np.asarray(population)],
            statistic=statistic,
            n_resamples=number_experiments,
            confidence_level=0.95,
            method="BCa",
            vectorized=False,
            random_state=np.random.default_rng(seed),
        )
    stderr = float(res.standard_error)
    return stderr if math.isfinite(stderr) else None
