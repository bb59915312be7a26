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

"""Monte Carlo checks of the obstacle estimate and empirical bad set measures.

Walks are discretized Brownian motions started at the origin of the square (-2, 2)^2 and absorbed on its boundary.
They run in fixed chunks, chunk c drawing from Philox keyed by SeedSequence([seed, c]), so estimates do not depend
on the number of workers.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from cocycle_lab.cocycles.cocycle import Cocycle
from cocycle_lab.cocycles.frequency import Approximant, approximants, approximants_up_to
from cocycle_lab.errors import NormalizationError, SpecError
from cocycle_lab.logging.hierarchical_logger import hlog, hlog_warn
from cocycle_lab.lyapunov import log_norms, phase_grid
from cocycle_lab.stderr import (
    binomial_confidence_interval,
    binomial_stderr,
    bootstrap_stderr_scipy,
    mean_stderr,
)
from cocycle_lab.utils_parallelism import parallel_map


DOMAIN_HALF_WIDTH = 2.0
DEFAULT_WALKS = 10_000
DEFAULT_STEP = 1e-3
DEFAULT_SEED = 20240101
CHUNK_SIZE = 1000
MAX_TIME = 100.0
PREDICATE_RESOLUTION = 2000
TINY = 1e-12


@dataclass(frozen=True)
class ObstacleBand:
    """The union of the rectangles [a, b] x [t_lo, t_hi] over `intervals`."""

    t_lo: float
    t_hi: float
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not -1.0 <= self.t_lo <= self.t_hi <= 1.0:
            raise SpecError(f"Band levels [{self.t_lo}, {self.t_hi}] must lie in [-1, 1]")
        for a, b in self.intervals:
            if not -1.0 <= a <= b <= 1.0:
                raise SpecError(f"Slice interval [{a}, {b}] must lie in [-1, 1]")
        object.__setattr__(self, "intervals", tuple((float(a), float(b)) for a, b in self.intervals))


@dataclass(frozen=True)
class ObstacleSpec:
    """
    An obstacle B inside (-1, 1)^2, given by horizontal bands of rectangles, by a predicate on points, or both.

    Attributes:
        bands (tuple[ObstacleBand, ...]): closed rectangles.
        predicate (Callable, optional): maps arrays (x, t) to a boolean mask. It must be a module level function
            to be sent to worker processes. It is checked at the end point and the midpoint of every walk step.
        name (str): label used in reports.
    """

    bands: tuple[ObstacleBand, ...] = ()
    predicate: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = ""

    @property
    def is_empty(self) -> bool:
        return self.predicate is None and not any(band.intervals for band in self.bands)

    def boxes(self) -> np.ndarray:
        """Rectangles as rows [x_lo, x_hi, t_lo, t_hi]."""
        rows = [(a, b, band.t_lo, band.t_hi) for band in self.bands for a, b in band.intervals]
        return np.asarray(rows, dtype=float).reshape(-1, 4)

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        boxes = self.boxes()
        x, t = points[:, 0:1], points[:, 1:2]
        inside = np.any(
            (x >= boxes[:, 0]) & (x <= boxes[:, 1]) & (t >= boxes[:, 2]) & (t <= boxes[:, 3]), axis=1
        )
        if self.predicate is not None:
            inside |= np.asarray(self.predicate(points[:, 0], points[:, 1]), dtype=bool)
        return inside

    def slice_measure(self, resolution: int = PREDICATE_RESOLUTION) -> float:
        """
        Lebesgue measure rho of the levels t in (-1, 1) with a non-empty slice. Bands contribute the union of their
        level intervals exactly; a predicate is sampled on a resolution x resolution grid.
        """
        levels = sorted((band.t_lo, band.t_hi) for band in self.bands if band.intervals)
        if self.predicate is not None:
            grid = -1.0 + (np.arange(resolution) + 0.5) * 2.0 / resolution
            x, t = np.meshgrid(grid, grid)
            hit = np.asarray(self.predicate(x.ravel(), t.ravel()), dtype=bool).reshape(resolution, resolution)
            half = 1.0 / resolution
            levels = sorted(levels + [(level - half, level + half) for level in grid[np.any(hit, axis=1)]])
        measure, end = 0.0, -1.0
        for lo, hi in levels:
            lo, hi = max(lo, end), min(hi, 1.0)
            if hi > lo:
                measure += hi - lo
                end = hi
        return measure


def slab_family(rhos: Sequence[float]) -> list[ObstacleSpec]:
    """Full width slabs (-1, 1) x [1 - rho, 1] at the top of the square, one per thickness rho in [0, 2]. A zero
    thickness gives the empty obstacle."""
    return [
        ObstacleSpec(bands=(ObstacleBand(1.0 - rho, 1.0, ((-1.0, 1.0),)),), name=f"slab rho={rho:g}")
        if rho > 0
        else ObstacleSpec(name="empty")
        for rho in rhos
    ]


def segment_obstacle(x0: float = 0.0) -> ObstacleSpec:
    """The vertical segment {x0} x [-1, 1]."""
    return ObstacleSpec(bands=(ObstacleBand(-1.0, 1.0, ((x0, x0),)),), name=f"segment x={x0:g}")


def block_obstacle() -> ObstacleSpec:
    """The full square [-1, 1]^2, which contains the starting point."""
    return ObstacleSpec(bands=(ObstacleBand(-1.0, 1.0, ((-1.0, 1.0),)),), name="block")


def _segments_hit_boxes(start: np.ndarray, end: np.ndarray, boxes: np.ndarray) -> np.ndarray:
    """Whether each segment [start, end] meets one of the closed boxes, by clipping the segment parameter range."""
    if boxes.size == 0:
        return np.zeros(start.shape[0], dtype=bool)
    direction = (end - start)[:, None, :]
    origin = start[:, None, :]
    lo = boxes[None, :, [0, 2]]
    hi = boxes[None, :, [1, 3]]
    with np.errstate(divide="ignore", invalid="ignore"):
        s_lo = (lo - origin) / direction
        s_hi = (hi - origin) / direction
    parallel = direction == 0
    inside = (origin >= lo) & (origin <= hi)
    near = np.where(parallel, np.where(inside, -np.inf, np.inf), np.minimum(s_lo, s_hi))
    far = np.where(parallel, np.where(inside, np.inf, -np.inf), np.maximum(s_lo, s_hi))
    enter = np.maximum(near.max(axis=-1), 0.0)
    leave = np.minimum(far.min(axis=-1), 1.0)
    return np.any(enter <= leave, axis=1)


class _WalkChunk:
    """Picklable worker running one chunk of walks."""

    def __init__(self, spec: ObstacleSpec, step: float, seed: int, max_steps: int):
        self.spec = spec
        self.step = step
        self.seed = seed
        self.max_steps = max_steps

    def __call__(self, item: tuple[int, int]) -> tuple[int, int]:
        chunk, size = item
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, chunk])))
        boxes = self.spec.boxes()
        position = np.zeros((size, 2))
        hit = self.spec.contains(position)
        alive = ~hit
        scale = math.sqrt(self.step)
        for _ in range(self.max_steps):
            if not alive.any():
                break
            # increments are drawn for every walk so that all obstacles see the same paths
            noise = rng.standard_normal((size, 2))
            start = position[alive]
            end = start + scale * noise[alive]
            entered = _segments_hit_boxes(start, end, boxes)
            if self.spec.predicate is not None:
                entered |= self.spec.contains(end) | self.spec.contains((start + end) / 2)
            escaped = np.any(np.abs(end) >= DOMAIN_HALF_WIDTH, axis=1)
            indices = np.flatnonzero(alive)
            hit[indices[entered]] = True
            alive[indices[entered | escaped]] = False
            position[indices] = end
        return int(hit.sum()), int(alive.sum())


@dataclass
class HittingEstimate:
    """
    Attributes:
        hits, walks (int): walks entering the obstacle before leaving the square, out of all walks.
        estimate (float): hits / walks.
        ci_low, ci_high (float): 95% normal approximation confidence interval.
        stderr (float): binomial standard error.
        chunk_stderr (float | None): standard error of the mean of the per chunk fractions.
        chunk_hits, chunk_sizes (list[int]): per chunk counts, in chunk order.
        truncated (int): walks still running after the time limit, counted as misses.
    """

    hits: int
    walks: int
    estimate: float
    ci_low: float
    ci_high: float
    stderr: float
    step: float
    seed: int
    chunk_hits: list[int] = field(default_factory=list)
    chunk_sizes: list[int] = field(default_factory=list)
    chunk_stderr: Optional[float] = None
    truncated: int = 0

    @property
    def ci_width(self) -> float:
        return self.ci_high - self.ci_low


def hitting_probability(
    spec: ObstacleSpec,
    walks: int = DEFAULT_WALKS,
    step: float = DEFAULT_STEP,
    seed: int = DEFAULT_SEED,
    num_workers: int = 1,
    max_time: float = MAX_TIME,
) -> HittingEstimate:
    """
    Fraction of `walks` Euler-Maruyama walks with N(0, step) increments per coordinate that meet the obstacle
    before leaving (-2, 2)^2. A step is a hit when the straight segment between two positions meets a rectangle,
    or when its end point or midpoint satisfies the predicate.
    """
    if walks < 1:
        raise ValueError(f"Need at least one walk, got {walks}")
    if not 0 < step <= 0.1:
        raise ValueError(f"Step must lie in (0, 0.1], got {step}")
    if seed < 0:
        raise ValueError(f"Seed must be nonnegative, got {seed}")
    sizes = [CHUNK_SIZE] * (walks // CHUNK_SIZE)
    if walks % CHUNK_SIZE:
        sizes.append(walks % CHUNK_SIZE)
    if spec.is_empty:
        counts = [(0, 0)] * len(sizes)
    else:
        worker = _WalkChunk(spec, step, seed, int(math.ceil(max_time / step)))
        counts = parallel_map(worker, list(enumerate(sizes)), num_workers, desc=spec.name or "walks")
    chunk_hits = [hits for hits, _ in counts]
    truncated = sum(left for _, left in counts)
    if truncated:
        hlog_warn(f"{truncated} walks were still inside the square after time {max_time}, counted as misses")
    hits = sum(chunk_hits)
    low, high = binomial_confidence_interval(hits, walks)
    fractions = [h / s for h, s in zip(chunk_hits, sizes)]
    return HittingEstimate(
        hits=hits,
        walks=walks,
        estimate=hits / walks,
        ci_low=low,
        ci_high=high,
        stderr=binomial_stderr(hits, walks),
        step=step,
        seed=seed,
        chunk_hits=chunk_hits,
        chunk_sizes=sizes,
        chunk_stderr=mean_stderr(fractions) if len(fractions) > 1 else None,
        truncated=truncated,
    )


@dataclass
class ScalingReport:
    """
    Attributes:
        rows (list[dict]): rho, estimate, confidence interval and ratio estimate / rho per obstacle.
        c_hat (float | None): min over rho > 0 of estimate / rho.
        c_hat_low (float | None): the same with the lower confidence bounds.
        c_hat_stderr (float | None): bootstrap standard error of c_hat over walk chunks.
        excluded (int): obstacles with rho = 0, left out of the ratio.
    """

    rows: list[dict]
    c_hat: Optional[float]
    c_hat_low: Optional[float]
    c_hat_stderr: Optional[float]
    excluded: int

    @property
    def positive(self) -> bool:
        return self.c_hat_low is not None and self.c_hat_low > 0


class _RatioFloor:
    """c_hat recomputed on a resampling of the walk chunks."""

    __name__ = "ratio_floor"

    def __init__(self, estimates: list[HittingEstimate], rhos: list[float]):
        self.hits = np.array([e.chunk_hits for e in estimates], dtype=float)
        self.sizes = np.array(estimates[0].chunk_sizes, dtype=float)
        self.rhos = np.asarray(rhos)

    def __call__(self, sample: np.ndarray) -> float:
        chunks = sample.astype(int)
        fractions = self.hits[:, chunks].sum(axis=1) / self.sizes[chunks].sum()
        return float(np.min(fractions / self.rhos))


def obstacle_scaling_study(
    specs: Sequence[ObstacleSpec],
    walks: int = DEFAULT_WALKS,
    step: float = DEFAULT_STEP,
    seed: int = DEFAULT_SEED,
    num_workers: int = 1,
) -> ScalingReport:
    """
    Hitting probabilities P(rho) of a family of obstacles and the floor c_hat = min P(rho) / rho. Every obstacle is
    tested against the same walks, so that nested obstacles get ordered estimates.
    """
    rows, estimates, rhos = [], [], []
    excluded = 0
    for spec in specs:
        rho = spec.slice_measure()
        estimate = hitting_probability(spec, walks, step, seed, num_workers)
        row = {
            "name": spec.name,
            "rho": rho,
            "estimate": estimate.estimate,
            "ci_low": estimate.ci_low,
            "ci_high": estimate.ci_high,
            "ratio": None,
        }
        if rho > TINY:
            row["ratio"] = estimate.estimate / rho
            estimates.append(estimate)
            rhos.append(rho)
        else:
            excluded += 1
        rows.append(row)
        hlog(f"{spec.name}: rho={rho:.4g} P={estimate.estimate:.4g} [{estimate.ci_low:.4g}, {estimate.ci_high:.4g}]")

    if not estimates:
        return ScalingReport(rows=rows, c_hat=None, c_hat_low=None, c_hat_stderr=None, excluded=excluded)
    ratio_rows = [row for row in rows if row["ratio"] is not None]
    c_hat = min(row["ratio"] for row in ratio_rows)
    c_hat_low = min(row["ci_low"] / row["rho"] for row in ratio_rows)
    chunks = np.arange(len(estimates[0].chunk_sizes))
    c_hat_stderr = bootstrap_stderr_scipy(_RatioFloor(estimates, rhos), chunks, seed=seed)
    return ScalingReport(rows=rows, c_hat=c_hat, c_hat_low=c_hat_low, c_hat_stderr=c_hat_stderr, excluded=excluded)


@dataclass
class BadSetReport:
    """
    Attributes:
        q, q_prev (int): the approximant denominator and the previous one; shifts k run over 0..q + q_prev - 1.
        delta, eps (float): depth and half width of the strip.
        n (int): iterate length of psi.
        measure (float): |T|, the t-grid fraction of bad levels times 2 eps.
        t_values (list[float]): levels sampled in (-eps, eps).
        profile (list[float]): inf_x sup_k psi(x + k alpha + it) per level.
        bad (list[bool]): levels where the profile is at most -delta.
        floor, ceiling (float): the raw values of inf_t sup_x and sup of (1/n) ln ||A_n|| used for the
            normalization psi = (phi - floor) / (ceiling - floor).
    """

    q: int
    q_prev: int
    delta: float
    eps: float
    n: int
    measure: float
    t_values: list[float]
    profile: list[float]
    bad: list[bool]
    floor: float
    ceiling: float


class _LevelValues:
    """(1/n) ln ||A_n(x + k alpha + it)|| on the phase grid, for k = 0..shifts-1."""

    def __init__(self, c: Cocycle, n: int, x: np.ndarray, shifts: int):
        self.c = c
        self.n = n
        self.phases = x[:, None] + c.alpha * np.arange(shifts)[None, :]

    def __call__(self, t: float) -> np.ndarray:
        return log_norms(self.c.shifted(t), 1, self.n, self.phases) / self.n


def _strip_levels(eps: float, t_count: int) -> np.ndarray:
    return -eps + (np.arange(t_count) + 0.5) * 2 * eps / t_count


def bad_set_measure(
    c: Cocycle,
    n: int,
    approximant: Approximant,
    delta: float,
    eps: float,
    t_count: int = 41,
    x_count: int = 128,
    num_workers: int = 1,
) -> BadSetReport:
    """
    Measure of the levels t in (-eps, eps) where inf_x sup_{0 <= k < q + q'} psi(x + k alpha + it) <= -delta.

    psi is phi = (1/n) ln ||A_n|| normalized by an affine map so that sup psi = 1 over every shifted sample and
    inf_t sup_x psi = 0 over the base grid (k = 0). A constant phi gives psi = 0.

    Raises:
        NormalizationError: if phi takes non finite values on the grid.
    """
    if delta <= 0 or eps <= 0:
        raise ValueError(f"delta and eps must be positive, got {delta}, {eps}")
    if n < 1:
        raise ValueError(f"Iterate length n must be positive, got {n}")
    t_values = _strip_levels(eps, t_count)
    shifts = approximant.q + approximant.q_prev
    phi = np.stack(parallel_map(_LevelValues(c, n, phase_grid(x_count), shifts), t_values.tolist(), num_workers))
    if not np.all(np.isfinite(phi)):
        raise NormalizationError("(1/n) ln ||A_n|| is not finite on the grid, psi cannot be normalized")
    base = phi[:, :, 0]
    floor = float(np.min(np.max(base, axis=1)))
    ceiling = float(np.max(phi))
    if ceiling - floor <= TINY:
        psi = np.zeros_like(phi)
    else:
        psi = (phi - floor) / (ceiling - floor)
    profile = np.min(np.max(psi, axis=2), axis=1)
    bad = profile <= -delta
    return BadSetReport(
        q=approximant.q,
        q_prev=approximant.q_prev,
        delta=delta,
        eps=eps,
        n=n,
        measure=float(np.count_nonzero(bad)) / t_count * 2 * eps,
        t_values=t_values.tolist(),
        profile=profile.tolist(),
        bad=bad.tolist(),
        floor=floor,
        ceiling=ceiling,
    )


@dataclass
class BadSetSeries:
    reports: list[BadSetReport]
    decay_slope: Optional[float]

    def rows(self) -> list[dict]:
        return [{"q": r.q, "q_prev": r.q_prev, "delta": r.delta, "eps": r.eps, "measure": r.measure} for r in self.reports]


def bad_set_series(
    c: Cocycle,
    n: int,
    delta: float,
    eps: float,
    denominators: Optional[Sequence[int]] = None,
    count: int = 8,
    t_count: int = 41,
    x_count: int = 128,
    num_workers: int = 1,
) -> BadSetSeries:
    """
    Bad set measures along the approximants of the frequency, restricted to `denominators` when given, with the
    least squares slope of ln |T| against ln q over the positive measures.
    """
    if denominators:
        found = [a for a in approximants_up_to(c.freq, max(denominators)) if a.q in set(denominators)]
        missing = sorted(set(denominators) - {a.q for a in found})
        if missing:
            raise SpecError(f"{missing} are not approximant denominators of {c.freq}")
    else:
        found = approximants(c.freq, count)
    reports = [bad_set_measure(c, n, a, delta, eps, t_count, x_count, num_workers) for a in found]
    positive = [(r.q, r.measure) for r in reports if r.measure > 0]
    slope = None
    if len(positive) >= 2:
        q, measure = np.log(np.array(positive, dtype=float)).T
        slope = float(np.polyfit(q, measure, 1)[0])
    return BadSetSeries(reports=reports, decay_slope=slope)
