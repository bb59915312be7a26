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

"""Lyapunov exponents, complexified profiles and accelerations.

L^k(alpha, A) = lim (1/n) int ln ||Lambda^k A_n(x)|| dx is approximated at a fixed n by the trapezoid rule on a
uniform phase grid. At rational frequencies the exponent at a phase is the exact value (1/q) ln rho(Lambda^k A_q(x)).
A vanishing norm gives the explicit `NEG_INF` marker rather than a float sentinel.
"""

import functools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from cocycle_lab.cocycles.cocycle import Cocycle, iterate, scaled_iterate
from cocycle_lab.cocycles.frequency import Frequency, approximants, approximants_up_to
from cocycle_lab.cocycles.trig_poly import TrigMatrixPoly, evaluate
from cocycle_lab.errors import DimensionError, SpecError
from cocycle_lab.linalg import spectral_radius
from cocycle_lab.logging.hierarchical_logger import hlog_warn
from cocycle_lab.utils_parallelism import parallel_map


DEFAULT_GRID = 2048
LOG_FLOOR = -300.0
FIT_TOL = 1e-3
SNAP_TOL = 0.05
CONVEXITY_TOL = 1e-6
DEFAULT_DENOMINATOR_CAP = 1000


@functools.total_ordering
class NegativeInfinity:
    """Marker for an exponent equal to minus infinity. Compares below every float and never enters arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (NegativeInfinity, ())

    def __eq__(self, other):
        return isinstance(other, NegativeInfinity)

    def __lt__(self, other):
        return not isinstance(other, NegativeInfinity)

    def __hash__(self):
        return hash("NegativeInfinity")

    def __float__(self):
        return float("-inf")

    def __repr__(self):
        return "-inf"

    __str__ = __repr__


NEG_INF = NegativeInfinity()
Exponent = Union[float, NegativeInfinity]


def is_neg_inf(value) -> bool:
    return isinstance(value, NegativeInfinity)


def phase_grid(grid_size: int, offset: float = 0.0, period: float = 1.0) -> np.ndarray:
    """x_m = offset + m * period / grid_size, m = 0..grid_size-1."""
    if grid_size < 1:
        raise ValueError(f"Grid size must be positive, got {grid_size}")
    return offset + period * np.arange(grid_size) / grid_size


def log_norms(c: Cocycle, k: int, n: int, phases) -> np.ndarray:
    """ln ||Lambda^k A_n(x)|| for each phase, -inf where the iterate vanishes."""
    product, log_scale = scaled_iterate(c, n, phases, k)
    if product.shape[-1] == 1:
        norms = np.abs(product[..., 0, 0])
    else:
        norms = np.linalg.norm(product, ord=2, axis=(-2, -1))
    with np.errstate(divide="ignore"):
        return np.log(norms) + log_scale


def _average_exponent(logs: np.ndarray, n: int) -> tuple[Exponent, float]:
    """Phase average of logs / n and a quadrature error estimate from the even indexed subgrid. numpy sums float
    arrays pairwise, so the result does not depend on how the samples were produced."""
    if not np.all(logs >= LOG_FLOOR * n):
        return NEG_INF, 0.0
    value = float(np.sum(logs) / (n * logs.size))
    even = logs[::2]
    coarse = float(np.sum(even) / (n * even.size))
    return value, abs(value - coarse)


def _finite_scale(c: Cocycle, k: int, n: int, grid_size: int, offset: float = 0.0) -> tuple[Exponent, float]:
    if n < 1:
        raise ValueError(f"Iterate length n must be positive, got {n}")
    return _average_exponent(log_norms(c, k, n, phase_grid(grid_size, offset)), n)


def finite_scale_exponent(
    c: Cocycle, k: int, n: int, grid_size: int = DEFAULT_GRID, offset: float = 0.0, t: float = 0.0
) -> Exponent:
    """
    (1/n) (1/M) sum_m ln ||Lambda^k A_n(x_m + it)|| over x_m = offset + m/M.

    Returns:
        Exponent: a float, or `NEG_INF` as soon as one norm falls below exp(-300 n).
    """
    if t != 0.0:
        c = c.shifted(t)
    return _finite_scale(c, k, n, grid_size, offset)[0]


def default_denominator(freq: Frequency, cap: int = DEFAULT_DENOMINATOR_CAP) -> int:
    """Iterate length for irrational estimates: the largest approximant denominator not above `cap`, or the
    largest multiple of q not above `cap` at a rational frequency."""
    if freq.is_rational:
        return freq.q * max(1, cap // freq.q)
    denominators = [a.q for a in approximants_up_to(freq, cap)]
    return denominators[-1] if denominators else 1


def _require_rational(freq: Frequency) -> None:
    if not freq.is_rational:
        raise SpecError(f"Expected a rational frequency p/q, got {freq}")


def rational_log_radii(freq: Frequency, poly: TrigMatrixPoly, k: int, phases) -> np.ndarray:
    """(1/q) ln rho(Lambda^k A_q(x)) for each phase, as floats with -inf where the radius vanishes."""
    _require_rational(freq)
    product, log_scale = scaled_iterate(Cocycle(freq, poly), freq.q, np.asarray(phases), k)
    radii = spectral_radius(product) if product.ndim > 2 else np.asarray(spectral_radius(product))
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = (np.log(radii) + log_scale) / freq.q
    return np.where(logs >= LOG_FLOOR, logs, -np.inf)


def rational_exponent_at_phase(freq: Frequency, poly: TrigMatrixPoly, k: int, x: complex) -> Exponent:
    """L^k(p/q, A, x) = (1/q) ln rho(Lambda^k A_q(x)), or `NEG_INF` if the spectral radius is 0."""
    value = float(rational_log_radii(freq, poly, k, np.asarray([x]))[0])
    return NEG_INF if value == -np.inf else value


def rational_mean_exponent(freq: Frequency, poly: TrigMatrixPoly, k: int, grid_size: int = DEFAULT_GRID) -> Exponent:
    """
    L^k(p/q, A) by quadrature over x in [0, 1/q). The spectrum of A_q(x) is invariant under x -> x + 1/q, so this
    interval carries the whole average. Samples with a vanishing radius are clamped at the log floor and counted.
    """
    _require_rational(freq)
    logs = rational_log_radii(freq, poly, k, phase_grid(grid_size, period=1.0 / freq.q))
    singular = ~np.isfinite(logs)
    if np.all(singular):
        return NEG_INF
    if np.any(singular):
        hlog_warn(
            f"{int(singular.sum())} of {grid_size} phases have a vanishing spectral radius and were clamped at "
            f"{LOG_FLOOR}; refine the grid to resolve the logarithmic singularity."
        )
        logs = np.where(singular, LOG_FLOOR, logs)
    return float(np.sum(logs) / logs.size)


def spectrum_from_profiles(values: Sequence[Exponent]) -> list[Exponent]:
    """L_k = L^k - L^{k-1} from L^1..L^d. Once an entry is -inf every later one is too."""
    spectrum = []
    previous = 0.0
    for value in values:
        if is_neg_inf(value) or is_neg_inf(previous):
            spectrum.append(NEG_INF)
            previous = NEG_INF
            continue
        spectrum.append(value - previous)
        previous = value
    return spectrum


@dataclass
class LyapunovProfile:
    """
    Sampled profiles t -> L^k(alpha, A(. + it)) for k = 1..d.

    Attributes:
        k_max (int): the dimension d.
        t_samples (np.ndarray): sorted imaginary shifts.
        values (dict[int, list[Exponent]]): values[k][i] = L^k at t_samples[i].
        errors (dict[int, list[float]]): quadrature error estimates, same layout.
        n_used (int): iterate length.
        grid_size (int): number of phases.
    """

    k_max: int
    t_samples: np.ndarray
    values: dict[int, list[Exponent]]
    errors: dict[int, list[float]]
    n_used: int
    grid_size: int

    def values_at(self, index: int) -> list[Exponent]:
        return [self.values[k][index] for k in range(1, self.k_max + 1)]

    def spectrum_at(self, index: int) -> list[Exponent]:
        return spectrum_from_profiles(self.values_at(index))

    def finite_column(self, k: int) -> Optional[np.ndarray]:
        """L^k as a float array, None when some sample is -inf."""
        column = self.values[k]
        if any(is_neg_inf(v) for v in column):
            return None
        return np.asarray(column, dtype=float)

    def second_differences(self, k: int) -> Optional[np.ndarray]:
        """
        Convexity defects: the jump of the secant slope at each interior sample times half the surrounding
        spacing. On a uniform grid this is L(t-h) - 2 L(t) + L(t+h).
        """
        column = self.finite_column(k)
        if column is None or column.size < 3:
            return None
        t = self.t_samples
        slopes = np.diff(column) / np.diff(t)
        return np.diff(slopes) * (t[2:] - t[:-2]) / 2

    def convexity_violations(self, tol: float = CONVEXITY_TOL) -> list[tuple[int, float]]:
        violations = []
        for k in range(1, self.k_max + 1):
            defects = self.second_differences(k)
            if defects is None:
                continue
            for i in np.flatnonzero(defects < -tol):
                violations.append((k, float(self.t_samples[i + 1])))
        return violations

    def log_concavity_violations(self, tol: float = CONVEXITY_TOL) -> list[tuple[int, float]]:
        """Samples where L^{k-1} + L^{k+1} <= 2 L^k fails by more than tol."""
        violations = []
        for i, t in enumerate(self.t_samples):
            upper = [0.0] + self.values_at(i)
            for k in range(1, self.k_max):
                lower, middle, higher = upper[k - 1], upper[k], upper[k + 1]
                if is_neg_inf(higher):
                    continue
                if is_neg_inf(middle) or lower + higher > 2 * middle + tol:
                    violations.append((k, float(t)))
        return violations

    def rows(self) -> list[dict]:
        """One row per (t, k) with the cumulative exponent, the individual exponent and the error estimate."""
        rows = []
        for i, t in enumerate(self.t_samples):
            spectrum = self.spectrum_at(i)
            for k in range(1, self.k_max + 1):
                rows.append(
                    {
                        "t": float(t),
                        "k": k,
                        "L^k": self.values[k][i],
                        "L_k": spectrum[k - 1],
                        "err": self.errors[k][i],
                    }
                )
        return rows


class _ProfileAtShift:
    """Picklable worker computing every L^k at one imaginary shift."""

    def __init__(self, c: Cocycle, n: int, grid_size: int):
        self.c = c
        self.n = n
        self.grid_size = grid_size

    def __call__(self, t: float) -> tuple[list[Exponent], list[float]]:
        shifted = self.c.shifted(t)
        values, errors = [], []
        for k in range(1, self.c.dim + 1):
            value, error = _finite_scale(shifted, k, self.n, self.grid_size)
            values.append(value)
            errors.append(error)
        return values, errors


def profile(
    c: Cocycle, t_list: Sequence[float], n: int, grid_size: int = DEFAULT_GRID, num_workers: int = 1
) -> LyapunovProfile:
    """
    L^k(alpha, A(. + it)) at finite scale n for every k and every t, one work item per t.

    Raises:
        NumericRangeError: if some shift overflows the coefficients.
    """
    t_samples = np.sort(np.asarray(t_list, dtype=float))
    if t_samples.size == 0:
        raise ValueError("A profile needs at least one t sample")
    results = parallel_map(_ProfileAtShift(c, n, grid_size), t_samples.tolist(), num_workers, desc="profile")
    values = {k: [r[0][k - 1] for r in results] for k in range(1, c.dim + 1)}
    errors = {k: [r[1][k - 1] for r in results] for k in range(1, c.dim + 1)}
    return LyapunovProfile(
        k_max=c.dim, t_samples=t_samples, values=values, errors=errors, n_used=n, grid_size=grid_size
    )


def ladder_samples(t0: float, levels: int, base: float = 0.0, side: str = "+", include_base: bool = True) -> np.ndarray:
    """base +/- t0 2^{-m}, m = 0..levels-1, plus the base point itself."""
    sign = 1.0 if side == "+" else -1.0
    offsets = t0 * 0.5 ** np.arange(levels)
    samples = base + sign * offsets
    if include_base:
        samples = np.append(samples, base)
    return np.sort(samples)


@dataclass
class AccelerationEntry:
    """
    Attributes:
        k (int): exterior degree.
        omega_upper (float | None): omega^k, slope of L^k divided by 2 pi, None when L^k is -inf.
        omega_lower (float | None): omega_k = omega^k - omega^{k-1}.
        window (tuple[float, float] | None): smallest and largest distance to the base point in the fit.
        residual (float | None): max deviation of the fitted samples from the affine fit.
        regular (bool): a window of at least three samples was affine within tolerance.
        snapped (float | None): nearest multiple of 1/l.
        denominator (int | None): the l used for the snap.
        snap_distance (float | None): |omega^k - snapped|.
        quantized (bool): snap distance within the snap tolerance.
    """

    k: int
    omega_upper: Optional[float]
    omega_lower: Optional[float] = None
    window: Optional[tuple[float, float]] = None
    residual: Optional[float] = None
    regular: bool = False
    snapped: Optional[float] = None
    denominator: Optional[int] = None
    snap_distance: Optional[float] = None
    quantized: bool = False


@dataclass
class AccelerationReport:
    side: str
    base: float
    tol: float
    snap_tol: float
    max_denominator: int
    entries: list[AccelerationEntry] = field(default_factory=list)
    common_denominator: Optional[int] = None

    @property
    def regular(self) -> bool:
        return all(entry.regular for entry in self.entries)

    def omega(self, k: int) -> Optional[float]:
        """omega^k, with omega^0 = 0."""
        if k == 0:
            return 0.0
        return self.entries[k - 1].omega_upper


def snap_to_fraction(value: float, max_denominator: int, snap_tol: float = SNAP_TOL) -> tuple[float, int, float, bool]:
    """
    Nearest multiple of 1/l for the smallest l in 1..max_denominator within `snap_tol`; if none is close enough,
    the closest candidate over all l.

    Returns:
        tuple: (snapped value, l, distance, whether the distance is within tolerance)
    """
    best = None
    for l in range(1, max(1, max_denominator) + 1):
        snapped = round(value * l) / l
        distance = abs(value - snapped)
        if distance <= snap_tol:
            return snapped, l, distance, True
        if best is None or distance < best[2]:
            best = (snapped, l, distance, False)
    return best


def _affine_fit(t: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(t, values, 1)
    residual = float(np.max(np.abs(values - (slope * t + intercept))))
    return float(slope), residual


def acceleration(
    prof: LyapunovProfile,
    side: str = "+",
    base: float = 0.0,
    tol: float = FIT_TOL,
    snap_tol: float = SNAP_TOL,
    special_linear: bool = False,
) -> AccelerationReport:
    """
    omega^k from a profile sampled on a geometric ladder base +/- eps_m: the slope of an affine fit of L^k over the
    largest window of samples closest to the base whose residual stays below `tol`, divided by 2 pi. Each omega^k
    is snapped to a multiple of 1/l with l <= d, or l <= d - 1 for maps with determinant 1.

    A profile without an affine window of three samples gives a non-regular entry, fitted on the two closest
    samples; this is reported, not raised.
    """
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    sign = 1.0 if side == "+" else -1.0
    distances = sign * (prof.t_samples - base)
    selected = np.flatnonzero(distances >= -1e-15)
    selected = selected[np.argsort(distances[selected], kind="stable")]
    if selected.size < 2:
        raise ValueError(f"Need at least two samples on the {side} side of t={base}")
    d = prof.k_max
    max_denominator = d - 1 if special_linear and d >= 2 else d
    report = AccelerationReport(side=side, base=base, tol=tol, snap_tol=snap_tol, max_denominator=max_denominator)

    for k in range(1, d + 1):
        values = [prof.values[k][i] for i in selected]
        if any(is_neg_inf(v) for v in values):
            report.entries.append(AccelerationEntry(k=k, omega_upper=None))
            continue
        t = prof.t_samples[selected]
        values = np.asarray(values, dtype=float)
        fit = None
        for size in range(selected.size, 2, -1):
            slope, residual = _affine_fit(t[:size], values[:size])
            if residual < tol:
                fit = (size, slope, residual, True)
                break
        if fit is None:
            slope, residual = _affine_fit(t[:2], values[:2])
            fit = (2, slope, residual, False)
        size, slope, residual, regular = fit
        omega = slope / (2 * np.pi)
        snapped, l, distance, quantized = snap_to_fraction(omega, max_denominator, snap_tol)
        report.entries.append(
            AccelerationEntry(
                k=k,
                omega_upper=omega,
                window=(float(distances[selected[0]]), float(distances[selected[size - 1]])),
                residual=residual,
                regular=regular,
                snapped=snapped,
                denominator=l,
                snap_distance=distance,
                quantized=quantized,
            )
        )

    previous = 0.0
    for entry in report.entries:
        if entry.omega_upper is not None and previous is not None:
            entry.omega_lower = entry.omega_upper - previous
        previous = entry.omega_upper

    finite = [e.omega_upper for e in report.entries if e.omega_upper is not None]
    for l in range(1, max_denominator + 1):
        if all(abs(w - round(w * l) / l) <= snap_tol for w in finite):
            report.common_denominator = l
            break
    return report


@dataclass
class RegularityResult:
    affine: bool
    slope: Optional[float]
    deviation: Optional[float]
    tol: float

    @property
    def omega(self) -> Optional[float]:
        return None if self.slope is None else self.slope / (2 * np.pi)


def regularity_check(
    prof: LyapunovProfile, k: int, window: tuple[float, float], tol: Optional[float] = None
) -> RegularityResult:
    """
    Whether t -> L^k is affine on the window: the largest deviation of the samples from the secant through the
    first and last sample in the window must stay below `tol`, by default 1e-3 times the window width.
    """
    lo, hi = window
    if tol is None:
        tol = 1e-3 * (hi - lo)
    inside = np.flatnonzero((prof.t_samples >= lo) & (prof.t_samples <= hi))
    if inside.size < 2:
        raise ValueError(f"Window {window} holds fewer than two samples")
    values = [prof.values[k][i] for i in inside]
    if any(is_neg_inf(v) for v in values):
        return RegularityResult(affine=False, slope=None, deviation=None, tol=tol)
    t = prof.t_samples[inside]
    values = np.asarray(values, dtype=float)
    slope = (values[-1] - values[0]) / (t[-1] - t[0])
    deviation = float(np.max(np.abs(values - (values[0] + slope * (t - t[0])))))
    return RegularityResult(affine=deviation < tol, slope=float(slope), deviation=deviation, tol=tol)


@dataclass
class UpperBoundReport:
    """
    Attributes:
        p, q, q_prev (int): the approximant used.
        excess (float): sup over t and x of L^k(p/q, A(. + it), x) - L^k(alpha, A(. + it)).
        per_t (list[dict]): t, rational supremum and irrational estimate for each shift.
    """

    p: int
    q: int
    q_prev: int
    excess: float
    per_t: list[dict] = field(default_factory=list)


def _difference(upper: Exponent, lower: Exponent) -> float:
    if is_neg_inf(upper):
        return 0.0 if is_neg_inf(lower) else -math.inf
    if is_neg_inf(lower):
        return math.inf
    return upper - lower


def rational_upper_bound_check(
    c: Cocycle,
    k: int,
    index: int,
    t_values: Sequence[float],
    grid_size: int = 256,
    n_irrational: Optional[int] = None,
) -> UpperBoundReport:
    """
    Compares the rational exponents at the `index`-th approximant p/q, pointwise in x, with the irrational
    estimate, uniformly over the shifts `t_values`. The excess is expected to vanish as the index grows.
    """
    found = approximants(c.freq, index)
    if not found:
        raise SpecError(f"{c.freq} has no continued fraction approximant")
    if len(found) < index:
        hlog_warn(f"Only {len(found)} approximants available, using p/q = {found[-1].p}/{found[-1].q}")
    approximant = found[-1]
    rational = Frequency.rational(approximant.p, approximant.q)
    n_irrational = n_irrational or default_denominator(c.freq)
    phases = phase_grid(grid_size, period=1.0 / approximant.q)

    excess = -math.inf
    per_t = []
    for t in t_values:
        shifted = c.shifted(t)
        irrational = _finite_scale(shifted, k, n_irrational, grid_size)[0]
        logs = rational_log_radii(rational, shifted.poly, k, phases)
        supremum = float(np.max(logs))
        supremum = NEG_INF if supremum == -np.inf else supremum
        gap = _difference(supremum, irrational)
        excess = max(excess, gap)
        per_t.append({"t": float(t), "rational_sup": supremum, "irrational": irrational, "excess": gap})
    return UpperBoundReport(p=approximant.p, q=approximant.q, q_prev=approximant.q_prev, excess=excess, per_t=per_t)


def rational_upper_bound_sequence(
    c: Cocycle,
    k: int,
    count: int,
    t_values: Sequence[float] = (0.0,),
    grid_size: int = 256,
    n_irrational: Optional[int] = None,
) -> list[dict]:
    """
    One row per approximant index 1..count: p, q, the rational mean exponent L^k(p/q, A), the irrational estimate
    L^k(alpha, A), their distance and the pointwise upper bound excess.
    """
    n_irrational = n_irrational or default_denominator(c.freq)
    irrational = _finite_scale(c, k, n_irrational, grid_size)[0]
    rows = []
    for index, approximant in enumerate(approximants(c.freq, count), start=1):
        rational = rational_mean_exponent(Frequency.rational(approximant.p, approximant.q), c.poly, k, grid_size)
        check = rational_upper_bound_check(c, k, index, t_values, grid_size, n_irrational)
        rows.append(
            {
                "p": approximant.p,
                "q": approximant.q,
                "q_prev": approximant.q_prev,
                "rational": rational,
                "irrational": irrational,
                "distance": abs(_difference(rational, irrational)),
                "excess": check.excess,
            }
        )
    return rows


@dataclass
class TraceFourierReport:
    """
    Attributes:
        q (int): denominator of the rational frequency.
        k_power (int): power of A_q whose trace is expanded.
        coefficients (dict[int, complex]): a_j, the coefficient of exp(2 pi i j q x).
        rows (list[dict]): per t, the dominant mode j, phi(t), its slope -2 pi j / k and the comparison with a
            profile when one is given.
        zero_trace (bool): every coefficient is below 1e-14.
    """

    q: int
    k_power: int
    coefficients: dict[int, complex]
    rows: list[dict]
    zero_trace: bool


def trace_fourier_analysis(
    freq: Frequency,
    poly: TrigMatrixPoly,
    k_power: int,
    t_values: Sequence[float],
    grid_size: Optional[int] = None,
    profile_values: Optional[Sequence[Exponent]] = None,
) -> TraceFourierReport:
    """
    Expands x -> tr A_q(x)^k = sum_j a_j exp(2 pi i j q x); only multiples of q occur because the trace is 1/q
    periodic. At height t the mode j has modulus |a_j| exp(-2 pi j q t) and
    phi(t) = max_j (ln |a_j| - 2 pi j q t) / (k q) is compared with the profile, its slope being -2 pi j_t / k.
    """
    _require_rational(freq)
    if k_power < 1:
        raise ValueError(f"k_power must be positive, got {k_power}")
    q = freq.q
    degree = k_power * poly.degree * q
    minimum = 2 * degree + 2
    grid_size = grid_size or minimum
    if grid_size < minimum:
        raise DimensionError(f"A grid of {grid_size} phases cannot resolve degree {degree}, use at least {minimum}")
    if profile_values is not None and len(profile_values) != len(t_values):
        raise DimensionError("profile_values must match t_values")

    product = iterate(Cocycle(freq, poly), q, phase_grid(grid_size))
    power = product.copy()
    for _ in range(k_power - 1):
        power = power @ product
    traces = np.trace(power, axis1=-2, axis2=-1)
    spectrum = np.fft.fft(traces) / grid_size
    mode_range = range(-k_power * poly.degree, k_power * poly.degree + 1)
    coefficients = {j: complex(spectrum[(j * q) % grid_size]) for j in mode_range}
    moduli = {j: abs(a) for j, a in coefficients.items()}
    zero_trace = max(moduli.values()) < 1e-14

    rows = []
    for i, t in enumerate(t_values):
        row = {"t": float(t), "dominant_j": None, "phi": None, "slope": None}
        if not zero_trace:
            scores = {j: math.log(m) - 2 * math.pi * j * q * t for j, m in moduli.items() if m >= 1e-14}
            dominant = max(scores, key=lambda j: (scores[j], -j))
            row.update(
                dominant_j=dominant,
                phi=scores[dominant] / (k_power * q),
                slope=-2 * math.pi * dominant / k_power,
            )
        if profile_values is not None:
            row["profile"] = profile_values[i]
            row["difference"] = None if row["phi"] is None else _difference(row["phi"], profile_values[i])
        rows.append(row)
    return TraceFourierReport(q=q, k_power=k_power, coefficients=coefficients, rows=rows, zero_trace=zero_trace)


def is_special_linear(c: Cocycle, grid_size: int = 64, tol: float = 1e-10) -> bool:
    """Whether det A(x) = 1 on a phase grid."""
    determinants = np.linalg.det(evaluate(c.poly, phase_grid(grid_size)))
    return bool(np.all(np.abs(determinants - 1.0) <= tol))
