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

"""Domination: singular value certificates, cone fields, invariant sections and their winding numbers.

k-domination of (alpha, A) is 1-domination of (alpha, Lambda^k A), so certificates and cone fields run on the
exterior cocycle. Sections are computed in C^d directly, with k dimensional subspaces.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from cocycle_lab.cocycles.cocycle import Cocycle, exterior_cocycle, scaled_iterate
from cocycle_lab.cocycles.frequency import Frequency, approximants_up_to
from cocycle_lab.cocycles.trig_poly import evaluate, perturb
from cocycle_lab.errors import (
    NO_DOMINATION_MSG,
    ConvergenceError,
    DegenerateGapError,
    ExteriorDegreeError,
    LiftError,
    RefineError,
    SpecError,
)
from cocycle_lab.linalg import (
    GAP_MARGIN,
    TRANSVERSALITY_FLOOR,
    Subspace,
    gap_distances,
    min_angles,
    orthonormalize,
    singular_values,
    top_singular_bases,
)
from cocycle_lab.logging.hierarchical_logger import hlog, hlog_warn
from cocycle_lab.lyapunov import (
    DEFAULT_DENOMINATOR_CAP,
    default_denominator,
    finite_scale_exponent,
    is_neg_inf,
    phase_grid,
    spectrum_from_profiles,
)


RELATIVE_TOL = 1e-10
DEFAULT_SECTION_GRID = 256
DEFAULT_ITERATIONS = 200
# number of consecutive section iterates whose increments are compared
CAUCHY_WINDOW = 10
SECTION_TOL = 1e-8
LIFT_FLOOR = 1e-3
LIFT_RETRIES = 32
WINDING_RESIDUAL_TOL = 0.1
DEFAULT_RHOS = (1 / 4, 1 / 8, 1 / 16, 1 / 32)
GAP_TOL = 1e-3


def _check_rho(rho: float) -> None:
    if not 0 < rho <= 0.25:
        raise SpecError(f"rho must lie in (0, 1/4], got {rho}")


@dataclass
class DominationCertificate:
    """
    Evidence for k-domination at scale n.

    Attributes:
        k, n (int): exterior degree and iterate length.
        rho (float): cone aperture.
        grid_size (int): number of phases checked.
        worst_ratio (float): max over x of sigma_2 / sigma_1 of Lambda^k A_n(x).
        worst_ratio_shifted (float): the same at x + n alpha.
        worst_product_ratio (float): min over x of sigma_1(A_2n(x)) / (sigma_1(A_n(x + n alpha)) sigma_1(A_n(x))).
        slack (float): smallest relative slack of the three inequalities, negative when some inequality fails.
        perturbation (float): largest relative change of the singular values allowed between grid points.
        passed (bool): the inequalities hold at every grid phase.
        certified (bool): they still hold after the worst change between grid points.
        violating_phases (list[float]): grid phases where some inequality fails.
    """

    k: int
    n: int
    rho: float
    grid_size: int
    worst_ratio: float
    worst_ratio_shifted: float
    worst_product_ratio: float
    slack: float
    perturbation: float
    passed: bool
    certified: bool
    violating_phases: list[float] = field(default_factory=list)


@dataclass
class _CertificateData:
    """Scale invariant singular value data of one (k, n), reused across apertures."""

    k: int
    n: int
    phases: np.ndarray
    ratio: np.ndarray
    ratio_shifted: np.ndarray
    product_ratio: np.ndarray
    delta: np.ndarray
    delta_shifted: np.ndarray
    delta_product: np.ndarray


def _certificate_data(c: Cocycle, k: int, n: int, grid_size: int) -> _CertificateData:
    if not 1 <= k < c.dim:
        raise ExteriorDegreeError(f"Domination index k={k} must lie in 1..{c.dim - 1}")
    if n < 1:
        raise ValueError(f"Iterate length n must be positive, got {n}")
    ext = exterior_cocycle(c, k)
    x = phase_grid(grid_size)
    w1, log1 = scaled_iterate(ext, n, x)
    w2, log2 = scaled_iterate(ext, n, x + n * ext.alpha)
    sv1 = singular_values(w1)
    sv2 = singular_values(w2)
    top = singular_values(w2 @ w1)[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sv1[..., 0] > 0, sv1[..., 1] / sv1[..., 0], np.inf)
        ratio_shifted = np.where(sv2[..., 0] > 0, sv2[..., 1] / sv2[..., 0], np.inf)
        denominator = sv1[..., 0] * sv2[..., 0]
        product_ratio = np.where(denominator > 0, top / denominator, 0.0)

        # |d/dx Lambda^k A_n| <= n C' C^(n-1), phases are within 1/(2M) of a grid point
        bound, slope = ext.poly.sup_norm_bound(), ext.poly.derivative_norm_bound()
        log_h = -math.log(2 * grid_size)

        def log_lipschitz(length: int) -> float:
            if slope == 0.0:
                return -math.inf
            return math.log(length) + math.log(slope) + (length - 1) * math.log(max(bound, 1e-300))

        log_top1 = np.log(sv1[..., 0]) + log1
        log_top2 = np.log(sv2[..., 0]) + log2
        delta = np.exp(log_lipschitz(n) + log_h - log_top1)
        delta_shifted = np.exp(log_lipschitz(n) + log_h - log_top2)
        delta_product = np.exp(log_lipschitz(2 * n) + log_h - log_top1 - log_top2)
    return _CertificateData(
        k=k,
        n=n,
        phases=x,
        ratio=ratio,
        ratio_shifted=ratio_shifted,
        product_ratio=product_ratio,
        delta=np.nan_to_num(delta, nan=np.inf),
        delta_shifted=np.nan_to_num(delta_shifted, nan=np.inf),
        delta_product=np.nan_to_num(delta_product, nan=np.inf),
    )


def _certify(data: _CertificateData, rho: float) -> DominationCertificate:
    square, four = rho**2, 4 * rho
    holds = (
        (data.ratio <= square * (1 + RELATIVE_TOL))
        & (data.ratio_shifted <= square * (1 + RELATIVE_TOL))
        & (data.product_ratio >= four * (1 - RELATIVE_TOL))
    )
    slack = min(
        float(np.min((square - data.ratio) / square)),
        float(np.min((square - data.ratio_shifted) / square)),
        float(np.min((data.product_ratio - four) / four)),
    )
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # Weyl: each singular value moves by at most the norm of the perturbation
        ratio = (data.ratio + data.delta) / (1 - data.delta)
        ratio_shifted = (data.ratio_shifted + data.delta_shifted) / (1 - data.delta_shifted)
        product_ratio = (data.product_ratio - data.delta_product) / ((1 + data.delta) * (1 + data.delta_shifted))
    robust = (
        (data.delta < 1)
        & (data.delta_shifted < 1)
        & (ratio <= square * (1 + RELATIVE_TOL))
        & (ratio_shifted <= square * (1 + RELATIVE_TOL))
        & (product_ratio >= four * (1 - RELATIVE_TOL))
    )
    passed = bool(np.all(holds))
    return DominationCertificate(
        k=data.k,
        n=data.n,
        rho=rho,
        grid_size=data.phases.size,
        worst_ratio=float(np.max(data.ratio)),
        worst_ratio_shifted=float(np.max(data.ratio_shifted)),
        worst_product_ratio=float(np.min(data.product_ratio)),
        slack=slack,
        perturbation=float(np.max(np.maximum(data.delta, data.delta_shifted))),
        passed=passed,
        certified=passed and bool(np.all(robust)),
        violating_phases=data.phases[~holds].tolist(),
    )


def singular_gap_certificate(
    c: Cocycle, k: int, n: int, grid_size: int = DEFAULT_SECTION_GRID, rho: float = 0.25
) -> DominationCertificate:
    """
    Checks on the grid, for the k-th exterior cocycle,
    sigma_2(A_n(x)) <= rho^2 sigma_1(A_n(x)), the same at x + n alpha, and
    sigma_1(A_2n(x)) >= 4 rho sigma_1(A_n(x + n alpha)) sigma_1(A_n(x)).
    The comparisons allow a relative rounding tolerance of 1e-10, so the equality cases pass.

    A passing certificate is `certified` when the inequalities survive the largest change of the singular values
    between grid points, bounded through the coefficient norms of the map.
    """
    _check_rho(rho)
    return _certify(_certificate_data(c, k, n, grid_size), rho)


@dataclass
class ConefieldResult:
    passed: bool
    rho: float
    min_projection: float
    failing_phases: list[float] = field(default_factory=list)
    diagnostic: Optional[str] = None


def conefield_test(
    c: Cocycle,
    k: int,
    n: int,
    rho: float = 0.25,
    grid_size: int = DEFAULT_SECTION_GRID,
    directions: int = 16,
    margin: float = 1e-6,
    seed: int = 0,
) -> ConefieldResult:
    """
    Cone field check on the k-th exterior cocycle. The cone at x is {w : ||P_E w|| > rho} with E the top singular
    direction of A_n(x). Directions on the cone boundary, w = rho e + sqrt(1 - rho^2) f with f orthogonal to E,
    are pushed forward by A_n(x) and must land strictly inside the cone at x + n alpha, by at least `margin`.
    """
    _check_rho(rho)
    if not 1 <= k < c.dim:
        raise ExteriorDegreeError(f"Domination index k={k} must lie in 1..{c.dim - 1}")
    ext = exterior_cocycle(c, k)
    x = phase_grid(grid_size)
    w_here, _ = scaled_iterate(ext, n, x)
    w_there, _ = scaled_iterate(ext, n, x + n * ext.alpha)
    top_here, gaps_here = top_singular_bases(w_here, 1)
    top_there, gaps_there = top_singular_bases(w_there, 1)
    degenerate = (gaps_here < GAP_MARGIN) | (gaps_there < GAP_MARGIN)
    if np.any(degenerate):
        return ConefieldResult(
            passed=False,
            rho=rho,
            min_projection=0.0,
            failing_phases=x[degenerate].tolist(),
            diagnostic=f"degenerate singular gap at {int(degenerate.sum())} of {grid_size} phases",
        )

    rng = np.random.default_rng(seed)
    size = ext.dim
    e = top_here[..., 0]
    worst = np.full(grid_size, np.inf)
    for j in range(directions):
        f = rng.standard_normal((grid_size, size)) + 1j * rng.standard_normal((grid_size, size))
        f -= e * np.sum(e.conj() * f, axis=-1, keepdims=True)
        f /= np.linalg.norm(f, axis=-1, keepdims=True)
        f *= np.exp(2j * np.pi * j / directions)
        w = rho * e + math.sqrt(1 - rho**2) * f
        image = np.einsum("mab,mb->ma", w_here, w)
        lengths = np.linalg.norm(image, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            projection = np.abs(np.sum(top_there[..., 0].conj() * image, axis=-1)) / lengths
        worst = np.minimum(worst, np.where(lengths > 0, projection, 0.0))
    failing = worst <= rho + margin
    return ConefieldResult(
        passed=not bool(np.any(failing)),
        rho=rho,
        min_projection=float(np.min(worst)),
        failing_phases=x[failing].tolist(),
    )


@dataclass
class Splitting:
    """
    Invariant sections on a phase grid.

    Attributes:
        cocycle (Cocycle): the cocycle the sections belong to, already shifted by `t`.
        k (int): rank of the unstable section.
        t (float): imaginary part of the phases.
        phases (np.ndarray): real parts x_m of the grid.
        unstable (np.ndarray): orthonormal bases of u(x_m), shape (M, d, k).
        unstable_next (np.ndarray): bases of u(x_m + alpha), used for the invariance residual and the multipliers.
        stable (np.ndarray | None): orthonormal bases of s(x_m), shape (M, d, d - k).
        increments (list[float]): gap metric distances between consecutive iterates, latest first.
        converged (bool): every increment is below the section tolerance.
        invariance_residual (float): max over x of the gap between A(x) u(x) and u(x + alpha).
        angles (np.ndarray | None): smallest angle between u(x_m) and s(x_m).
        stable_method (str | None): "adjoint" or "rational".
        multipliers (np.ndarray | None): lambda(x_m) with A(x) u(x) = lambda(x) u(x + alpha), filled by
            `scalar_multiplier_and_winding`.
    """

    cocycle: Cocycle
    k: int
    t: float
    phases: np.ndarray
    unstable: np.ndarray
    unstable_next: np.ndarray
    stable: Optional[np.ndarray]
    increments: list[float]
    converged: bool
    invariance_residual: float
    angles: Optional[np.ndarray] = None
    stable_method: Optional[str] = None
    multipliers: Optional[np.ndarray] = None

    @property
    def min_angle(self) -> Optional[float]:
        return None if self.angles is None else float(np.min(self.angles))

    def unstable_at(self, index: int) -> Subspace:
        return Subspace(self.unstable[index])

    def stable_at(self, index: int) -> Subspace:
        if self.stable is None:
            raise ValueError("This splitting has no stable section")
        return Subspace(self.stable[index])


def _initial_frame(d: int, k: int) -> np.ndarray:
    rng = np.random.default_rng(0)
    return orthonormalize(rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k)))


def _push_sections(c: Cocycle, k: int, phases: np.ndarray, iterations: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    u_m(x) = A_{mn}(x - mn alpha) U_0 for m = iterations, iterations - 1, ..., iterations - CAUCHY_WINDOW, in one
    forward pass from x - mn alpha: iterate r is started from U_0 after r n steps.

    Returns:
        tuple: bases of u_m at each phase, shape (P, d, k), and the Cauchy increments d(u_{m-r}, u_{m-r-1}).
    """
    if iterations <= CAUCHY_WINDOW:
        raise ValueError(f"Need more than {CAUCHY_WINDOW} iterations, got {iterations}")
    frame = _initial_frame(c.dim, k)
    blocks = np.broadcast_to(frame, (phases.size, CAUCHY_WINDOW + 1) + frame.shape).copy()
    start = phases - iterations * n * c.alpha
    for step in range(iterations * n):
        if step % n == 0 and step // n <= CAUCHY_WINDOW:
            blocks[:, step // n] = frame
        matrices = evaluate(c.poly, start + step * c.alpha)
        blocks = orthonormalize(matrices[:, None] @ blocks)
    increments = [float(np.max(gap_distances(blocks[:, r], blocks[:, r + 1]))) for r in range(CAUCHY_WINDOW)]
    return blocks[:, 0], np.asarray(increments)


def _complements(bases: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(bases, mode="complete")
    return q[..., bases.shape[-1] :]


def _invertible_on_grid(c: Cocycle, phases: np.ndarray) -> bool:
    determinants = np.abs(np.linalg.det(evaluate(c.poly, phases)))
    return bool(np.min(determinants) > 1e-12 * max(1.0, float(np.max(determinants))))


def _rational_frequency(freq: Frequency, cap: int = DEFAULT_DENOMINATOR_CAP) -> Frequency:
    if freq.is_rational:
        return freq
    found = approximants_up_to(freq, cap)
    return Frequency.rational(found[-1].p, found[-1].q)


def _rational_stable(c: Cocycle, k: int, phases: np.ndarray) -> np.ndarray:
    """Invariant subspace of the d - k smallest eigenvalue moduli of A_q(x), q the last approximant in budget."""
    rational = _rational_frequency(c.freq)
    product, _ = scaled_iterate(c.with_frequency(rational), rational.q, phases)
    d = c.dim
    stable = np.empty((phases.size, d, d - k), dtype=np.complex128)
    for m, matrix in enumerate(product):
        moduli = np.sort(np.abs(np.linalg.eigvals(matrix)))[::-1]
        if moduli[k - 1] <= moduli[k] * (1 + GAP_MARGIN):
            raise DegenerateGapError(f"Eigenvalue moduli {moduli[k - 1]:.6g} and {moduli[k]:.6g} do not separate")
        threshold = math.sqrt(moduli[k - 1] * moduli[k])
        _, vectors, _ = scipy.linalg.schur(matrix, output="complex", sort=lambda z: abs(z) < threshold)
        stable[m] = vectors[:, : d - k]
    return stable


def unstable_section(
    c: Cocycle,
    k: int = 1,
    grid_size: int = DEFAULT_SECTION_GRID,
    iterations: int = DEFAULT_ITERATIONS,
    n: int = 1,
    t: float = 0.0,
    stable: str = "auto",
    tol: float = SECTION_TOL,
    strict: bool = True,
) -> Splitting:
    """
    Unstable section u(x) = lim A_{mn}(x - mn alpha) U_0, with QR re-orthonormalization after every factor.
    Convergence is declared when the last CAUCHY_WINDOW gap metric increments are all below `tol`.

    The stable section is the orthogonal complement of the rank d - k unstable section of the adjoint cocycle
    (-alpha, A(. - alpha)^*) when A is invertible on the grid (`stable="adjoint"`), and otherwise the eigenvalue
    splitting of A_q at the last rational approximant (`stable="rational"`). `stable="none"` skips it.

    Raises:
        ConvergenceError: if the iteration did not settle and `strict` is set.
    """
    if not 1 <= k <= c.dim:
        raise ExteriorDegreeError(f"Section rank k={k} must lie in 1..{c.dim}")
    if stable not in ("auto", "adjoint", "rational", "none"):
        raise ValueError(f"Unknown stable section method {stable!r}")
    shifted = c.shifted(t) if t != 0.0 else c
    x = phase_grid(grid_size)
    bases, increments = _push_sections(shifted, k, np.concatenate([x, x + shifted.alpha]), iterations, n)
    unstable, unstable_next = bases[:grid_size], bases[grid_size:]
    converged = bool(np.max(increments) < tol)
    if not converged:
        message = f"Largest section increment {np.max(increments):.3g} after {iterations} iterations. "
        if strict:
            raise ConvergenceError(message + NO_DOMINATION_MSG)
        hlog_warn(message + NO_DOMINATION_MSG)

    images = orthonormalize(evaluate(shifted.poly, x) @ unstable)
    residual = float(np.max(gap_distances(images, unstable_next)))

    split = Splitting(
        cocycle=shifted,
        k=k,
        t=t,
        phases=x,
        unstable=unstable,
        unstable_next=unstable_next,
        stable=None,
        increments=increments.tolist(),
        converged=converged,
        invariance_residual=residual,
    )
    if k == c.dim or stable == "none":
        return split

    method = stable
    if method == "auto":
        method = "adjoint" if _invertible_on_grid(shifted, x) else "rational"
    if method == "adjoint":
        try:
            adjoint_bases, adjoint_increments = _push_sections(shifted.adjoint(), c.dim - k, x, iterations, n)
            if np.max(adjoint_increments) >= tol:
                raise ConvergenceError(f"Adjoint section increment {np.max(adjoint_increments):.3g}")
            split.stable = _complements(adjoint_bases)
        except ConvergenceError as e:
            if stable == "adjoint":
                raise
            hlog_warn(f"{e}; falling back on the rational approximant splitting")
            method = "rational"
    if method == "rational":
        split.stable = _rational_stable(shifted, k, x)
    split.stable_method = method
    split.angles = min_angles(split.unstable, split.stable)
    if split.min_angle < TRANSVERSALITY_FLOOR:
        hlog_warn(f"Unstable and stable sections are not transverse (smallest angle {split.min_angle:.3g})")
    return split


@dataclass
class WindingReport:
    """
    Attributes:
        winding (int): winding number of x -> lambda(x).
        total_increment (float): sum of the argument increments along the grid.
        residual (float): distance of total_increment / 2 pi to `winding`.
        max_increment (float): largest argument increment between neighbouring phases.
        omega (int): the implied acceleration, -winding.
    """

    winding: int
    total_increment: float
    residual: float
    max_increment: float
    omega: int
    multipliers: Optional[np.ndarray] = None


def _winding_of_samples(values: np.ndarray) -> WindingReport:
    """Winding number of a closed curve sampled at the phases of a uniform grid."""
    if np.any(values == 0):
        raise RefineError("The curve passes through 0, its winding number is undefined")
    increments = np.angle(np.roll(values, -1) / values)
    largest = float(np.max(np.abs(increments)))
    if largest >= np.pi / 2:
        raise RefineError(f"Argument increment {largest:.3f} is not below pi/2, refine the phase grid")
    total = float(np.sum(increments))
    winding = int(round(total / (2 * np.pi)))
    residual = abs(total / (2 * np.pi) - winding)
    if residual >= WINDING_RESIDUAL_TOL:
        raise RefineError(f"Winding count {total / (2 * np.pi):.3f} is not close to an integer")
    return WindingReport(
        winding=winding, total_increment=total, residual=residual, max_increment=largest, omega=-winding
    )


def scalar_multiplier_and_winding(split: Splitting, seed: int = 0) -> WindingReport:
    """
    Multipliers A(x) u(x) = lambda(x) u(x + alpha) of a rank one unstable section and their winding number.

    The section is lifted to a one periodic vector field through the normalization v* u(x) = 1, trying v = u(x_0)
    first and then random unit vectors.

    Raises:
        LiftError: if no v with |v* u| > 1e-3 on the grid is found in 32 attempts.
        RefineError: if an argument increment reaches pi/2.
    """
    if split.k != 1:
        raise ExteriorDegreeError("Winding numbers are defined for rank one sections, pass the exterior cocycle")
    u, u_next = split.unstable[..., 0], split.unstable_next[..., 0]
    rng = np.random.default_rng(seed)
    v = u[0]
    for attempt in range(LIFT_RETRIES):
        pairing, pairing_next = u @ v.conj(), u_next @ v.conj()
        if min(np.min(np.abs(pairing)), np.min(np.abs(pairing_next))) > LIFT_FLOOR:
            break
        v = rng.standard_normal(u.shape[-1]) + 1j * rng.standard_normal(u.shape[-1])
        v /= np.linalg.norm(v)
    else:
        raise LiftError(f"No global lift found after {LIFT_RETRIES} attempts")
    if attempt:
        hlog(f"Lift found after {attempt} retries")

    lifted = u / pairing[:, None]
    images = np.einsum("mab,mb->ma", evaluate(split.cocycle.poly, split.phases), lifted)
    multipliers = images @ v.conj()
    report = _winding_of_samples(multipliers)
    report.multipliers = multipliers
    split.multipliers = multipliers
    return report


def determinant_winding(c: Cocycle, grid_size: int = 512, t: float = 0.0) -> WindingReport:
    """Winding number of x -> det A(x + it); omega^d = -winding."""
    shifted = c.shifted(t) if t != 0.0 else c
    determinants = np.linalg.det(evaluate(shifted.poly, phase_grid(grid_size)))
    return _winding_of_samples(determinants)


def splitting_band(
    c: Cocycle,
    k: int,
    t_values: Sequence[float],
    grid_size: int = DEFAULT_SECTION_GRID,
    iterations: int = DEFAULT_ITERATIONS,
    n: int = 1,
) -> list[Splitting]:
    return [unstable_section(c, k, grid_size, iterations, n, t=float(t)) for t in sorted(t_values)]


@dataclass
class AngleProfileReport:
    t_values: list[float]
    min_angles: list[float]
    interior_min: float
    boundary_min: float
    tol: float
    passed: bool


def splitting_angle_profile(splittings: Sequence[Splitting], tol: float = 1e-3) -> AngleProfileReport:
    """
    Smallest splitting angle at each height of a band. The angle may not dip in the interior of the band below its
    values on the boundary heights by more than `tol`.
    """
    ordered = sorted(splittings, key=lambda s: s.t)
    if len(ordered) < 2:
        raise ValueError("A band needs at least two heights")
    angles = []
    for split in ordered:
        if split.angles is None:
            raise ValueError(f"Splitting at t={split.t} has no stable section")
        angles.append(split.min_angle)
    boundary = min(angles[0], angles[-1])
    interior = min(angles[1:-1], default=boundary)
    return AngleProfileReport(
        t_values=[s.t for s in ordered],
        min_angles=angles,
        interior_min=interior,
        boundary_min=boundary,
        tol=tol,
        passed=interior >= boundary - tol,
    )


def certificate_schedule(freq: Frequency, budget: int) -> list[int]:
    """Iterate lengths tried by the classification: 1, the approximant denominators and their doubles up to the
    budget, or the powers of two at a rational frequency."""
    if budget < 1:
        raise ValueError(f"Budget must be positive, got {budget}")
    if freq.is_rational:
        return [2**i for i in range(int(math.log2(budget)) + 1)]
    lengths = {1}
    for approximant in approximants_up_to(freq, budget):
        lengths.update(length for length in (approximant.q, 2 * approximant.q) if length <= budget)
    return sorted(lengths)


@dataclass
class ClassificationReport:
    """
    Attributes:
        verdict (str): "trivial", "dominated" or "undetermined".
        spectrum (list): estimated L_1..L_d.
        gaps (list[int]): indices k with L_k - L_{k+1} > gap_tol.
        certificates (dict[int, DominationCertificate]): the passing certificate found for each gap.
        undetermined (list[int]): gaps without a certificate within the budget.
    """

    verdict: str
    spectrum: list
    gaps: list[int]
    certificates: dict[int, DominationCertificate]
    undetermined: list[int]
    budget: int
    gap_tol: float


def oseledets_classification(
    c: Cocycle,
    budget: int = 64,
    gap_tol: float = GAP_TOL,
    rhos: Sequence[float] = DEFAULT_RHOS,
    grid_size: int = DEFAULT_SECTION_GRID,
    n_spectrum: Optional[int] = None,
) -> ClassificationReport:
    """
    Trivial when the exponents agree within `gap_tol`; dominated when every gap k carries a passing certificate
    for some n in the schedule and rho in `rhos`; undetermined otherwise, listing the gaps left open.
    """
    n_spectrum = n_spectrum or default_denominator(c.freq, 256)
    values = [finite_scale_exponent(c, k, n_spectrum, grid_size) for k in range(1, c.dim + 1)]
    spectrum = spectrum_from_profiles(values)
    gaps = []
    for k in range(1, c.dim):
        upper, lower = spectrum[k - 1], spectrum[k]
        if is_neg_inf(upper):
            continue
        if is_neg_inf(lower) or upper - lower > gap_tol:
            gaps.append(k)

    certificates = {}
    schedule = certificate_schedule(c.freq, budget)
    for k in gaps:
        for n in schedule:
            data = _certificate_data(c, k, n, grid_size)
            passing = [cert for cert in (_certify(data, rho) for rho in rhos) if cert.passed]
            if passing:
                certificates[k] = passing[0]
                hlog(f"k={k} dominated at n={n}, rho={passing[0].rho}")
                break

    undetermined = [k for k in gaps if k not in certificates]
    if not gaps:
        verdict = "trivial"
    elif not undetermined:
        verdict = "dominated"
    else:
        verdict = "undetermined"
    return ClassificationReport(
        verdict=verdict,
        spectrum=spectrum,
        gaps=gaps,
        certificates=certificates,
        undetermined=undetermined,
        budget=budget,
        gap_tol=gap_tol,
    )


def _chart(bases: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Chart coordinates U (V* U)^{-1} of subspaces near the reference subspace V."""
    return bases @ np.linalg.inv(reference.conj().T @ bases)


def holomorphy_residual(
    c: Cocycle,
    x0: float,
    t0: float,
    k: int = 1,
    h: float = 1e-4,
    iterations: int = DEFAULT_ITERATIONS,
    n: int = 1,
) -> float:
    """
    Discrete Cauchy-Riemann residual |(d/dx + i d/dt) w / 2| at x0 + i t0 of the unstable section w in the chart
    centered at u(x0 + i t0), by central differences of step h.
    """
    point = np.array([x0])

    def section(t: float, phases: np.ndarray) -> np.ndarray:
        bases, _ = _push_sections(c.shifted(t), k, phases, iterations, n)
        return bases

    reference = section(t0, point)[0]
    along_x = _chart(section(t0, np.array([x0 - h, x0 + h])), reference)
    below = _chart(section(t0 - h, point), reference)[0]
    above = _chart(section(t0 + h, point), reference)[0]
    dx = (along_x[1] - along_x[0]) / (2 * h)
    dt = (above - below) / (2 * h)
    return float(np.linalg.norm((dx + 1j * dt) / 2, ord=2))


@dataclass
class RobustnessReport:
    base: DominationCertificate
    relative_size: float
    slacks: list[float]
    passed: list[bool]

    @property
    def robust(self) -> bool:
        """Every perturbation keeps the certificate with at least half of the original slack."""
        return self.base.passed and all(
            ok and slack >= self.base.slack / 2 for ok, slack in zip(self.passed, self.slacks)
        )


def perturbation_robustness(
    c: Cocycle,
    k: int,
    n: int,
    rho: float,
    grid_size: int = DEFAULT_SECTION_GRID,
    relative_size: float = 1e-4,
    trials: int = 5,
    seed: int = 0,
) -> RobustnessReport:
    """Re-runs the certificate on `trials` random coefficient perturbations of the given relative size."""
    base = singular_gap_certificate(c, k, n, grid_size, rho)
    rng = np.random.default_rng(seed)
    slacks, passed = [], []
    for _ in range(trials):
        perturbed = Cocycle(c.freq, perturb(c.poly, relative_size, rng))
        cert = singular_gap_certificate(perturbed, k, n, grid_size, rho)
        slacks.append(cert.slack)
        passed.append(cert.passed)
    return RobustnessReport(base=base, relative_size=relative_size, slacks=slacks, passed=passed)
