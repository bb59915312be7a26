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

"""Dense complex matrix kernel.

Every function accepts a single `d x d` matrix, and most also accept a stack of shape `(..., d, d)` so that a whole
phase grid is handled in one vectorized call. Nothing here holds state.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg

from cocycle_lab.errors import (
    DegenerateGapError,
    DimensionError,
    ExteriorDegreeError,
    NormalizationError,
    TransversalityError,
)


GAP_MARGIN = 1e-8
TRANSVERSALITY_FLOOR = 1e-12
ORTHONORMALITY_TOL = 1e-10


def as_cmatrix(B) -> np.ndarray:
    """Converts B to a complex128 array of at least two dimensions with finite entries."""
    B = np.asarray(B, dtype=np.complex128)
    if B.ndim < 2:
        raise DimensionError(f"Expected a matrix or a stack of matrices, got shape {B.shape}")
    if not np.all(np.isfinite(B)):
        raise ValueError("Matrix entries must be finite")
    return B


def _require_square(B: np.ndarray) -> int:
    if B.shape[-1] != B.shape[-2]:
        raise DimensionError(f"Expected square matrices, got shape {B.shape[-2:]}")
    return B.shape[-1]


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    A point of the Grassmannian G(k, d).

    Attributes:
        basis (np.ndarray): d x k matrix with orthonormal columns.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.complex128)
        if basis.ndim != 2 or basis.shape[1] > basis.shape[0]:
            raise DimensionError(f"A basis must be a d x k matrix with k <= d, got shape {basis.shape}")
        gram = basis.conj().T @ basis
        if not np.allclose(gram, np.eye(basis.shape[1]), atol=ORTHONORMALITY_TOL, rtol=0):
            raise NormalizationError("Subspace basis columns are not orthonormal")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def spanned_by(cls, vectors) -> "Subspace":
        """Orthonormalizes the columns of `vectors`, which must be linearly independent."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        q, r = np.linalg.qr(vectors)
        diagonal = np.abs(np.diag(r))
        if diagonal.size and diagonal.min() <= 1e-12 * max(diagonal.max(), 1e-300):
            raise DimensionError("Spanning vectors are linearly dependent")
        return cls(q)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        """Orthogonal complement, of rank d - k."""
        return Subspace(scipy.linalg.null_space(self.basis.conj().T))


class ObliqueProjection(NamedTuple):
    matrix: np.ndarray
    norm: float
    angle: float


class TraceBound(NamedTuple):
    k: int
    value: float


def singular_values(B) -> np.ndarray:
    """Singular values in decreasing order, along the last axis for stacks."""
    B = as_cmatrix(B)
    _require_square(B)
    return np.linalg.svd(B, compute_uv=False)


@lru_cache(maxsize=None)
def k_subsets(d: int, k: int) -> np.ndarray:
    """All k-subsets of range(d) in lexicographic order, one per row."""
    return np.array(list(itertools.combinations(range(d), k)), dtype=np.intp).reshape(-1, k)


def exterior_power(B, k: int) -> np.ndarray:
    """
    k-th compound matrix of B: the matrix of k x k minors, rows and columns indexed by the k-subsets of
    {0, ..., d-1} in lexicographic order. This is the matrix of the k-th exterior power in the basis
    e_{i1} ^ ... ^ e_{ik}, so that exterior_power(A @ B, k) = exterior_power(A, k) @ exterior_power(B, k).

    Args:
        B: d x d matrix or stack of such.
        k (int): 1 <= k <= d.

    Returns:
        np.ndarray: C(d, k) x C(d, k) matrix (or stack).
    """
    B = as_cmatrix(B)
    d = _require_square(B)
    if not 1 <= k <= d:
        raise ExteriorDegreeError(f"Exterior degree k={k} must lie in 1..{d}")
    if k == 1:
        return B.copy()
    subsets = k_subsets(d, k)
    rows = subsets[:, None, :, None]
    cols = subsets[None, :, None, :]
    return np.linalg.det(B[..., rows, cols])


def spectral_radius(B):
    """
    Largest eigenvalue modulus. A single matrix is balanced before the eigenvalue solve. Long products are
    far from normal and power iteration is unreliable on them. Stacks go through LAPACK geev, which balances
    by default.
    """
    B = as_cmatrix(B)
    _require_square(B)
    if B.ndim == 2:
        balanced, _ = scipy.linalg.matrix_balance(B)
        return float(np.max(np.abs(scipy.linalg.eigvals(balanced))))
    return np.max(np.abs(np.linalg.eigvals(B)), axis=-1)


def top_singular_subspace(B, k: int, margin: float = GAP_MARGIN) -> Subspace:
    """
    E_k^+(B): span of the right singular vectors of the k largest singular values.

    Raises:
        DegenerateGapError: if sigma_k - sigma_{k+1} <= margin * sigma_1.
    """
    B = as_cmatrix(B)
    if B.ndim != 2:
        raise DimensionError("top_singular_subspace takes a single matrix, use top_singular_bases for stacks")
    d = _require_square(B)
    if not 1 <= k <= d:
        raise DimensionError(f"Subspace rank k={k} must lie in 1..{d}")
    bases, gaps = top_singular_bases(B[None], k)
    if k < d and not gaps[0] > margin:
        raise DegenerateGapError(f"sigma_{k} and sigma_{k + 1} coincide up to the relative margin {margin:g}")
    return Subspace(bases[0])


def top_singular_bases(stack, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized E_k^+ over a stack of matrices.

    Returns:
        tuple: bases of shape (..., d, k) and relative gaps (sigma_k - sigma_{k+1}) / sigma_1 of shape (...);
        the gap is +inf when k = d and 0 for the zero matrix.
    """
    stack = as_cmatrix(stack)
    d = _require_square(stack)
    _, s, vh = np.linalg.svd(stack)
    bases = np.swapaxes(vh[..., :k, :], -1, -2).conj()
    if k == d:
        gaps = np.full(s.shape[:-1], np.inf)
    else:
        top = s[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            gaps = np.where(top > 0, (s[..., k - 1] - s[..., k]) / np.where(top > 0, top, 1.0), 0.0)
    return bases, gaps


def orthonormalize(stack: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the same space, for a stack of d x k matrices."""
    q, _ = np.linalg.qr(stack)
    return q


def projection_restriction_norm(S: Subspace, w, tol: float = 1e-10) -> float:
    """Norm of the orthogonal projection of the unit vector w on S."""
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.shape[0] != S.ambient_dim:
        raise DimensionError(f"Vector of length {w.shape[0]} does not live in dimension {S.ambient_dim}")
    if abs(np.linalg.norm(w) - 1.0) > tol:
        raise NormalizationError(f"Expected a unit vector, got norm {np.linalg.norm(w):.6g}")
    return float(min(1.0, np.linalg.norm(S.basis.conj().T @ w)))


def principal_angles(S1: Subspace, S2: Subspace) -> np.ndarray:
    """Principal angles in decreasing order."""
    return scipy.linalg.subspace_angles(S1.basis, S2.basis)


def gap_distance(S1: Subspace, S2: Subspace) -> float:
    """Gap metric: operator norm of the difference of the orthogonal projectors."""
    return float(gap_distances(S1.basis, S2.basis))


def gap_distances(bases1: np.ndarray, bases2: np.ndarray) -> np.ndarray:
    """Gap metric between two stacks of orthonormal bases of shape (..., d, k)."""
    p1 = bases1 @ np.swapaxes(bases1, -1, -2).conj()
    p2 = bases2 @ np.swapaxes(bases2, -1, -2).conj()
    return np.linalg.norm(p1 - p2, ord=2, axis=(-2, -1))


def min_angles(bases_u: np.ndarray, bases_s: np.ndarray) -> np.ndarray:
    """
    Smallest principal angle between u and s for stacks of orthonormal bases. The sine is the smallest singular
    value of the part of u orthogonal to s and the cosine is the largest singular value of s* u. Combining both
    keeps the angle accurate near 0 and near pi/2.
    """
    cross = np.swapaxes(bases_s, -1, -2).conj() @ bases_u
    residual = bases_u - bases_s @ cross
    sines = np.linalg.svd(residual, compute_uv=False)[..., -1]
    cosines = np.linalg.svd(cross, compute_uv=False)[..., 0]
    return np.arctan2(np.clip(sines, 0.0, 1.0), np.clip(cosines, 0.0, 1.0))


def oblique_projector(u: Subspace, s: Subspace) -> ObliqueProjection:
    """
    The projector P onto u along s (ker P = s and P = id on u) together with its operator norm and the smallest
    angle theta between u and s. The norm satisfies ||P|| sin(theta) = 1.
    """
    d = u.ambient_dim
    if s.ambient_dim != d or u.rank + s.rank != d:
        raise DimensionError(f"Ranks {u.rank} and {s.rank} are not complementary in dimension {d}")
    angle = float(min_angles(u.basis, s.basis))
    if angle < TRANSVERSALITY_FLOOR:
        raise TransversalityError(f"Subspaces are not transverse (smallest angle {angle:.3g})")
    frame = np.hstack([u.basis, s.basis])
    coordinates = np.linalg.solve(frame, np.eye(d))
    matrix = u.basis @ coordinates[: u.rank]
    return ObliqueProjection(matrix=matrix, norm=float(np.linalg.norm(matrix, ord=2)), angle=angle)


def trace_power_lower_bound(B) -> TraceBound:
    """max over 1 <= k <= d of |tr B^k|^(1/k), with the smallest maximizing k."""
    B = as_cmatrix(B)
    d = _require_square(B)
    if B.ndim != 2:
        raise DimensionError("trace_power_lower_bound takes a single matrix")
    power = np.eye(d, dtype=np.complex128)
    best = TraceBound(k=1, value=-1.0)
    for k in range(1, d + 1):
        power = power @ B
        value = abs(np.trace(power)) ** (1.0 / k)
        if value > best.value:
            best = TraceBound(k=k, value=float(value))
    return best


def empirical_trace_floor(d: int, samples: int = 10_000, seed: int = 0) -> float:
    """
    Smallest observed ratio max_k |tr B^k|^(1/k) / rho(B) over complex Gaussian d x d matrices. The existence of
    a positive floor c_d follows from compactness but no value is known, so it is measured.
    """
    rng = np.random.default_rng(seed)
    stack = rng.standard_normal((samples, d, d)) + 1j * rng.standard_normal((samples, d, d))
    radii = spectral_radius(stack)
    power = np.broadcast_to(np.eye(d, dtype=np.complex128), stack.shape).copy()
    best = np.zeros(samples)
    for k in range(1, d + 1):
        power = power @ stack
        best = np.maximum(best, np.abs(np.trace(power, axis1=-2, axis2=-1)) ** (1.0 / k))
    keep = radii > 0
    return float(np.min(best[keep] / radii[keep]))
