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

from dataclasses import dataclass

import numpy as np

from cocycle_lab.errors import DimensionError, NumericRangeError, SHIFT_OVERFLOW_MSG
from cocycle_lab.linalg import as_cmatrix


# exp(709) is the largest power of e below the double precision maximum
MAX_EXPONENT = 700.0


@dataclass(frozen=True, eq=False)
class TrigMatrixPoly:
    """
    Matrix valued trigonometric polynomial A(z) = sum_{|j| <= N} C_j exp(2 pi i j z).

    Attributes:
        coefficients (np.ndarray): array of shape (2N + 1, d, d); `coefficients[j + N]` is C_j.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = as_cmatrix(self.coefficients)
        if coefficients.ndim != 3 or coefficients.shape[0] % 2 == 0:
            raise DimensionError(
                f"Coefficients must have shape (2N + 1, d, d), got {coefficients.shape}"
            )
        if coefficients.shape[1] != coefficients.shape[2]:
            raise DimensionError(f"Coefficient matrices must be square, got {coefficients.shape[1:]}")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_dict(cls, coefficients: dict[int, np.ndarray], dim: int | None = None) -> "TrigMatrixPoly":
        """Builds the polynomial from a {j: C_j} mapping, missing modes are zero."""
        if not coefficients and dim is None:
            raise DimensionError("Cannot infer the dimension of an empty polynomial")
        if dim is None:
            dim = np.atleast_2d(next(iter(coefficients.values()))).shape[0]
        degree = max((abs(j) for j in coefficients), default=0)
        array = np.zeros((2 * degree + 1, dim, dim), dtype=np.complex128)
        for j, matrix in coefficients.items():
            matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
            if matrix.shape != (dim, dim):
                raise DimensionError(f"Mode {j} has shape {matrix.shape}, expected {(dim, dim)}")
            array[j + degree] += matrix
        return cls(array)

    @classmethod
    def constant(cls, matrix) -> "TrigMatrixPoly":
        return cls(as_cmatrix(matrix)[None])

    @classmethod
    def from_samples(cls, samples: np.ndarray, degree: int) -> "TrigMatrixPoly":
        """
        Fourier fit of the values A(m / G), m = 0..G-1, of a polynomial of degree at most `degree`.
        Exact (up to rounding) when G >= 2 * degree + 1.
        """
        samples = np.asarray(samples, dtype=np.complex128)
        grid_size = samples.shape[0]
        if grid_size < 2 * degree + 1:
            raise DimensionError(f"{grid_size} samples cannot resolve degree {degree}")
        spectrum = np.fft.fft(samples, axis=0) / grid_size
        modes = np.arange(-degree, degree + 1)
        return cls(spectrum[modes % grid_size])

    @property
    def dim(self) -> int:
        return self.coefficients.shape[1]

    @property
    def degree(self) -> int:
        return (self.coefficients.shape[0] - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.degree, self.degree + 1)

    def coefficient_norms(self) -> np.ndarray:
        return np.linalg.norm(self.coefficients, ord=2, axis=(-2, -1))

    def sup_norm_bound(self, t: float = 0.0) -> float:
        """Upper bound of ||A(x + it)|| over real x: sum_j ||C_j|| exp(-2 pi j t)."""
        return float(np.sum(self.coefficient_norms() * np.exp(-2 * np.pi * self.modes * t)))

    def derivative_norm_bound(self, t: float = 0.0) -> float:
        """Upper bound of ||dA/dx (x + it)|| over real x."""
        weights = 2 * np.pi * np.abs(self.modes) * np.exp(-2 * np.pi * self.modes * t)
        return float(np.sum(self.coefficient_norms() * weights))


def evaluate(A: TrigMatrixPoly, z) -> np.ndarray:
    """
    A(z) for a complex phase z or an array of phases; the result has shape z.shape + (d, d).
    The real part is reduced modulo 1 first so that A(x + 1) and A(x) are computed from the same numbers.
    """
    z = np.asarray(z, dtype=np.complex128)
    reduced = np.mod(z.real, 1.0) + 1j * z.imag
    phases = np.exp(2j * np.pi * np.multiply.outer(reduced, A.modes))
    return np.einsum("...j,jab->...ab", phases, A.coefficients)


def shift_imag(A: TrigMatrixPoly, t: float) -> TrigMatrixPoly:
    """
    The polynomial x -> A(x + it): coefficients C_j exp(-2 pi j t).

    Raises:
        NumericRangeError: if some exp(-2 pi j t) leaves the double precision range.
    """
    exponents = -2 * np.pi * A.modes * float(t)
    if np.max(np.abs(exponents), initial=0.0) > MAX_EXPONENT:
        raise NumericRangeError(
            f"Shifting a degree {A.degree} map by t={t:g} needs exp({np.max(np.abs(exponents)):.0f}). "
            + SHIFT_OVERFLOW_MSG
        )
    shifted = A.coefficients * np.exp(exponents)[:, None, None]
    if not np.all(np.isfinite(shifted)):
        raise NumericRangeError(f"Shifted coefficients overflow at t={t:g}. " + SHIFT_OVERFLOW_MSG)
    return TrigMatrixPoly(shifted)


def perturb(A: TrigMatrixPoly, relative_size: float, rng: np.random.Generator) -> TrigMatrixPoly:
    """
    Random perturbation within the same degree: each coefficient moves by a complex Gaussian matrix scaled so
    that its operator norm is `relative_size` times the largest coefficient norm.
    """
    scale = relative_size * max(float(np.max(A.coefficient_norms())), 1e-300)
    noise = rng.standard_normal(A.coefficients.shape) + 1j * rng.standard_normal(A.coefficients.shape)
    noise /= np.linalg.norm(noise, ord=2, axis=(-2, -1))[:, None, None]
    return TrigMatrixPoly(A.coefficients + scale * noise)
