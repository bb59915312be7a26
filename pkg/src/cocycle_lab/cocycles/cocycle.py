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
from dataclasses import dataclass

import numpy as np

from cocycle_lab.cocycles.frequency import Frequency
from cocycle_lab.cocycles.trig_poly import TrigMatrixPoly, evaluate, shift_imag
from cocycle_lab.errors import ExteriorDegreeError
from cocycle_lab.linalg import exterior_power


@dataclass(frozen=True, eq=False)
class Cocycle:
    """
    One frequency cocycle (alpha, A) acting by (x, w) -> (x + alpha, A(x) w).

    Attributes:
        freq (Frequency): rotation number alpha.
        poly (TrigMatrixPoly): the analytic map A.
    """

    freq: Frequency
    poly: TrigMatrixPoly

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def alpha(self) -> float:
        return self.freq.value

    def shifted(self, t: float) -> "Cocycle":
        """The cocycle (alpha, A(. + it))."""
        return Cocycle(self.freq, shift_imag(self.poly, t))

    def with_frequency(self, freq: Frequency) -> "Cocycle":
        return Cocycle(freq, self.poly)

    def adjoint(self) -> "Cocycle":
        """
        The cocycle (-alpha, B) with B(y) = A(y - alpha)^* on real phases. Orthogonal complements of invariant
        subspaces of (alpha, A) are invariant under it, which is how stable directions are obtained from an
        unstable direction computation.
        """
        if self.freq.is_rational:
            freq = Frequency.rational(-self.freq.p, self.freq.q)
        else:
            freq = Frequency.irrational(-self.freq.value)
        modes = self.poly.modes
        # mode m of B is C_{-m}^H exp(-2 pi i m alpha)
        flipped = np.conj(np.swapaxes(self.poly.coefficients[::-1], -1, -2))
        factors = np.exp(-2j * np.pi * modes * self.alpha)
        return Cocycle(freq, TrigMatrixPoly(flipped * factors[:, None, None]))


def iterate(c: Cocycle, n: int, z) -> np.ndarray:
    """
    A_n(z) = A(z + (n - 1) alpha) ... A(z + alpha) A(z), the rightmost factor evaluated at z; A_0 = identity.
    `z` may be an array of phases, the result then has shape z.shape + (d, d).
    """
    if n < 0:
        raise ValueError(f"Iterate index must be nonnegative, got {n}")
    z = np.asarray(z, dtype=np.complex128)
    result = np.broadcast_to(np.eye(c.dim, dtype=np.complex128), z.shape + (c.dim, c.dim)).copy()
    for j in range(n):
        result = evaluate(c.poly, z + j * c.alpha) @ result
    return result


def scaled_iterate(c: Cocycle, n: int, phases, k: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """
    Renormalized iterate of the k-th exterior power over a batch of phases.

    The product is divided by its Frobenius norm after every factor and the logarithms of these norms are
    accumulated, so that exterior_power(A_n(z), k) = product * exp(log_scale) without overflow. A product that
    becomes exactly zero stays zero with log_scale = -inf.

    Returns:
        tuple: `product` of shape phases.shape + (D, D) with D = C(d, k), and `log_scale` of shape phases.shape.
    """
    if not 1 <= k <= c.dim:
        raise ExteriorDegreeError(f"Exterior degree k={k} must lie in 1..{c.dim}")
    phases = np.asarray(phases, dtype=np.complex128)
    size = math.comb(c.dim, k)
    product = np.broadcast_to(np.eye(size, dtype=np.complex128), phases.shape + (size, size)).copy()
    log_scale = np.zeros(phases.shape)
    with np.errstate(divide="ignore"):
        for j in range(n):
            step = evaluate(c.poly, phases + j * c.alpha)
            if k > 1:
                step = exterior_power(step, k)
            product = step @ product
            norms = np.linalg.norm(product, axis=(-2, -1))
            product /= np.where(norms > 0, norms, 1.0)[..., None, None]
            log_scale += np.log(norms)
    return product, log_scale


def exterior_cocycle(c: Cocycle, k: int) -> Cocycle:
    """
    The cocycle (alpha, Lambda^k A) on C^{C(d, k)}. Lambda^k A has degree at most kN, so its values on a grid of
    2kN + 1 phases determine it and the coefficients are recovered by an FFT.
    """
    if not 1 <= k <= c.dim:
        raise ExteriorDegreeError(f"Exterior degree k={k} must lie in 1..{c.dim}")
    if k == 1:
        return c
    degree = k * c.poly.degree
    grid_size = 2 * degree + 1
    samples = exterior_power(evaluate(c.poly, np.arange(grid_size) / grid_size), k)
    return Cocycle(c.freq, TrigMatrixPoly.from_samples(samples, degree))
