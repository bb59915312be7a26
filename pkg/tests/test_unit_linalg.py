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

import numpy as np
import pytest

from cocycle_lab.errors import (
    DegenerateGapError,
    DimensionError,
    ExteriorDegreeError,
    NormalizationError,
    TransversalityError,
)
from cocycle_lab.linalg import (
    Subspace,
    empirical_trace_floor,
    exterior_power,
    gap_distance,
    k_subsets,
    oblique_projector,
    principal_angles,
    projection_restriction_norm,
    singular_values,
    spectral_radius,
    top_singular_bases,
    top_singular_subspace,
    trace_power_lower_bound,
)


def random_matrix(d, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


class TestExteriorPower:
    def test_subsets_are_lexicographic(self):
        assert k_subsets(4, 2).tolist() == [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_multiplicative(self, k):
        A, B = random_matrix(3, 0), random_matrix(3, 1)
        assert np.allclose(exterior_power(A @ B, k), exterior_power(A, k) @ exterior_power(B, k))

    def test_top_degree_is_determinant(self):
        A = random_matrix(4, 2)
        assert exterior_power(A, 4)[0, 0] == pytest.approx(np.linalg.det(A))

    def test_singular_values_are_products(self):
        A = np.diag([4.0, 2.0, 0.5])
        assert singular_values(exterior_power(A, 2)) == pytest.approx([8.0, 2.0, 1.0])

    def test_stack(self):
        stack = np.stack([random_matrix(3, s) for s in range(5)])
        compound = exterior_power(stack, 2)
        assert compound.shape == (5, 3, 3)
        assert np.allclose(compound[3], exterior_power(stack[3], 2))

    @pytest.mark.parametrize("k", [0, 4])
    def test_degree_out_of_range(self, k):
        with pytest.raises(ExteriorDegreeError):
            exterior_power(np.eye(3), k)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            exterior_power(np.ones((2, 3)), 1)


class TestSpectralRadius:
    def test_non_normal(self):
        assert spectral_radius([[2.0, 1e6], [0.0, 1.0]]) == pytest.approx(2.0)

    def test_nilpotent(self):
        assert spectral_radius([[0.0, 1.0], [0.0, 0.0]]) == pytest.approx(0.0, abs=1e-12)

    def test_stack(self):
        radii = spectral_radius(np.stack([np.diag([3.0, 1.0]), np.diag([1.0, -5.0])]))
        assert radii == pytest.approx([3.0, 5.0])


class TestSubspaces:
    def test_top_singular_subspace(self):
        S = top_singular_subspace(np.diag([1.0, 3.0, 2.0]), 1)
        assert np.allclose(S.projector, np.diag([0.0, 1.0, 0.0]))

    def test_degenerate_gap(self):
        with pytest.raises(DegenerateGapError):
            top_singular_subspace(np.eye(2), 1)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_projector_commutes_with_gram(self, k):
        B = random_matrix(4, seed=k)
        gram = B.conj().T @ B
        P = top_singular_subspace(B, k).projector
        assert np.allclose(P @ gram, gram @ P, atol=1e-10 * np.linalg.norm(gram))
        assert np.trace(P).real == pytest.approx(k)

    def test_gaps_of_stack(self):
        _, gaps = top_singular_bases(np.stack([np.diag([4.0, 1.0]), np.zeros((2, 2))]), 1)
        assert gaps == pytest.approx([0.75, 0.0])

    def test_non_orthonormal_basis(self):
        with pytest.raises(NormalizationError):
            Subspace(np.array([[1.0], [1.0]]))

    def test_complement(self):
        line = Subspace.spanned_by([[1.0], [1.0]])
        assert gap_distance(line.complement(), Subspace.spanned_by([[1.0], [-1.0]])) == pytest.approx(0.0, abs=1e-12)

    def test_projection_norm(self):
        line = Subspace.spanned_by([[1.0], [0.0]])
        w = np.array([1.0, 1.0]) / np.sqrt(2)
        assert projection_restriction_norm(line, w) == pytest.approx(1 / np.sqrt(2))
        with pytest.raises(NormalizationError):
            projection_restriction_norm(line, np.array([1.0, 1.0]))

    def test_principal_angle(self):
        e1 = Subspace.spanned_by([[1.0], [0.0]])
        diagonal = Subspace.spanned_by([[1.0], [1.0]])
        assert principal_angles(e1, diagonal) == pytest.approx([np.pi / 4])

    def test_gap_distance(self):
        e1 = Subspace.spanned_by([[1.0], [0.0]])
        e2 = Subspace.spanned_by([[0.0], [1.0]])
        assert gap_distance(e1, e1) == pytest.approx(0.0, abs=1e-15)
        assert gap_distance(e1, e2) == pytest.approx(1.0)


class TestObliqueProjector:
    def test_projects_along_stable(self):
        u = Subspace.spanned_by([[1.0], [0.0]])
        s = Subspace.spanned_by([[1.0], [1.0]])
        projection = oblique_projector(u, s)
        assert projection.angle == pytest.approx(np.pi / 4)
        assert projection.norm * np.sin(projection.angle) == pytest.approx(1.0)
        assert np.allclose(projection.matrix @ u.basis, u.basis)
        assert np.allclose(projection.matrix @ s.basis, 0.0)

    def test_not_transverse(self):
        u = Subspace.spanned_by([[1.0], [0.0]])
        with pytest.raises(TransversalityError):
            oblique_projector(u, u)

    def test_ranks_must_be_complementary(self):
        u = Subspace.spanned_by([[1.0], [0.0], [0.0]])
        with pytest.raises(DimensionError):
            oblique_projector(u, u)


class TestTraceBound:
    def test_rotation_needs_second_power(self):
        bound = trace_power_lower_bound([[0.0, -1.0], [1.0, 0.0]])
        assert bound.k == 2
        assert bound.value == pytest.approx(np.sqrt(2))

    def test_diagonal(self):
        bound = trace_power_lower_bound(np.diag([3.0, 1.0]))
        assert bound.k == 1
        assert bound.value == pytest.approx(4.0)

    @pytest.mark.parametrize("d, ceiling", [(2, 1.0), (3, 3.0)])
    def test_empirical_floor(self, d, ceiling):
        floor = empirical_trace_floor(d, samples=2000, seed=0)
        assert 0 < floor <= ceiling
        assert empirical_trace_floor(d, samples=2000, seed=0) == floor
