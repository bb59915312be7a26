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

import json
import math

import numpy as np
import pytest

from cocycle_lab.cocycles import (
    Cocycle,
    Frequency,
    TrigMatrixPoly,
    approximants,
    approximants_up_to,
    build_family,
    cocycle_from_spec,
    cocycle_to_spec,
    evaluate,
    exterior_cocycle,
    iterate,
    load_cocycle_spec,
    load_custom_families,
    perturb,
    scaled_iterate,
    shift_imag,
)
from cocycle_lab.cocycles import frequency as frequency_module
from cocycle_lab.cocycles.frequency import GOLDEN_MEAN
from cocycle_lab.errors import DimensionError, ExteriorDegreeError, NumericRangeError, SpecError
from cocycle_lab.linalg import exterior_power
from cocycle_lab.lyapunov import default_denominator


PHASES = np.linspace(0.0, 1.0, 7, endpoint=False)


def almost_mathieu(coupling=3.0, energy=0.0):
    return build_family("almost_mathieu", {"E": energy, "lambda": coupling})


class TestTrigMatrixPoly:
    def test_almost_mathieu_values(self):
        A = almost_mathieu().poly
        assert np.allclose(evaluate(A, 0.0), [[-3.0, -1.0], [1.0, 0.0]])
        assert np.allclose(evaluate(A, 0.5), [[3.0, -1.0], [1.0, 0.0]])

    def test_evaluate_is_periodic(self):
        A = build_family("random_trig", {"degree": 2}).poly
        assert np.allclose(evaluate(A, PHASES + 1.0), evaluate(A, PHASES))

    def test_shift_imag(self):
        A = build_family("random_trig", {"degree": 2, "seed": 3}).poly
        assert np.allclose(evaluate(shift_imag(A, 0.2), PHASES), evaluate(A, PHASES + 0.2j))

    def test_shift_round_trip(self):
        A = build_family("random_trig", {"degree": 2, "seed": 3}).poly
        back = shift_imag(shift_imag(A, 0.3), -0.3)
        assert np.max(np.abs(back.coefficients - A.coefficients)) < 1e-12

    def test_shift_overflow(self):
        with pytest.raises(NumericRangeError):
            shift_imag(almost_mathieu().poly, 200.0)

    def test_norm_bounds(self):
        A = almost_mathieu().poly
        assert A.sup_norm_bound() == pytest.approx(4.0)
        assert A.sup_norm_bound(0.1) == pytest.approx(1.5 * np.exp(0.2 * np.pi) + 1.5 * np.exp(-0.2 * np.pi) + 1.0)
        assert A.derivative_norm_bound() == pytest.approx(6 * np.pi)
        values = evaluate(shift_imag(A, 0.1), np.linspace(0, 1, 64, endpoint=False))
        assert np.max(np.linalg.norm(values, ord=2, axis=(-2, -1))) <= A.sup_norm_bound(0.1) + 1e-12

    def test_from_samples(self):
        A = build_family("random_trig", {"dim": 3, "degree": 2}).poly
        fitted = TrigMatrixPoly.from_samples(evaluate(A, np.arange(5) / 5), 2)
        assert np.allclose(fitted.coefficients, A.coefficients)
        with pytest.raises(DimensionError):
            TrigMatrixPoly.from_samples(evaluate(A, np.arange(4) / 4), 2)

    def test_bad_shape(self):
        with pytest.raises(DimensionError):
            TrigMatrixPoly(np.zeros((2, 2, 2)))

    def test_perturb_size(self):
        A = almost_mathieu().poly
        noisy = perturb(A, 1e-3, np.random.default_rng(0))
        assert noisy.degree == A.degree
        assert np.max(np.linalg.norm(noisy.coefficients - A.coefficients, ord=2, axis=(-2, -1))) == pytest.approx(
            1.5e-3
        )


class TestFrequency:
    def test_parse_rational_reduces(self):
        freq = Frequency.parse("2/4")
        assert (freq.p, freq.q) == (1, 2)
        assert freq.is_rational

    def test_parse_float(self):
        freq = Frequency.parse("0.25")
        assert not freq.is_rational
        assert freq.value == 0.25

    @pytest.mark.parametrize("text", ["a/b", "golden", "1/0"])
    def test_parse_errors(self, text):
        with pytest.raises(SpecError):
            Frequency.parse(text)

    def test_golden_approximants_are_fibonacci(self):
        found = approximants(Frequency.golden(), 8)
        assert [a.q for a in found] == [1, 2, 3, 5, 8, 13, 21, 34]
        assert [a.p for a in found] == [1, 1, 2, 3, 5, 8, 13, 21]
        assert [a.q_prev for a in found[1:]] == [1, 2, 3, 5, 8, 13, 21]

    def test_best_approximation(self):
        found = approximants(Frequency.golden(), 12)
        for current, following in zip(found, found[1:]):
            assert abs(current.q * GOLDEN_MEAN - current.p) < 1 / following.q

    def test_rational_has_no_approximants(self):
        with pytest.raises(SpecError):
            approximants(Frequency.rational(1, 3), 4)

    def test_truncated_expansion(self):
        found = approximants(Frequency.irrational(0.5), 5)
        assert [(a.p, a.q) for a in found] == [(1, 2)]

    def test_pi_convergents(self):
        found = approximants(Frequency.irrational(math.pi - 3), 3)
        assert [(a.p, a.q) for a in found] == [(1, 7), (15, 106), (16, 113)]

    def test_capped_lookup_stays_quiet(self, monkeypatch):
        warnings = []
        monkeypatch.setattr(frequency_module, "hlog_warn", warnings.append)
        found = approximants_up_to(Frequency.golden(), 100)
        assert [a.q for a in found] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
        assert default_denominator(Frequency.golden()) == 987
        assert warnings == []

    def test_capped_lookup_warns_below_bound(self, monkeypatch):
        warnings = []
        monkeypatch.setattr(frequency_module, "hlog_warn", warnings.append)
        assert [(a.p, a.q) for a in approximants_up_to(Frequency.irrational(0.5), 10)] == [(1, 2)]
        assert len(warnings) == 1
        with pytest.raises(SpecError):
            approximants_up_to(Frequency.rational(1, 3), 10)


class TestIterates:
    def test_constant_iterate(self):
        c = build_family("diag", {"entries": "2,1"})
        assert np.allclose(iterate(c, 5, 0.3), np.diag([32.0, 1.0]))
        assert np.allclose(iterate(c, 0, PHASES), np.eye(2))

    def test_cocycle_law(self):
        c = build_family("random_trig", {"dim": 3, "degree": 2, "seed": 4})
        z = PHASES + 0.05j
        for m, n in [(1, 1), (2, 3), (4, 1)]:
            assert np.allclose(iterate(c, m + n, z), iterate(c, m, z + n * c.alpha) @ iterate(c, n, z))

    def test_iterate_order(self):
        c = almost_mathieu()
        x = 0.17
        expected = evaluate(c.poly, x + 2 * c.alpha) @ evaluate(c.poly, x + c.alpha) @ evaluate(c.poly, x)
        assert np.allclose(iterate(c, 3, x), expected)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_scaled_iterate(self, k):
        c = build_family("random_trig", {"dim": 3, "degree": 1, "seed": 5})
        product, log_scale = scaled_iterate(c, 6, PHASES, k)
        expected = exterior_power(iterate(c, 6, PHASES), k)
        assert np.allclose(product * np.exp(log_scale)[:, None, None], expected)

    def test_scaled_iterate_does_not_overflow(self):
        c = build_family("diag", {"entries": "1e10,1"})
        product, log_scale = scaled_iterate(c, 100, PHASES)
        assert np.all(np.isfinite(product))
        assert log_scale == pytest.approx(np.full(PHASES.size, 1000 * np.log(10.0)))

    def test_scaled_iterate_degree(self):
        with pytest.raises(ExteriorDegreeError):
            scaled_iterate(almost_mathieu(), 2, PHASES, 3)

    def test_exterior_cocycle(self):
        c = build_family("random_trig", {"dim": 3, "degree": 2, "seed": 1})
        ext = exterior_cocycle(c, 2)
        assert ext.dim == 3
        assert ext.poly.degree == 4
        assert np.allclose(evaluate(ext.poly, PHASES + 0.1j), exterior_power(evaluate(c.poly, PHASES + 0.1j), 2))

    def test_adjoint(self):
        c = almost_mathieu()
        adjoint = c.adjoint()
        assert adjoint.alpha == pytest.approx(1 - c.alpha)
        expected = np.conj(np.swapaxes(evaluate(c.poly, PHASES - c.alpha), -1, -2))
        assert np.allclose(evaluate(adjoint.poly, PHASES), expected)


class TestRegistry:
    def test_parameters_are_coerced(self):
        c = build_family("almost_mathieu", {"lambda": "2.5", "E": "1"})
        assert np.allclose(evaluate(c.poly, 0.0), [[-1.5, -1.0], [1.0, 0.0]])

    def test_unknown_family(self):
        with pytest.raises(SpecError):
            build_family("no_such_family")

    def test_unknown_parameter(self):
        with pytest.raises(SpecError):
            build_family("diag", {"lambda": 1})

    def test_bad_parameter_type(self):
        with pytest.raises(SpecError):
            build_family("identity", {"dim": "two"})

    def test_rotation(self):
        c = build_family("rotation")
        angle = 2 * np.pi * 0.1
        assert np.allclose(evaluate(c.poly, 0.1), [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])

    def test_spec_file(self, tmp_path):
        c = Cocycle(Frequency.rational(2, 5), almost_mathieu().poly)
        path = tmp_path / "amo.json"
        path.write_text(json.dumps(cocycle_to_spec(c)))
        loaded = load_cocycle_spec(path)
        assert (loaded.freq.p, loaded.freq.q) == (2, 5)
        assert np.allclose(loaded.poly.coefficients, c.poly.coefficients)

    @pytest.mark.parametrize(
        "spec",
        [
            {"dim": 2, "freq": {"kind": "irrational", "value": 0.3}, "coeffs": [{"j": 0, "re": [[1.0]]}]},
            {"dim": 1, "freq": {"kind": "complex"}, "coeffs": []},
            {"dim": 1, "coeffs": []},
        ],
    )
    def test_malformed_spec(self, spec):
        with pytest.raises(SpecError):
            cocycle_from_spec(spec)

    def test_missing_spec_file(self, tmp_path):
        with pytest.raises(SpecError):
            load_cocycle_spec(tmp_path / "missing.json")

    def test_custom_families(self, tmp_path):
        module = tmp_path / "shear_families.py"
        module.write_text(
            "import numpy as np\n"
            "from cocycle_lab.cocycles.registry import CocycleFamily\n"
            "from cocycle_lab.cocycles.trig_poly import TrigMatrixPoly\n\n\n"
            "def _shear(params):\n"
            "    return TrigMatrixPoly.constant(np.array([[1.0, params['s']], [0.0, 1.0]]))\n\n\n"
            "FAMILIES = [CocycleFamily(name='shear_from_file', builder=_shear, defaults={'s': 1.0})]\n"
        )
        assert load_custom_families(str(module)) == ["shear_from_file"]
        c = build_family("shear_from_file", {"s": "2"})
        assert np.allclose(evaluate(c.poly, 0.4), [[1.0, 2.0], [0.0, 1.0]])
