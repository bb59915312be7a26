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
import pickle

import numpy as np
import pytest

from cocycle_lab.cocycles import Cocycle, Frequency, TrigMatrixPoly, build_family, exterior_cocycle
from cocycle_lab.errors import SpecError
from cocycle_lab.lyapunov import (
    NEG_INF,
    acceleration,
    default_denominator,
    finite_scale_exponent,
    is_neg_inf,
    is_special_linear,
    ladder_samples,
    profile,
    rational_exponent_at_phase,
    rational_mean_exponent,
    rational_upper_bound_check,
    rational_upper_bound_sequence,
    regularity_check,
    snap_to_fraction,
    spectrum_from_profiles,
    trace_fourier_analysis,
)


def diag21():
    return build_family("diag", {"entries": "2,1"})


def winding_map():
    """diag(2 exp(2 pi i x), 1)"""
    poly = TrigMatrixPoly.from_dict({1: np.diag([2.0, 0.0]), 0: np.diag([0.0, 1.0])})
    return Cocycle(Frequency.golden(), poly)


NILPOTENT = TrigMatrixPoly.constant([[0.0, 1.0], [0.0, 0.0]])


class TestNegativeInfinity:
    def test_ordering(self):
        assert NEG_INF < -1e300
        assert 0.0 > NEG_INF
        assert not NEG_INF < NEG_INF
        assert max([NEG_INF, -5.0]) == -5.0

    def test_singleton(self):
        assert pickle.loads(pickle.dumps(NEG_INF)) is NEG_INF
        assert float(NEG_INF) == -math.inf
        assert repr(NEG_INF) == "-inf"

    def test_spectrum(self):
        assert spectrum_from_profiles([2.0, 3.0, NEG_INF]) == [2.0, 1.0, NEG_INF]
        assert spectrum_from_profiles([NEG_INF, NEG_INF]) == [NEG_INF, NEG_INF]


class TestFiniteScaleExponent:
    def test_constant(self):
        c = diag21()
        assert finite_scale_exponent(c, 1, 10, 16) == pytest.approx(math.log(2))
        assert finite_scale_exponent(c, 2, 10, 16) == pytest.approx(math.log(2))

    def test_scalar_winding(self):
        c = build_family("scalar_winding")
        for t in (-0.2, 0.0, 0.3):
            assert finite_scale_exponent(c, 1, 5, 16, t=t) == pytest.approx(-2 * math.pi * t)

    def test_vanishing_norm(self):
        c = Cocycle(Frequency.golden(), NILPOTENT)
        assert finite_scale_exponent(c, 1, 3, 8) is NEG_INF
        assert finite_scale_exponent(c, 1, 1, 8) == pytest.approx(0.0)

    def test_almost_mathieu_supercritical(self):
        value = finite_scale_exponent(build_family("almost_mathieu", {"lambda": 3.0}), 1, 1000, 1024)
        assert math.log(1.5) - 0.01 <= value <= math.log(1.5) + 0.05

    def test_exterior_power_matches_top_exponents(self):
        c = build_family("random_trig", {"dim": 3, "degree": 2, "seed": 5})
        direct = finite_scale_exponent(c, 2, 20, 64)
        assert direct == pytest.approx(finite_scale_exponent(exterior_cocycle(c, 2), 1, 20, 64), abs=1e-10)

    @pytest.mark.parametrize(
        "name, params",
        [
            ("almost_mathieu", {"lambda": 3.0}),
            ("random_trig", {"dim": 2, "degree": 1, "seed": 3}),
            ("random_trig", {"dim": 3, "degree": 2, "seed": 4}),
        ],
    )
    def test_doubling_never_increases(self, name, params):
        c = build_family(name, params)
        for n in (8, 16, 32):
            assert finite_scale_exponent(c, 1, 2 * n, 256) <= finite_scale_exponent(c, 1, n, 256) + 1e-6

    def test_default_denominator(self):
        assert default_denominator(Frequency.golden(), 1000) == 987
        assert default_denominator(Frequency.rational(2, 7), 100) == 98


class TestRationalExponents:
    def test_constant(self):
        freq = Frequency.rational(1, 3)
        assert rational_exponent_at_phase(freq, diag21().poly, 1, 0.2) == pytest.approx(math.log(2))
        assert rational_mean_exponent(freq, diag21().poly, 2, 32) == pytest.approx(math.log(2))

    def test_vanishing_radius(self):
        freq = Frequency.rational(1, 2)
        assert rational_exponent_at_phase(freq, NILPOTENT, 1, 0.0) is NEG_INF
        assert rational_mean_exponent(freq, NILPOTENT, 1, 16) is NEG_INF

    def test_requires_rational(self):
        with pytest.raises(SpecError):
            rational_mean_exponent(Frequency.golden(), diag21().poly, 1)

    def test_scalar_winding_phase(self):
        freq = Frequency.rational(2, 5)
        poly = build_family("scalar_winding").poly
        assert rational_exponent_at_phase(freq, poly, 1, 0.3 + 0.1j) == pytest.approx(-0.2 * math.pi)


class TestProfile:
    def test_rows(self):
        prof = profile(diag21(), [0.1, 0.0], n=4, grid_size=8)
        rows = prof.rows()
        assert [(row["t"], row["k"]) for row in rows] == [(0.0, 1), (0.0, 2), (0.1, 1), (0.1, 2)]
        assert rows[1]["L^k"] == pytest.approx(math.log(2))
        assert rows[1]["L_k"] == pytest.approx(0.0)
        assert rows[0]["err"] == pytest.approx(0.0)

    def test_spectrum_at(self):
        prof = profile(diag21(), [0.0], n=4, grid_size=8)
        assert prof.spectrum_at(0) == [pytest.approx(math.log(2)), pytest.approx(0.0)]

    def test_workers_do_not_change_values(self):
        c = build_family("almost_mathieu", {"lambda": 3.0})
        t = [0.0, 0.05, 0.1]
        serial = profile(c, t, n=50, grid_size=64, num_workers=1)
        parallel = profile(c, t, n=50, grid_size=64, num_workers=2)
        assert serial.values == parallel.values

    def test_convexity(self):
        c = build_family("almost_mathieu", {"lambda": 3.0})
        prof = profile(c, np.linspace(-0.2, 0.2, 9), n=50, grid_size=256)
        assert prof.convexity_violations() == []
        assert prof.log_concavity_violations() == []

    def test_ladder(self):
        samples = ladder_samples(0.1, 3, base=0.5, side="-")
        assert samples == pytest.approx([0.4, 0.45, 0.475, 0.5])

    def test_empty(self):
        with pytest.raises(ValueError):
            profile(diag21(), [], n=2)


class TestAcceleration:
    def test_snap(self):
        assert snap_to_fraction(0.98, 1) == (1.0, 1, pytest.approx(0.02), True)
        snapped, l, _, quantized = snap_to_fraction(0.5, 2)
        assert (snapped, l, quantized) == (0.5, 2, True)
        assert snap_to_fraction(0.3, 1)[3] is False

    def test_scalar_winding(self):
        c = build_family("scalar_winding")
        report = acceleration(profile(c, ladder_samples(0.1, 5), n=4, grid_size=16))
        entry = report.entries[0]
        assert entry.omega_upper == pytest.approx(-1.0)
        assert entry.regular and entry.quantized
        assert entry.snapped == -1.0
        assert report.common_denominator == 1

    def test_constant(self):
        report = acceleration(profile(diag21(), ladder_samples(0.1, 5), n=4, grid_size=16))
        assert [e.omega_upper for e in report.entries] == pytest.approx([0.0, 0.0], abs=1e-12)
        assert report.regular

    def test_winding_map_lower_exponents(self):
        report = acceleration(profile(winding_map(), ladder_samples(0.05, 5), n=8, grid_size=64))
        assert report.omega(0) == 0.0
        assert report.entries[0].snapped == -1.0
        assert report.entries[1].snapped == -1.0
        assert report.entries[1].omega_lower == pytest.approx(0.0, abs=1e-6)

    def test_special_linear_denominator(self):
        c = build_family("almost_mathieu", {"lambda": 3.0})
        assert is_special_linear(c)
        assert not is_special_linear(diag21())
        report = acceleration(profile(c, ladder_samples(0.2, 4), n=50, grid_size=64), special_linear=True)
        assert report.max_denominator == 1

    def test_non_regular_is_reported(self):
        # the three samples closest to -0.1 straddle the kink at 0
        c = build_family("almost_mathieu", {"lambda": 3.0})
        prof = profile(c, [-0.2, -0.1, 0.0, 0.1, 0.2], n=200, grid_size=256)
        report = acceleration(prof, side="+", base=-0.1)
        assert not report.entries[0].regular

    def test_side_needs_samples(self):
        with pytest.raises(ValueError):
            acceleration(profile(diag21(), [0.0], n=2, grid_size=8), side="+", base=0.0)

    def test_regularity(self):
        c = build_family("scalar_winding", {"winding": 2})
        prof = profile(c, [0.0, 0.1, 0.2, 0.3], n=3, grid_size=16)
        result = regularity_check(prof, 1, (0.0, 0.3))
        assert result.affine
        assert result.omega == pytest.approx(-2.0)


class TestApproximants:
    def test_sequence_of_constant(self):
        rows = rational_upper_bound_sequence(diag21(), 1, 5, grid_size=16, n_irrational=10)
        assert [row["q"] for row in rows] == [1, 2, 3, 5, 8]
        for row in rows:
            assert row["distance"] == pytest.approx(0.0, abs=1e-12)
            assert row["excess"] == pytest.approx(0.0, abs=1e-12)

    def test_upper_bound_check(self):
        report = rational_upper_bound_check(diag21(), 2, 4, [0.0, 0.1], grid_size=16, n_irrational=10)
        assert report.q == 5
        assert len(report.per_t) == 2
        assert report.excess == pytest.approx(0.0, abs=1e-12)


class TestTraceFourier:
    def test_scalar_winding(self):
        poly = build_family("scalar_winding").poly
        report = trace_fourier_analysis(Frequency.rational(0, 1), poly, 1, [0.0, 0.1])
        assert not report.zero_trace
        assert abs(report.coefficients[1]) == pytest.approx(1.0)
        assert report.rows[1]["dominant_j"] == 1
        assert report.rows[1]["phi"] == pytest.approx(-0.2 * math.pi)
        assert report.rows[1]["slope"] == pytest.approx(-2 * math.pi)

    def test_zero_trace(self):
        report = trace_fourier_analysis(Frequency.rational(1, 2), NILPOTENT, 1, [0.0], profile_values=[NEG_INF])
        assert report.zero_trace
        assert report.rows[0]["phi"] is None
        assert is_neg_inf(report.rows[0]["profile"])
