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

import numpy as np
import pytest

from cocycle_lab.cocycles import Approximant, build_family
from cocycle_lab.errors import SpecError
from cocycle_lab.lyapunov import finite_scale_exponent
from cocycle_lab.stderr import binomial_confidence_interval, binomial_stderr, bootstrap_stderr_scipy, mean_stderr
from cocycle_lab.stochastic import (
    ObstacleBand,
    ObstacleSpec,
    bad_set_measure,
    bad_set_series,
    block_obstacle,
    hitting_probability,
    obstacle_scaling_study,
    segment_obstacle,
    slab_family,
)


def disk(x, t):
    return x**2 + t**2 <= 0.25


class TestObstacles:
    def test_band_validation(self):
        with pytest.raises(SpecError):
            ObstacleBand(0.5, 0.2, ((-1.0, 1.0),))
        with pytest.raises(SpecError):
            ObstacleBand(0.0, 0.5, ((-1.5, 0.0),))

    def test_slice_measure(self):
        assert slab_family([0.5])[0].slice_measure() == pytest.approx(0.5)
        assert block_obstacle().slice_measure() == pytest.approx(2.0)
        assert segment_obstacle().slice_measure() == pytest.approx(2.0)
        assert ObstacleSpec(name="empty").slice_measure() == 0.0
        assert ObstacleSpec(predicate=disk, name="disk").slice_measure() == pytest.approx(1.0, abs=0.01)

    def test_zero_thickness_is_empty(self):
        spec = slab_family([0.0])[0]
        assert spec.is_empty
        assert spec.name == "empty"

    def test_contains(self):
        spec = slab_family([1.0])[0]
        assert spec.contains(np.array([[0.0, 0.0], [0.0, -0.1]])).tolist() == [True, False]


class TestHittingProbability:
    def test_block_and_empty(self):
        assert hitting_probability(block_obstacle(), walks=500, step=0.01, seed=1).estimate == 1.0
        empty = hitting_probability(ObstacleSpec(name="empty"), walks=500, step=0.01, seed=1)
        assert empty.estimate == 0.0
        assert empty.ci_low == 0.0

    def test_slab_through_origin(self):
        # the slab [0, 1] has the starting point on its boundary
        assert hitting_probability(slab_family([1.0])[0], walks=500, step=0.01, seed=1).estimate == 1.0

    def test_nested_slabs_are_ordered(self):
        thin, thick = slab_family([0.2, 0.5])
        small = hitting_probability(thin, walks=2000, step=0.01, seed=7)
        large = hitting_probability(thick, walks=2000, step=0.01, seed=7)
        assert small.hits <= large.hits
        assert 0 < small.estimate < 1

    def test_workers_do_not_change_estimates(self):
        spec = slab_family([0.5])[0]
        serial = hitting_probability(spec, walks=2500, step=0.01, seed=3, num_workers=1)
        parallel = hitting_probability(spec, walks=2500, step=0.01, seed=3, num_workers=2)
        assert serial.hits == parallel.hits
        assert serial.chunk_hits == parallel.chunk_hits
        assert serial.chunk_sizes == [1000, 1000, 500]

    def test_interval_width_scales(self):
        spec = slab_family([0.5])[0]
        narrow = hitting_probability(spec, walks=4000, step=0.01, seed=5)
        wide = hitting_probability(spec, walks=1000, step=0.01, seed=5)
        assert wide.ci_width / narrow.ci_width == pytest.approx(2.0, rel=0.2)

    def test_halving_the_step(self):
        spec = slab_family([0.5])[0]
        coarse = hitting_probability(spec, walks=4000, step=0.01, seed=11)
        fine = hitting_probability(spec, walks=4000, step=0.005, seed=11)
        assert abs(coarse.estimate - fine.estimate) < fine.ci_width

    @pytest.mark.parametrize("kwargs", [{"walks": 0}, {"step": 0.5}, {"seed": -1}])
    def test_arguments(self, kwargs):
        with pytest.raises(ValueError):
            hitting_probability(block_obstacle(), **{"walks": 10, "step": 0.01, "seed": 0, **kwargs})


class TestScalingStudy:
    def test_floor_is_positive(self):
        report = obstacle_scaling_study(slab_family([0.0, 0.25, 1.0]), walks=2000, step=0.01, seed=3)
        assert report.excluded == 1
        assert report.rows[0]["ratio"] is None
        assert [row["rho"] for row in report.rows] == pytest.approx([0.0, 0.25, 1.0])
        assert report.c_hat > 0
        assert report.positive
        assert report.c_hat <= 1.0

    def test_only_empty_obstacles(self):
        report = obstacle_scaling_study(slab_family([0.0]), walks=100, step=0.01, seed=3)
        assert report.c_hat is None
        assert not report.positive


class TestBadSet:
    def test_single_measure_of_constant_cocycle(self):
        report = bad_set_measure(build_family("diag"), n=3, approximant=Approximant(3, 5, 3), delta=0.1, eps=0.2, t_count=8, x_count=16)
        assert (report.q, report.q_prev) == (5, 3)
        assert report.measure == 0.0
        assert report.floor == pytest.approx(report.ceiling)
        assert report.profile == [0.0] * 8
        assert report.t_values[0] == pytest.approx(-0.175)
        assert not any(report.bad)

    @pytest.mark.parametrize("delta, eps", [(0.0, 0.1), (0.1, -0.1)])
    def test_single_measure_ranges(self, delta, eps):
        with pytest.raises(ValueError):
            bad_set_measure(build_family("diag"), n=3, approximant=Approximant(1, 2, 1), delta=delta, eps=eps)

    def test_measure_shrinks_with_delta(self):
        c = build_family("almost_mathieu", {"lambda": 1.5})
        approximant = Approximant(3, 5, 3)
        measures = [
            bad_set_measure(c, n=8, approximant=approximant, delta=delta, eps=0.2, t_count=11, x_count=32).measure
            for delta in (0.01, 0.05, 0.1, 0.2)
        ]
        assert measures == sorted(measures, reverse=True)

    def test_normalization_covers_shifted_samples(self):
        c = build_family("almost_mathieu", {"lambda": 1.5})
        report = bad_set_measure(c, n=4, approximant=Approximant(1, 2, 1), delta=0.1, eps=0.2, t_count=3, x_count=8)
        samples = [
            finite_scale_exponent(c, 1, 4, 1, offset=m / 8 + k * c.alpha, t=t)
            for t in report.t_values
            for m in range(8)
            for k in range(3)
        ]
        assert report.ceiling == pytest.approx(max(samples), rel=1e-9)
        assert max(report.profile) <= 1.0 + 1e-12

    def test_constant_cocycle(self):
        series = bad_set_series(build_family("diag"), n=4, delta=0.1, eps=0.1, count=3, t_count=9, x_count=16)
        assert [r.measure for r in series.reports] == [0.0, 0.0, 0.0]
        assert series.decay_slope is None

    def test_scalar_winding(self):
        series = bad_set_series(build_family("scalar_winding"), n=4, delta=0.1, eps=0.1, count=3, t_count=9, x_count=16)
        assert all(r.measure == 0.0 for r in series.reports)

    def test_measures_do_not_grow(self):
        c = build_family("almost_mathieu", {"lambda": 1.5})
        series = bad_set_series(c, n=8, delta=0.05, eps=0.2, count=4, t_count=11, x_count=32)
        measures = [r.measure for r in series.reports]
        assert measures == sorted(measures, reverse=True)
        assert [r.q for r in series.reports] == [1, 2, 3, 5]
        assert all(len(r.profile) == 11 for r in series.reports)

    def test_denominators(self):
        series = bad_set_series(build_family("diag"), n=2, delta=0.1, eps=0.1, denominators=[3, 5], t_count=5, x_count=16)
        assert [row["q"] for row in series.rows()] == [3, 5]
        with pytest.raises(SpecError):
            bad_set_series(build_family("diag"), n=2, delta=0.1, eps=0.1, denominators=[4], t_count=5, x_count=16)


class TestStderr:
    def test_binomial(self):
        assert binomial_stderr(50, 100) == pytest.approx(0.05)
        low, high = binomial_confidence_interval(50, 100)
        assert low == pytest.approx(0.5 - 1.959964 * 0.05)
        assert high == pytest.approx(0.5 + 1.959964 * 0.05)
        assert binomial_confidence_interval(0, 0) == (0.0, 1.0)

    def test_mean(self):
        assert mean_stderr([1.0, 2.0, 3.0]) == pytest.approx(1 / math.sqrt(3))

    def test_bootstrap(self):
        population = [0.1, 0.4, 0.2, 0.9, 0.5, 0.3, 0.7, 0.6]
        stderr = bootstrap_stderr_scipy(np.mean, population, number_experiments=200, seed=3)
        assert stderr is not None
        assert 0 < stderr < 0.2
        assert bootstrap_stderr_scipy(np.mean, [1.0]) is None
