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

"""One function per subcommand. Each takes a resolved `RunConfig` and returns a `StudyResult`; writing and printing
the result is left to the caller."""

from cocycle_lab.config import RunConfig
from cocycle_lab.domination import oseledets_classification
from cocycle_lab.errors import SpecError
from cocycle_lab.logging.hierarchical_logger import hlog, hlog_warn
from cocycle_lab.lyapunov import (
    acceleration,
    is_special_linear,
    ladder_samples,
    profile,
    rational_upper_bound_sequence,
)
from cocycle_lab.stochastic import bad_set_series, obstacle_scaling_study, slab_family
from cocycle_lab.studies.utils import StudyResult


def _profile_samples(config: RunConfig) -> list[float]:
    if config.t_values:
        return config.t_values
    return ladder_samples(config.t0, config.levels, config.base, config.side).tolist()


def cmd_profile(config: RunConfig) -> StudyResult:
    """Exponent profiles t -> L^k(t) with the individual exponents L_k and quadrature errors."""
    c = config.build_cocycle()
    prof = profile(c, _profile_samples(config), config.n, config.grid, config.num_workers)
    convexity = prof.convexity_violations()
    log_concavity = prof.log_concavity_violations()
    if convexity:
        hlog_warn(f"Convexity fails at {len(convexity)} samples: {convexity[:5]}")
    summary = {
        "samples": len(prof.t_samples),
        "dim": c.dim,
        "n": config.n,
        "grid": config.grid,
        "convexity_violations": len(convexity),
        "log_concavity_violations": len(log_concavity),
    }
    return StudyResult(name="profile", rows=prof.rows(), report=prof, summary=summary)


def cmd_accelerate(config: RunConfig) -> StudyResult:
    """Accelerations omega^k on the ladder around `base`, with their snap to multiples of 1/l."""
    c = config.build_cocycle()
    samples = ladder_samples(config.t0, config.levels, config.base, config.side).tolist()
    prof = profile(c, samples, config.n, config.grid, config.num_workers)
    report = acceleration(prof, side=config.side, base=config.base, special_linear=is_special_linear(c))
    if not report.regular:
        hlog_warn("No affine window of three samples for some k, see the `regular` fields")
    rows = []
    for entry in report.entries:
        window = entry.window or (None, None)
        rows.append(
            {
                "k": entry.k,
                "omega_upper": entry.omega_upper,
                "omega_lower": entry.omega_lower,
                "window_lo": window[0],
                "window_hi": window[1],
                "residual": entry.residual,
                "regular": entry.regular,
                "snapped": entry.snapped,
                "denominator": entry.denominator,
                "quantized": entry.quantized,
            }
        )
    summary = {
        "regular": report.regular,
        "common_denominator": report.common_denominator,
        "omega": [entry.omega_upper for entry in report.entries],
    }
    return StudyResult(name="accelerate", rows=rows, report=report, summary=summary)


def cmd_dominate(config: RunConfig) -> StudyResult:
    """Trivial, dominated or undetermined, with the passing certificate of every gap."""
    c = config.build_cocycle()
    report = oseledets_classification(c, budget=config.budget, rhos=config.rho, grid_size=config.grid)
    rows = []
    for k in report.gaps:
        cert = report.certificates.get(k)
        rows.append(
            {
                "verdict": report.verdict,
                "k": k,
                "passed": cert.passed if cert else None,
                "certified": cert.certified if cert else None,
                "n": cert.n if cert else None,
                "rho": cert.rho if cert else None,
                "worst_ratio": cert.worst_ratio if cert else None,
                "slack": cert.slack if cert else None,
            }
        )
    if not rows:
        rows.append({"verdict": report.verdict, "k": None})
    hlog(f"Verdict: {report.verdict}")
    summary = {"verdict": report.verdict, "gaps": report.gaps, "undetermined": report.undetermined}
    return StudyResult(name="dominate", rows=rows, report=report, summary=summary)


def cmd_approx(config: RunConfig) -> StudyResult:
    """
    Rational exponents along the continued fraction approximants p/q against the irrational estimate.

    Raises:
        SpecError: at a rational frequency, which has no approximant sequence to study.
    """
    c = config.build_cocycle()
    if c.freq.is_rational:
        raise SpecError(
            f"Approximant studies need an irrational frequency, got {c.freq}. Pass --freq as a float, or leave it "
            "unset for the golden mean."
        )
    t_values = config.t_values or [0.0]
    rows = rational_upper_bound_sequence(c, config.k, config.indices, t_values, config.grid, config.n)
    summary = {
        "q": [row["q"] for row in rows],
        "final_distance": rows[-1]["distance"] if rows else None,
        "final_excess": rows[-1]["excess"] if rows else None,
    }
    report = {"k": config.k, "t_values": t_values, "rows": rows}
    return StudyResult(name="approx", rows=rows, report=report, summary=summary)


def cmd_stochastic(config: RunConfig) -> StudyResult:
    """Obstacle hitting probabilities over the slab family, or bad set measures along the approximants."""
    if config.study == "obstacle":
        report = obstacle_scaling_study(
            slab_family(config.slabs), config.walks, config.step, config.seed, config.num_workers
        )
        summary = {
            "c_hat": report.c_hat,
            "c_hat_low": report.c_hat_low,
            "c_hat_stderr": report.c_hat_stderr,
            "excluded": report.excluded,
        }
        return StudyResult(name="stochastic", rows=report.rows, report=report, summary=summary)

    c = config.build_cocycle()
    series = bad_set_series(
        c,
        config.n,
        config.delta,
        config.eps,
        count=config.indices,
        t_count=config.t_count,
        x_count=config.grid,
        num_workers=config.num_workers,
    )
    summary = {
        "q": [r.q for r in series.reports],
        "measure": [r.measure for r in series.reports],
        "decay_slope": series.decay_slope,
    }
    return StudyResult(name="stochastic", rows=series.rows(), report=series, summary=summary)
