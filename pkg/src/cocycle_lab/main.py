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

from argparse import Namespace

from cocycle_lab.config import create_run_config, render_defaults_markdown
from cocycle_lab.errors import NumericRangeError
from cocycle_lab.logging.hierarchical_logger import hlog, hlog_err, hlog_important, htrack, htrack_block, set_verbosity
from cocycle_lab.logging.study_tracker import StudyTracker
from cocycle_lab.studies import get_study
from cocycle_lab.utils import obj_to_markdown, print_cocycle_lab_text_art


EXIT_OK = 0
EXIT_USER_ERROR = 2
EXIT_NUMERIC_ERROR = 3


@htrack()
def run_study(args: Namespace) -> dict:
    """Resolves the configuration, runs the requested study and writes its result. Returns the final run dict."""
    with htrack_block("Creating run configuration"):
        config = create_run_config(args)
        set_verbosity(config.quiet)
        study_tracker = StudyTracker()
        study_tracker.general_config_logger.log_config(config.command, config.as_dict())

    if config.out is not None and not config.quiet:
        with htrack_block("Starting study"):
            print_cocycle_lab_text_art(config.command)

    study = get_study(config.command)
    with htrack_block(f"Running {config.command}"):
        hlog(f"{study.category.name.lower()} study, using {config.num_workers} worker(s)")
        result = study.run(config)

    with htrack_block("Saving results"):
        content = study_tracker.save(result.rows, result.report, result.summary, config.format, config.out)
        final_dict = study_tracker.generate_final_dict()

    summary_table = obj_to_markdown(result.summary)
    if config.out is None:
        # stdout carries the result itself
        print(content, end="")
        hlog("\n" + summary_table)
    else:
        hlog_important(f"Results hash {final_dict['results']['hash_result']}")
        print(summary_table)
    return final_dict


def main(args: Namespace) -> int:
    """
    Entry point of the command line. Returns the process exit code: 0 on success, 2 for user errors (bad spec,
    config or input file) and 3 for numeric range failures.
    """
    if getattr(args, "print_defaults", False):
        print(render_defaults_markdown())
        return EXIT_OK
    if getattr(args, "command", None) is None:
        hlog_err("No command given, expected one of profile, accelerate, dominate, approx, stochastic")
        return EXIT_USER_ERROR
    try:
        run_study(args)
    except (NumericRangeError, FloatingPointError, OverflowError) as e:
        hlog_err(f"Numeric range failure: {e}")
        return EXIT_NUMERIC_ERROR
    except (ValueError, OSError) as e:
        hlog_err(f"Error: {e}")
        return EXIT_USER_ERROR
    return EXIT_OK
