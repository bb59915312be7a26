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

""" Example run commands:
python run_cocycle_lab.py profile --family almost_mathieu --param lambda=3 --n 1000 --grid 1024 --out results/profile.csv
python run_cocycle_lab.py dominate --family constant --param 'matrix=[[32, 0], [0, 1]]' --format json
python run_cocycle_lab.py stochastic --study obstacle --slabs 0.2 0.5 1.0 --seed 7 --out results/obstacle.csv
"""
import argparse
import sys

from cocycle_lab.config import COMMANDS, default_help
from cocycle_lab.main import main
from cocycle_lab.studies import get_study


def _add_study_arguments(parser: argparse.ArgumentParser) -> None:
    # Every default is None so that unset flags fall back to the config file, then to RunConfig
    parser.add_argument("--config", type=str, default=None, help="YAML file with RunConfig values")
    # Cocycle
    parser.add_argument("--cocycle", type=str, default=None, help=default_help("cocycle"))
    parser.add_argument("--family", type=str, default=None, help=default_help("family"))
    parser.add_argument("--param", action="append", default=None, help=default_help("params"))
    parser.add_argument("--freq", type=str, default=None, help=default_help("freq"))
    parser.add_argument("--custom_families", type=str, default=None, help=default_help("custom_families"))
    # Profiles and accelerations
    parser.add_argument("--n", type=int, default=None, help=default_help("n"))
    parser.add_argument("--grid", type=int, default=None, help=default_help("grid"))
    parser.add_argument("--t0", type=float, default=None, help=default_help("t0"))
    parser.add_argument("--levels", type=int, default=None, help=default_help("levels"))
    parser.add_argument("--base", type=float, default=None, help=default_help("base"))
    parser.add_argument("--side", type=str, choices=["+", "-"], default=None, help=default_help("side"))
    parser.add_argument("--t_values", type=float, nargs="+", default=None, help=default_help("t_values"))
    parser.add_argument("--k", type=int, default=None, help=default_help("k"))
    # Domination
    parser.add_argument("--rho", type=float, nargs="+", default=None, help=default_help("rho"))
    parser.add_argument("--budget", type=int, default=None, help=default_help("budget"))
    # Approximants
    parser.add_argument("--indices", type=int, default=None, help=default_help("indices"))
    # Stochastic
    parser.add_argument("--study", type=str, choices=["obstacle", "badset"], default=None, help=default_help("study"))
    parser.add_argument("--slabs", type=float, nargs="+", default=None, help=default_help("slabs"))
    parser.add_argument("--walks", type=int, default=None, help=default_help("walks"))
    parser.add_argument("--step", type=float, default=None, help=default_help("step"))
    parser.add_argument("--seed", type=int, default=None, help=default_help("seed"))
    parser.add_argument("--delta", type=float, default=None, help=default_help("delta"))
    parser.add_argument("--eps", type=float, default=None, help=default_help("eps"))
    parser.add_argument("--t_count", type=int, default=None, help=default_help("t_count"))
    # Saving
    parser.add_argument("--out", type=str, default=None, help=default_help("out"))
    parser.add_argument("--format", type=str, choices=["csv", "json"], default=None, help=default_help("format"))
    # Common parameters
    parser.add_argument("--num_workers", type=int, default=None, help=default_help("num_workers"))
    parser.add_argument("--quiet", action="store_true", default=None, help=default_help("quiet"))


def get_parser():
    parser = argparse.ArgumentParser(description="Lyapunov exponents, accelerations and domination of analytic cocycles")
    parser.add_argument(
        "--print_defaults",
        action="store_true",
        default=False,
        help="print every knob with its default and range as a markdown table, then exit",
    )
    subparsers = parser.add_subparsers(dest="command")
    for command in COMMANDS:
        _add_study_arguments(subparsers.add_parser(command, help=get_study(command).get_doc()))
    return parser


if __name__ == "__main__":
    parser = get_parser()
    args = parser.parse_args()
    sys.exit(main(args))
