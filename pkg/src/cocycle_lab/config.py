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
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pytablewriter import MarkdownTableWriter

from cocycle_lab.cocycles.cocycle import Cocycle
from cocycle_lab.cocycles.frequency import Frequency
from cocycle_lab.cocycles.registry import build_family, load_cocycle_spec, load_custom_families
from cocycle_lab.errors import SpecError
from cocycle_lab.utils import as_list, parse_params
from cocycle_lab.utils_parallelism import available_workers


COMMANDS = ("profile", "accelerate", "dominate", "approx", "stochastic")

# knob -> (documented range, help text)
KNOBS = {
    "cocycle": ("path", "JSON cocycle spec, takes precedence over --family"),
    "family": ("registered name", "built-in or custom family"),
    "params": ("key=value", "family parameters"),
    "freq": ("float or p/q", "frequency, golden mean when unset"),
    "n": (">= 1", "iterate length"),
    "grid": (">= 8", "number of phases"),
    "t0": ("(0, 1]", "largest step of the t ladder"),
    "levels": ("2..30", "number of ladder levels"),
    "base": ("real", "base point of the t ladder"),
    "side": ("+ or -", "side of the ladder"),
    "t_values": ("list of reals", "explicit profile samples, replacing the ladder"),
    "k": ("1..d", "exterior degree"),
    "rho": ("(0, 1/4] each", "cone apertures tried by certificates"),
    "budget": (">= 1", "largest iterate length of the certificate search"),
    "indices": (">= 1", "number of continued fraction approximants"),
    "study": ("obstacle or badset", "stochastic study"),
    "slabs": ("[0, 2] each, 0 is the empty obstacle", "slab thicknesses of the obstacle study"),
    "walks": (">= 1", "Monte Carlo walks per obstacle"),
    "step": ("(0, 0.1]", "walk time step"),
    "seed": (">= 0", "random seed, mandatory for stochastic studies"),
    "delta": ("> 0", "bad set depth"),
    "eps": ("> 0", "bad set strip half width"),
    "t_count": (">= 1", "levels sampled in the bad set strip"),
    "out": ("path", "result file, stdout only when unset"),
    "format": ("csv or json", "result format"),
    "num_workers": (">= 1", "worker processes"),
    "quiet": ("flag", "only print warnings and errors"),
    "custom_families": ("path or module", "module whose FAMILIES list is registered"),
}


@dataclass
class RunConfig:
    """
    Resolved configuration of one study.

    Values come from the command line, then from the YAML file given with `--config`, then from the defaults below.
    """

    command: str = "profile"
    cocycle: Optional[str] = None
    family: str = "almost_mathieu"
    params: dict[str, Any] = field(default_factory=dict)
    freq: Optional[str] = None
    n: int = 1000
    grid: int = 1024
    t0: float = 0.1
    levels: int = 8
    base: float = 0.0
    side: str = "+"
    t_values: Optional[list[float]] = None
    k: int = 1
    rho: list[float] = field(default_factory=lambda: [1 / 4, 1 / 8, 1 / 16, 1 / 32])
    budget: int = 64
    indices: int = 6
    study: str = "obstacle"
    slabs: list[float] = field(default_factory=lambda: [0.2, 0.5, 1.0])
    walks: int = 10_000
    step: float = 1e-3
    seed: Optional[int] = None
    delta: float = 0.1
    eps: float = 0.1
    t_count: int = 41
    out: Optional[str] = None
    format: str = "csv"
    num_workers: int = field(default_factory=available_workers)
    quiet: bool = False
    custom_families: Optional[str] = None

    def __post_init__(self):  # noqa: C901
        if self.command not in COMMANDS:
            raise SpecError(f"Unknown command {self.command!r}, expected one of {COMMANDS}")
        self.rho = [float(r) for r in as_list(self.rho)]
        self.slabs = [float(s) for s in as_list(self.slabs)]
        if self.t_values is not None:
            self.t_values = [float(t) for t in as_list(self.t_values)]
        checks = [
            (self.n >= 1, "n must be >= 1"),
            (self.grid >= 8, "grid must be >= 8"),
            (2 <= self.levels <= 30, "levels must lie in 2..30"),
            (0 < self.t0 <= 1, "t0 must lie in (0, 1]"),
            (self.side in ("+", "-"), "side must be + or -"),
            (self.k >= 1, "k must be >= 1"),
            (len(self.rho) > 0 and all(0 < r <= 0.25 for r in self.rho), "every rho must lie in (0, 1/4]"),
            (self.budget >= 1, "budget must be >= 1"),
            (self.indices >= 1, "indices must be >= 1"),
            (self.study in ("obstacle", "badset"), "study must be obstacle or badset"),
            (all(0 <= s <= 2 for s in self.slabs), "every slab thickness must lie in [0, 2]"),
            (self.walks >= 1, "walks must be >= 1"),
            (0 < self.step <= 0.1, "step must lie in (0, 0.1]"),
            (self.delta > 0, "delta must be > 0"),
            (self.eps > 0, "eps must be > 0"),
            (self.t_count >= 1, "t_count must be >= 1"),
            (self.format in ("csv", "json"), "format must be csv or json"),
            (self.num_workers >= 1, "num_workers must be >= 1"),
            (self.seed is None or self.seed >= 0, "seed must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise SpecError(message)
        if self.command == "stochastic" and self.seed is None:
            raise SpecError("Stochastic studies need an explicit --seed")

    def frequency(self) -> Frequency:
        return Frequency.golden() if self.freq is None else Frequency.parse(self.freq)

    def build_cocycle(self) -> Cocycle:
        """The cocycle from `--cocycle` when given, else the family at the configured frequency."""
        if self.custom_families:
            load_custom_families(self.custom_families)
        if self.cocycle is not None:
            c = load_cocycle_spec(self.cocycle)
            return c if self.freq is None else c.with_frequency(self.frequency())
        return build_family(self.family, self.params, self.frequency())

    def as_dict(self) -> dict:
        return asdict(self)


def load_yaml_config(path: Union[str, Path]) -> dict:
    """
    Raises:
        SpecError: if the file is unreadable, not a mapping, or has unknown keys.
    """
    try:
        with open(path) as f:
            content = yaml.safe_load(f) or {}
    except OSError as e:
        raise SpecError(f"Cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise SpecError(f"Config file {path} is not valid YAML: {e}") from e
    if not isinstance(content, dict):
        raise SpecError(f"Config file {path} must hold a mapping")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(content) - known)
    if unknown:
        raise SpecError(f"Unknown config keys {unknown}")
    return content


def create_run_config(args: Namespace) -> RunConfig:
    """
    Create a run configuration from the parsed command line.

    Args:
        args (Namespace): command-line arguments; unset flags are None.

    Returns:
        RunConfig: flags override the YAML config file, which overrides the defaults.
    """
    values = {}
    if getattr(args, "config", None):
        values.update(load_yaml_config(args.config))
    yaml_params = dict(values.get("params") or {})
    for f in fields(RunConfig):
        if f.name == "params":
            continue
        value = getattr(args, f.name, None)
        if value is not None and value is not False:
            values[f.name] = value
    values["params"] = {**yaml_params, **parse_params(getattr(args, "param", None))}
    return RunConfig(**values)


def render_defaults_markdown() -> str:
    """Reference page: every knob with its default and documented range."""
    defaults = RunConfig()
    writer = MarkdownTableWriter()
    writer.headers = ["Knob", "Default", "Range", "Description"]
    writer.value_matrix = [
        [name, repr(getattr(defaults, name)), documented_range, description]
        for name, (documented_range, description) in KNOBS.items()
    ]
    return writer.dumps()


def default_help(name: str) -> str:
    """Help string of a flag, with its default value and range."""
    documented_range, description = KNOBS[name]
    default = next(f for f in fields(RunConfig) if f.name == name)
    value = default.default_factory() if callable(default.default_factory) else default.default
    return f"{description} (default: {value!r}, range: {documented_range})"
