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

import importlib
import importlib.util
import json
from dataclasses import dataclass, field
from pathlib import Path
from pprint import pformat
from types import ModuleType
from typing import Any, Callable, Union

import numpy as np
from aenum import Enum, extend_enum

from cocycle_lab.cocycles.cocycle import Cocycle
from cocycle_lab.cocycles.frequency import Frequency
from cocycle_lab.cocycles.trig_poly import TrigMatrixPoly
from cocycle_lab.errors import SpecError
from cocycle_lab.logging.hierarchical_logger import hlog, hlog_warn


@dataclass
class CocycleFamily:
    """
    A named parametric family of maps.

    Attributes:
        name (str): registry key, used by `--family`.
        builder (Callable[[dict], TrigMatrixPoly]): receives the parameters merged over `defaults`.
        defaults (dict): every accepted parameter with its default value; the type of the default is the type
            command line strings are converted to.
        doc (str): one line description shown in the reference page.
    """

    name: str
    builder: Callable[[dict], TrigMatrixPoly]
    defaults: dict[str, Any] = field(default_factory=dict)
    doc: str = ""

    def build(self, params: dict[str, Any] | None = None) -> TrigMatrixPoly:
        params = dict(params or {})
        unknown = sorted(set(params) - set(self.defaults))
        if unknown:
            raise SpecError(
                f"Family {self.name} does not take parameters {unknown}, accepted: {sorted(self.defaults)}"
            )
        merged = dict(self.defaults)
        for key, value in params.items():
            merged[key] = _coerce(self.name, key, value, self.defaults[key])
        return self.builder(merged)


def _coerce(family: str, key: str, value: Any, default: Any) -> Any:
    try:
        if isinstance(default, bool):
            return str(value).lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
    except ValueError as e:
        raise SpecError(f"Parameter {key}={value!r} of family {family} is not a {type(default).__name__}") from e
    return value


def _parse_matrix(text: Any, family: str) -> np.ndarray:
    try:
        matrix = np.asarray(json.loads(text) if isinstance(text, str) else text, dtype=np.complex128)
    except (ValueError, TypeError) as e:
        raise SpecError(f"Family {family}: cannot read matrix {text!r}") from e
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SpecError(f"Family {family}: expected a square matrix, got shape {matrix.shape}")
    return matrix


def _almost_mathieu(params: dict) -> TrigMatrixPoly:
    energy, coupling = params["E"], params["lambda"]
    cosine_part = np.array([[-coupling / 2, 0.0], [0.0, 0.0]])
    return TrigMatrixPoly.from_dict({-1: cosine_part, 0: np.array([[energy, -1.0], [1.0, 0.0]]), 1: cosine_part})


def _diag(params: dict) -> TrigMatrixPoly:
    try:
        entries = [complex(entry) for entry in str(params["entries"]).split(",")]
    except ValueError as e:
        raise SpecError(f"Family diag: cannot read entries {params['entries']!r}") from e
    return TrigMatrixPoly.constant(np.diag(entries))


def _identity(params: dict) -> TrigMatrixPoly:
    if params["dim"] < 1:
        raise SpecError("Family identity: dim must be positive")
    return TrigMatrixPoly.constant(np.eye(params["dim"]))


def _constant(params: dict) -> TrigMatrixPoly:
    return TrigMatrixPoly.constant(_parse_matrix(params["matrix"], "constant"))


def _scalar_winding(params: dict) -> TrigMatrixPoly:
    winding = params["winding"]
    return TrigMatrixPoly.from_dict({winding: np.array([[params["scale"]]])}, dim=1)


def _rotation(params: dict) -> TrigMatrixPoly:
    upper = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    return TrigMatrixPoly.from_dict({-1: upper.conj(), 0: np.zeros((2, 2)), 1: upper})


def _random_trig(params: dict) -> TrigMatrixPoly:
    dim, degree = params["dim"], params["degree"]
    if dim < 1 or degree < 0:
        raise SpecError("Family random_trig: dim must be positive and degree nonnegative")
    rng = np.random.default_rng(params["seed"])
    shape = (2 * degree + 1, dim, dim)
    coefficients = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    decay = np.exp(-np.abs(np.arange(-degree, degree + 1)))
    return TrigMatrixPoly(params["scale"] * coefficients * decay[:, None, None])


class Families(Enum):
    almost_mathieu = CocycleFamily(
        name="almost_mathieu",
        builder=_almost_mathieu,
        defaults={"E": 0.0, "lambda": 3.0},
        doc="Schrodinger cocycle [[E - lambda cos 2 pi x, -1], [1, 0]]",
    )
    diag = CocycleFamily(
        name="diag",
        builder=_diag,
        defaults={"entries": "2,1"},
        doc="constant diagonal map, entries given as a comma separated list",
    )
    identity = CocycleFamily(name="identity", builder=_identity, defaults={"dim": 2}, doc="constant identity")
    constant = CocycleFamily(
        name="constant",
        builder=_constant,
        defaults={"matrix": "[[2, 1], [0, 1]]"},
        doc="constant map given as a JSON matrix",
    )
    scalar_winding = CocycleFamily(
        name="scalar_winding",
        builder=_scalar_winding,
        defaults={"winding": 1, "scale": 1.0},
        doc="scalar map scale * exp(2 pi i winding x)",
    )
    rotation = CocycleFamily(name="rotation", builder=_rotation, defaults={}, doc="rotation by the angle 2 pi x")
    random_trig = CocycleFamily(
        name="random_trig",
        builder=_random_trig,
        defaults={"dim": 2, "degree": 1, "seed": 0, "scale": 1.0},
        doc="complex Gaussian coefficients with exp(-|j|) decay",
    )

    def __str__(self):
        return self.name


def get_family(name: str) -> CocycleFamily:
    """
    Raises:
        SpecError: for an unknown family name.
    """
    try:
        return Families[name].value
    except KeyError:
        hlog_warn(f"{name} not found in available families")
        hlog_warn(pformat(sorted(member.name for member in Families)))
        raise SpecError(f"Cannot find family {name}")


def build_family(name: str, params: dict | None = None, freq: Frequency | None = None) -> Cocycle:
    """Family `name` with `params` at frequency `freq` (the golden mean by default)."""
    return Cocycle(freq or Frequency.golden(), get_family(name).build(params))


def create_custom_families_module(custom_families: Union[str, Path, ModuleType]) -> ModuleType:
    """Imports a module defining extra families, from a file path or a module name."""
    if isinstance(custom_families, ModuleType):
        return custom_families
    if isinstance(custom_families, (str, Path)) and Path(custom_families).exists():
        spec = importlib.util.spec_from_file_location(Path(custom_families).stem, custom_families)
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        return module
    if isinstance(custom_families, str):
        return importlib.import_module(custom_families)
    raise SpecError(f"Cannot import custom families from {custom_families}")


def load_custom_families(custom_families: Union[str, Path, ModuleType]) -> list[str]:
    """
    Registers every `CocycleFamily` listed in the `FAMILIES` attribute of the given module. Names already
    registered are skipped with a warning.

    Returns:
        list[str]: names of the newly registered families.
    """
    module = create_custom_families_module(custom_families)
    added = []
    for family in getattr(module, "FAMILIES", []):
        if family.name in Families.__members__:
            hlog_warn(f"Family {family.name} is already registered, keeping the existing one")
            continue
        extend_enum(Families, family.name, family)
        added.append(family.name)
    hlog(f"Registered custom families {added}")
    return added


def cocycle_from_spec(spec: dict) -> Cocycle:
    """
    Reads the JSON cocycle description
    {"dim": d, "freq": {"kind": "irrational", "value": a} | {"kind": "rational", "p": p, "q": q},
     "coeffs": [{"j": j, "re": [[...]], "im": [[...]]}, ...]}.
    """
    try:
        dim = int(spec["dim"])
        freq_spec = spec["freq"]
        kind = freq_spec["kind"]
        if kind == "irrational":
            freq = Frequency.irrational(float(freq_spec["value"]))
        elif kind == "rational":
            freq = Frequency.rational(int(freq_spec["p"]), int(freq_spec["q"]))
        else:
            raise SpecError(f"Unknown frequency kind {kind!r}")
        coefficients = {}
        for entry in spec["coeffs"]:
            real = np.asarray(entry["re"], dtype=float)
            imag = np.asarray(entry.get("im", np.zeros_like(real)), dtype=float)
            if real.shape != (dim, dim) or imag.shape != (dim, dim):
                raise SpecError(f"Coefficient j={entry['j']} is not {dim} x {dim}")
            j = int(entry["j"])
            coefficients[j] = coefficients.get(j, 0) + real + 1j * imag
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SpecError):
            raise
        raise SpecError(f"Malformed cocycle spec: {e!r}") from e
    if dim < 1:
        raise SpecError("Cocycle dimension must be positive")
    return Cocycle(freq, TrigMatrixPoly.from_dict(coefficients, dim=dim))


def load_cocycle_spec(path: Union[str, Path]) -> Cocycle:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as e:
        raise SpecError(f"Cannot read cocycle spec {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecError(f"Cocycle spec {path} is not valid JSON: {e}") from e
    return cocycle_from_spec(spec)


def cocycle_to_spec(c: Cocycle) -> dict:
    return {
        "dim": c.dim,
        "freq": c.freq.to_spec(),
        "coeffs": [
            {"j": int(j), "re": matrix.real.tolist(), "im": matrix.imag.tolist()}
            for j, matrix in zip(c.poly.modes, c.poly.coefficients)
        ],
    }
