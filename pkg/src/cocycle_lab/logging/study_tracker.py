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

import csv
import io
import json
import math
from dataclasses import asdict, fields, is_dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from cocycle_lab.logging.hierarchical_logger import hlog
from cocycle_lab.logging.info_loggers import GeneralConfigLogger, ResultsLogger
from cocycle_lab.lyapunov import NegativeInfinity


def to_serializable(o: Any) -> Any:
    """
    Recursively converts a report into JSON types: dataclasses to dicts, numpy values to Python ones, complex
    numbers to [re, im], and non finite floats (including the -inf marker) to the strings "inf", "-inf", "nan".
    """
    if isinstance(o, NegativeInfinity):
        return "-inf"
    if is_dataclass(o) and not isinstance(o, type):
        return {f.name: to_serializable(getattr(o, f.name)) for f in fields(o)}
    if isinstance(o, dict):
        return {str(k): to_serializable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [to_serializable(v) for v in o]
    if isinstance(o, np.ndarray):
        return [to_serializable(v) for v in o.tolist()]
    if isinstance(o, np.generic):
        return to_serializable(o.item())
    if isinstance(o, complex):
        return [to_serializable(o.real), to_serializable(o.imag)]
    if isinstance(o, float) and not math.isfinite(o):
        return repr(o)
    return o


class EnhancedJSONEncoder(json.JSONEncoder):
    """
    Provides a proper json encoding for the loggers and trackers json dumps.
    Notably manages the json encoding of dataclasses and of the -inf marker.
    """

    def default(self, o):
        if is_dataclass(o) or isinstance(o, (NegativeInfinity, np.ndarray, np.generic, complex)):
            return to_serializable(o)
        return super().default(o)


def format_cell(value: Any) -> str:
    """CSV cell: shortest round trip repr for floats, `-inf` for the marker, empty for None."""
    if value is None:
        return ""
    if isinstance(value, NegativeInfinity):
        return "-inf"
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(rows: list[dict]) -> str:
    """Header then rows, columns in first seen order."""
    columns: list[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(report: Any) -> str:
    return json.dumps(to_serializable(report), cls=EnhancedJSONEncoder, sort_keys=True, indent=2) + "\n"


class StudyTracker:
    """
    Keeps track of a study run: the general configuration ([`GeneralConfigLogger`]) and the fingerprint of the
    written results ([`ResultsLogger`]).

    The result file only holds deterministic content. Timings and the commit sha go to the `<out>.run.json`
    sidecar.
    """

    general_config_logger: GeneralConfigLogger
    results_logger: ResultsLogger

    def __init__(self) -> None:
        self.general_config_logger = GeneralConfigLogger()
        self.results_logger = ResultsLogger()

    def save(self, rows: list[dict], report: Any, summary: dict, fmt: str, out: Optional[str] = None) -> str:
        """Renders the result as CSV (`rows`) or JSON (`report`), writes it to `out` when given, and returns it.

        Raises:
            OSError: if the output cannot be written.
        """
        if fmt == "csv":
            content = render_csv(rows)
        elif fmt == "json":
            content = render_json(report)
        else:
            raise ValueError(f"Unknown output format {fmt!r}")

        self.results_logger.log(path=out, fmt=fmt, content=content, row_count=len(rows), summary=summary)
        self.general_config_logger.log_end_time()
        if out is not None:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="") as f:
                f.write(content)
            sidecar = path.with_name(path.name + ".run.json")
            with open(sidecar, "w") as f:
                f.write(json.dumps(self.generate_final_dict(), cls=EnhancedJSONEncoder, sort_keys=True, indent=2))
            hlog(f"Saved results to {path} and run information to {sidecar}")
        return content

    def generate_final_dict(self) -> dict:
        """Aggregates the run information in a dictionary."""
        return {
            "config_general": to_serializable(asdict(self.general_config_logger)),
            "results": to_serializable(asdict(self.results_logger)),
        }
