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

from dataclasses import asdict, is_dataclass
from typing import Any, Iterable

import numpy as np
from art import text2art
from pytablewriter import MarkdownTableWriter


def flatten_dict(nested: dict, sep: str = "/") -> dict:
    """
    Flattens nested dicts into `outer/inner` keys. Sequences holding containers are expanded by index, flat
    sequences and arrays stay one value.
    """
    flat: dict[str, Any] = {}

    def visit(value: Any, key: str) -> None:
        if is_dataclass(value) and not isinstance(value, type):
            value = asdict(value)
        if isinstance(value, dict):
            for inner in sorted(value, key=str):
                visit(value[inner], f"{key}{sep}{inner}" if key else str(inner))
        elif isinstance(value, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) for v in value):
            for i, item in enumerate(value):
                visit(item, f"{key}{sep}{i}")
        elif isinstance(value, np.ndarray):
            flat[key] = value.tolist()
        else:
            flat[key] = value

    visit(nested, "")
    return flat


def _summary_cell(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return f"{value:.6g}"
    # pipes and newlines break the markdown table
    return str(value).replace("|", "/").replace("\n", " ")


def obj_to_markdown(obj: Any) -> str:
    """Two column Key / Value markdown table of a dict or dataclass, nested keys joined by `/`."""
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = asdict(obj)
    writer = MarkdownTableWriter()
    writer.headers = ["Key", "Value"]
    writer.value_matrix = [[key, _summary_cell(value)] for key, value in flatten_dict(obj).items()]
    return writer.dumps()


def as_list(item: Any) -> list:
    """Wraps a scalar in a list; tuples, arrays and other iterables (strings excepted) are converted."""
    if isinstance(item, np.ndarray):
        return item.tolist()
    if isinstance(item, Iterable) and not isinstance(item, (str, bytes, dict)):
        return list(item)
    return [item]


def parse_params(pairs: list[str] | None) -> dict[str, str]:
    """Parses repeated `key=value` command line parameters into a dict, later keys win.

    Raises:
        ValueError: if an entry has no `=`.
    """
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"Parameter {pair!r} is not of the form key=value")
        params[key.strip()] = value.strip()
    return params


def print_cocycle_lab_text_art(command: str | None = None) -> None:
    """Banner printed before runs that write to a file."""
    banner = text2art("cocycle lab", font="standard")
    print(banner if command is None else f"{banner}{command}\n")
