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

from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Callable


class StudyCategory(Enum):
    DETERMINISTIC = auto()
    STOCHASTIC = auto()


@dataclass
class StudyResult:
    """
    Output of one study.

    Attributes:
        name (str): the command that produced it.
        rows (list[dict]): flat records, written when the format is CSV.
        report (Any): the full nested report, written when the format is JSON.
        summary (dict): a few headline numbers, logged and printed as a table.
    """

    name: str
    rows: list[dict]
    report: Any
    summary: dict = field(default_factory=dict)


@dataclass
class Study:
    name: str
    category: StudyCategory
    run_fn: Callable[..., StudyResult]

    def get_doc(self) -> str:
        """First line of the study docstring, used as the subcommand help."""
        doc = (self.run_fn.__doc__ or "").strip()
        return doc.splitlines()[0] if doc else ""

    def run(self, config) -> StudyResult:
        return self.run_fn(config)
