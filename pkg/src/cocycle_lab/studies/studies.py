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

from aenum import Enum

from cocycle_lab.errors import SpecError
from cocycle_lab.studies.commands import cmd_accelerate, cmd_approx, cmd_dominate, cmd_profile, cmd_stochastic
from cocycle_lab.studies.utils import Study, StudyCategory


class Studies(Enum):
    accelerate = Study(name="accelerate", category=StudyCategory.DETERMINISTIC, run_fn=cmd_accelerate)
    approx = Study(name="approx", category=StudyCategory.DETERMINISTIC, run_fn=cmd_approx)
    dominate = Study(name="dominate", category=StudyCategory.DETERMINISTIC, run_fn=cmd_dominate)
    profile = Study(name="profile", category=StudyCategory.DETERMINISTIC, run_fn=cmd_profile)
    stochastic = Study(name="stochastic", category=StudyCategory.STOCHASTIC, run_fn=cmd_stochastic)

    def __str__(self):
        return self.name.replace("_", " ").capitalize()

    @staticmethod
    def all_studies():
        return [study.value.name for study in Studies]


def get_study(name: str) -> Study:
    """
    Raises:
        SpecError: if no study has this name.
    """
    try:
        return Studies[name].value
    except KeyError as e:
        raise SpecError(f"Unknown study {name!r}, expected one of {Studies.all_studies()}") from e
