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

from cocycle_lab.cocycles.cocycle import Cocycle, exterior_cocycle, iterate, scaled_iterate
from cocycle_lab.cocycles.frequency import Approximant, Frequency, approximants, approximants_up_to
from cocycle_lab.cocycles.registry import (
    CocycleFamily,
    Families,
    build_family,
    cocycle_from_spec,
    cocycle_to_spec,
    load_cocycle_spec,
    load_custom_families,
)
from cocycle_lab.cocycles.trig_poly import TrigMatrixPoly, evaluate, perturb, shift_imag


__all__ = [
    "Approximant",
    "Cocycle",
    "CocycleFamily",
    "Families",
    "Frequency",
    "TrigMatrixPoly",
    "approximants",
    "approximants_up_to",
    "build_family",
    "cocycle_from_spec",
    "cocycle_to_spec",
    "evaluate",
    "exterior_cocycle",
    "iterate",
    "load_cocycle_spec",
    "load_custom_families",
    "perturb",
    "scaled_iterate",
    "shift_imag",
]
