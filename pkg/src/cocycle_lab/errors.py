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

"""Exceptions raised by the library.

User-facing problems (bad inputs, degenerate geometry) subclass `ValueError` and map to exit code 2 in the
command line front end. Overflow of the numerical range subclasses `ArithmeticError` and maps to exit code 3.
"""

NO_DOMINATION_MSG = (
    "The section iteration did not settle. The cocycle is probably not dominated at this index, "
    "try a larger number of iterations or run the `dominate` study first."
)
SHIFT_OVERFLOW_MSG = "Reduce the imaginary shift t or the degree N of the map."


class CocycleLabError(Exception):
    """Base class of every error raised by cocycle_lab."""


class SpecError(CocycleLabError, ValueError):
    """Invalid cocycle spec file, family name, family parameter or config value."""


class DimensionError(CocycleLabError, ValueError):
    pass


class ExteriorDegreeError(CocycleLabError, ValueError):
    pass


class DegenerateGapError(CocycleLabError, ValueError):
    """Raised when sigma_k and sigma_{k+1} cannot be told apart."""


class NormalizationError(CocycleLabError, ValueError):
    pass


class TransversalityError(CocycleLabError, ValueError):
    pass


class LiftError(CocycleLabError, ValueError):
    pass


class RefineError(CocycleLabError, ValueError):
    """The phase grid is too coarse to follow an argument."""


class ConvergenceError(CocycleLabError, ValueError):
    pass


class NumericRangeError(CocycleLabError, ArithmeticError):
    """A computation left the range of double precision numbers."""
