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

import math
from dataclasses import dataclass
from functools import lru_cache

from cocycle_lab.errors import SpecError
from cocycle_lab.logging.hierarchical_logger import hlog_warn


GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0
# remainders below this are treated as an exact end of the expansion
REMAINDER_FLOOR = 1e-12
# beyond this denominator |alpha - p/q| ~ 1/q^2 drops under the resolution of a double
MAX_DENOMINATOR = 2**26
# more partial quotients than any double carries
MAX_TERMS = 64


@dataclass(frozen=True)
class Approximant:
    """
    Continued fraction convergent p/q of a frequency.

    Attributes:
        p (int): numerator.
        q (int): denominator.
        q_prev (int): denominator of the previous convergent, the q' of the bad set estimates.
    """

    p: int
    q: int
    q_prev: int

    @property
    def value(self) -> float:
        return self.p / self.q


@dataclass(frozen=True)
class Frequency:
    """
    Rotation number alpha in [0, 1).

    Rational frequencies carry the reduced fraction p/q; irrational ones are plain doubles whose continued fraction
    expansion is computed on demand and cached.
    """

    value: float
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        if (self.p is None) != (self.q is None):
            raise SpecError("A rational frequency needs both p and q")
        if self.p is not None:
            if self.q < 1 or math.gcd(self.p, self.q) != 1 or not 0 <= self.p < self.q:
                raise SpecError(f"{self.p}/{self.q} is not a reduced fraction in [0, 1)")
        if not 0.0 <= self.value < 1.0 or not math.isfinite(self.value):
            raise SpecError(f"Frequency value {self.value} is not in [0, 1)")

    @classmethod
    def rational(cls, p: int, q: int) -> "Frequency":
        p, q = int(p), int(q)
        if q < 1:
            raise SpecError(f"Denominator must be positive, got {q}")
        p %= q
        g = math.gcd(p, q)
        p, q = p // g, q // g
        return cls(value=p / q, p=p, q=q)

    @classmethod
    def irrational(cls, value: float) -> "Frequency":
        return cls(value=float(value) % 1.0)

    @classmethod
    def golden(cls) -> "Frequency":
        return cls.irrational(GOLDEN_MEAN)

    @classmethod
    def parse(cls, text: str) -> "Frequency":
        """`"p/q"` gives a rational frequency, anything else is read as a float."""
        text = str(text).strip()
        if "/" in text:
            numerator, _, denominator = text.partition("/")
            try:
                return cls.rational(int(numerator), int(denominator))
            except ValueError as e:
                raise SpecError(f"Cannot read frequency {text!r}: {e}") from e
        try:
            return cls.irrational(float(text))
        except ValueError as e:
            raise SpecError(f"Cannot read frequency {text!r}") from e

    @property
    def is_rational(self) -> bool:
        return self.q is not None

    @property
    def kind(self) -> str:
        return "rational" if self.is_rational else "irrational"

    def to_spec(self) -> dict:
        if self.is_rational:
            return {"kind": "rational", "p": self.p, "q": self.q}
        return {"kind": "irrational", "value": self.value}

    def __str__(self) -> str:
        return f"{self.p}/{self.q}" if self.is_rational else repr(self.value)


@lru_cache(maxsize=128)
def _convergents(value: float, count: int) -> tuple[tuple[Approximant, ...], bool]:
    """Euclid's algorithm on the double `value`. Returns the convergents from the first partial quotient on and
    whether the expansion was cut short."""
    a0 = math.floor(value)
    remainder = value - a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    found = []
    while len(found) < count:
        if remainder < REMAINDER_FLOOR:
            return tuple(found), True
        x = 1.0 / remainder
        a = math.floor(x)
        remainder = x - a
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > MAX_DENOMINATOR:
            return tuple(found), True
        found.append(Approximant(p=p, q=q, q_prev=q_prev))
    return tuple(found), False


def approximants(freq: Frequency, count: int) -> list[Approximant]:
    """
    The first `count` continued fraction convergents p_n/q_n of an irrational frequency, starting from the first
    partial quotient, so the denominators are strictly increasing. Each convergent satisfies
    |q_n alpha - p_n| < 1/q_{n+1}.

    When the double is indistinguishable from a rational number the list stops early with a warning.

    Raises:
        SpecError: for a rational frequency.
    """
    if freq.is_rational:
        raise SpecError(f"Approximants are defined for irrational frequencies, got {freq}")
    if count < 1:
        return []
    found, truncated = _convergents(freq.value, count)
    if truncated:
        hlog_warn(
            f"Continued fraction of {freq.value!r} truncated after {len(found)} terms: "
            "the double cannot be told apart from a rational number beyond this point."
        )
    return list(found)


def approximants_up_to(freq: Frequency, max_denominator: int) -> list[Approximant]:
    """
    The convergents with q <= `max_denominator`. Unlike [`approximants`] this only warns when the expansion is cut
    short before reaching that bound.

    Raises:
        SpecError: for a rational frequency.
    """
    if freq.is_rational:
        raise SpecError(f"Approximants are defined for irrational frequencies, got {freq}")
    found, truncated = _convergents(freq.value, MAX_TERMS)
    within = [a for a in found if a.q <= max_denominator]
    if truncated and len(within) == len(found):
        hlog_warn(
            f"Continued fraction of {freq.value!r} truncated at q={found[-1].q if found else 1}, "
            f"below the requested bound {max_denominator}."
        )
    return within
