"""Exponent arithmetic on the extended half-line (0, inf].

Exponents built from ints, ``Fraction`` or decimal/rational strings are kept
exact; exponents built from Python floats stay floats.  Infinity is its own
value (``INF``), never ``float('inf')`` internally, and the only arithmetic
allowed on it is the one with a determinate answer (``1/inf = 0``,
``inf * c = inf`` for ``c > 0``, ...).

Indices are 0-based throughout the library: a permutation ``sigma`` is a
tuple such as ``(1, 0, 2)`` and failing positions are reported 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Iterable, Sequence, Union

Finite = Union[Fraction, float]


class ExponentError(ValueError):
    """Raised for exponents outside their domain or undefined arithmetic."""


def _coerce_finite(value) -> Finite:
    if isinstance(value, bool):
        raise ExponentError(f"not an exponent: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if math.isnan(value):
            raise ExponentError("exponent is NaN")
        return value
    raise ExponentError(f"not an exponent: {value!r}")


@total_ordering
class ExtReal:
    """A positive real number or infinity."""

    __slots__ = ("_v",)

    def __init__(self, value):
        if isinstance(value, ExtReal):
            self._v = value._v
            return
        if isinstance(value, str):
            self._v = _parse(value)._v
            return
        if isinstance(value, float) and math.isinf(value):
            if value < 0:
                raise ExponentError("exponent must be positive, got -inf")
            self._v = None
            return
        v = _coerce_finite(value)
        if v <= 0:
            raise ExponentError(f"exponent must be positive, got {value!r}")
        self._v = v

    @classmethod
    def inf(cls) -> "ExtReal":
        obj = cls.__new__(cls)
        obj._v = None
        return obj

    @classmethod
    def from_reciprocal(cls, s) -> "ExtReal":
        """The exponent ``t`` with ``1/t = s``; ``s = 0`` gives infinity."""
        s = _coerce_finite(s)
        if s < 0:
            raise ExponentError(f"negative reciprocal {s!r}")
        if s == 0:
            return cls.inf()
        return cls(1 / s)

    @property
    def is_inf(self) -> bool:
        return self._v is None

    @property
    def is_exact(self) -> bool:
        return self._v is None or isinstance(self._v, Fraction)

    @property
    def value(self) -> Finite:
        if self._v is None:
            raise ExponentError("infinite exponent has no finite value")
        return self._v

    def reciprocal(self) -> Finite:
        if self._v is None:
            return Fraction(0)
        return 1 / self._v

    def __float__(self) -> float:
        return math.inf if self._v is None else float(self._v)

    def _other(self, other):
        if isinstance(other, ExtReal):
            return other
        try:
            return ExtReal(other)
        except ExponentError:
            return None

    def __eq__(self, other):
        if not isinstance(other, ExtReal):
            if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
                if isinstance(other, float) and math.isinf(other):
                    return self._v is None and other > 0
                return self._v is not None and self._v == other
            return NotImplemented
        return self._v == other._v

    def __lt__(self, other):
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, ExtReal):
            if isinstance(other, float) and math.isinf(other):
                return other > 0 and self._v is not None
            return self._v is not None and self._v < other
        if not isinstance(other, ExtReal):
            return NotImplemented
        if self._v is None:
            return False
        if other._v is None:
            return True
        return self._v < other._v

    def __hash__(self):
        return hash(("ExtReal", self._v))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self._v is None or o._v is None:
            return ExtReal.inf()
        return ExtReal(self._v * o._v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o._v is None:
            raise ExponentError(f"{self} / inf is not an exponent")
        if self._v is None:
            return ExtReal.inf()
        return ExtReal(self._v / o._v)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __repr__(self):
        return f"ExtReal({self})"

    def __str__(self):
        if self._v is None:
            return "inf"
        if isinstance(self._v, Fraction):
            return str(self._v)
        return repr(self._v)

    def to_json(self):
        """JSON value: a number, ``"inf"``, or ``"a/b"`` for non-integer rationals."""
        if self._v is None:
            return "inf"
        if isinstance(self._v, Fraction):
            if self._v.denominator == 1:
                return self._v.numerator
            return f"{self._v.numerator}/{self._v.denominator}"
        return self._v


INF = ExtReal.inf()


def _parse(text: str) -> ExtReal:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "oo", "∞"):
        return ExtReal.inf()
    try:
        v = Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ExponentError(f"cannot parse exponent {text!r}") from None
    return ExtReal(v)


def ext(value) -> ExtReal:
    return value if isinstance(value, ExtReal) else ExtReal(value)


def from_json(value) -> ExtReal:
    if isinstance(value, str):
        return _parse(value)
    return ExtReal(value)


def parse_list(text: str) -> tuple[ExtReal, ...]:
    """Parse ``"4,4/3,inf"`` into exponents."""
    parts = [s for s in text.split(",")]
    if not parts or any(not s.strip() for s in parts):
        raise ExponentError(f"malformed exponent list {text!r}")
    return tuple(_parse(s) for s in parts)


# -- validated tuples --------------------------------------------------------

Spaces = tuple  # tuple[ExtReal, ...], each >= 1
Exponents = tuple  # tuple[ExtReal, ...], each > 0
Perm = tuple  # tuple[int, ...], 0-based bijection


def as_spaces(p: Iterable) -> Spaces:
    out = tuple(ext(v) for v in p)
    if not out:
        raise ExponentError("need at least one space exponent")
    for i, v in enumerate(out):
        if v < 1:
            raise ExponentError(f"p[{i}] = {v} is below 1")
    return out


def as_exponents(q: Iterable) -> Exponents:
    out = tuple(ext(v) for v in q)
    if not out:
        raise ExponentError("need at least one exponent")
    return out


def as_perm(sigma: Sequence[int] | None, m: int) -> Perm:
    if sigma is None:
        return tuple(range(m))
    out = tuple(int(s) for s in sigma)
    if len(out) != m:
        raise ExponentError(f"permutation has length {len(out)}, expected {m}")
    if sorted(out) != list(range(m)):
        raise ExponentError(f"{list(out)} is not a permutation of 0..{m - 1}")
    return out


# -- exponent calculus -------------------------------------------------------

def conjugate(p) -> ExtReal:
    """Hölder conjugate ``p*`` with ``1/p + 1/p* = 1``."""
    p = ext(p)
    if p < 1:
        raise ExponentError(f"conjugate needs p >= 1, got {p}")
    return ExtReal.from_reciprocal(1 - p.reciprocal())


def reciprocal_sum(s: Iterable) -> Finite:
    return sum((ext(v).reciprocal() for v in s), Fraction(0))


def delta(s: Sequence) -> ExtReal:
    """``1 / (1 - sum 1/s_i)``, or infinity once the reciprocal sum reaches 1."""
    s = as_spaces(s)
    total = reciprocal_sum(s)
    if total >= 1:
        return INF
    return ExtReal.from_reciprocal(1 - total)


def is_first_case(p: Sequence) -> bool:
    return reciprocal_sum(as_spaces(p)) < 1


def critical_exponents(p: Sequence, sigma: Sequence[int] | None = None) -> Exponents:
    """Smallest admissible exponents: ``q_k = delta(p[sigma[k]], ..., p[sigma[-1]])``."""
    p = as_spaces(p)
    sigma = as_perm(sigma, len(p))
    permuted = [p[s] for s in sigma]
    return tuple(delta(permuted[k:]) for k in range(len(p)))


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    k: int | None = None  # first failing position, 0-based
    required: ExtReal | None = None

    def __bool__(self):
        return self.ok


def admissible(p: Sequence, sigma: Sequence[int] | None, q: Sequence) -> Admissibility:
    p = as_spaces(p)
    q = as_exponents(q)
    if len(q) != len(p):
        raise ExponentError(f"q has length {len(q)}, p has length {len(p)}")
    crit = critical_exponents(p, sigma)
    for k, (qk, dk) in enumerate(zip(q, crit)):
        # q >= inf only when q is inf
        if qk < dk:
            return Admissibility(False, k, dk)
    return Admissibility(True)


def i0_index(p: Sequence) -> int | None:
    """First 0-based ``i`` whose tail ``1/p_i + ... + 1/p_m`` is strictly below 1."""
    p = as_spaces(p)
    for i in range(len(p)):
        if reciprocal_sum(p[i:]) < 1:
            return i
    return None


def reduced_spaces(p: Sequence) -> Spaces:
    """``r_i = p_i / delta(p_m)`` for ``i < m``; requires ``sum 1/p < 1``."""
    p = as_spaces(p)
    if len(p) < 2:
        raise ExponentError("reduction needs at least two spaces")
    if not is_first_case(p):
        raise ExponentError("reduction needs sum 1/p_i < 1")
    d = delta(p[-1:])
    return tuple(pi / d for pi in p[:-1])
