"""Finitely supported vectors on the positive integers.

Coordinates are either all exact (``Fraction``) or all floating point.
Integers are promoted to ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import UnsupportedScalarMix

Scalar = Fraction | float


def to_scalar(value) -> Scalar:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE") and "/" not in text:
            return float(text)
        return Fraction(text)
    if hasattr(value, "__float__"):
        return float(value)
    raise TypeError(f"not a scalar: {value!r}")


def format_scalar(x) -> str | float:
    """Rationals as ``"p/q"`` strings, ints and floats unchanged."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


class Vec(Mapping[int, Scalar]):
    """A vector in c_00 stored as a dict of nonzero coordinates."""

    __slots__ = ("_c", "exact")

    def __init__(self, coords: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coords.items() if isinstance(coords, Mapping) else coords
        c: dict[int, Scalar] = {}
        kinds = set()
        for i, v in items:
            i = int(i)
            if i < 1:
                raise ValueError("coordinates are indexed from 1")
            v = to_scalar(v)
            if v:
                c[i] = v
                kinds.add(isinstance(v, Fraction))
        if len(kinds) > 1:
            raise UnsupportedScalarMix("vector mixes exact and floating-point coordinates")
        self._c = dict(sorted(c.items()))
        self.exact = kinds != {False}

    @classmethod
    def _raw(cls, c: dict[int, Scalar], exact: bool) -> Vec:
        out = cls.__new__(cls)
        out._c = dict(sorted((i, v) for i, v in c.items() if v))
        out.exact = exact
        return out

    @classmethod
    def basis(cls, i: int, scale=1) -> Vec:
        return cls({i: scale})

    @classmethod
    def ones(cls, indices: Iterable[int]) -> Vec:
        return cls({i: 1 for i in indices})

    def __getitem__(self, i: int) -> Scalar:
        return self._c.get(i, Fraction(0) if self.exact else 0.0)

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __contains__(self, i):
        return i in self._c

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._c)

    @property
    def range(self) -> tuple[int, int] | None:
        if not self._c:
            return None
        s = self.support
        return s[0], s[-1]

    def is_zero(self) -> bool:
        return not self._c

    def items(self):
        return self._c.items()

    def restrict(self, indices) -> Vec:
        idx = set(indices)
        return Vec._raw({i: v for i, v in self._c.items() if i in idx}, self.exact)

    def interval(self, lo: int, hi: int) -> Vec:
        return Vec._raw({i: v for i, v in self._c.items() if lo <= i <= hi}, self.exact)

    def abs(self) -> Vec:
        return Vec._raw({i: abs(v) for i, v in self._c.items()}, self.exact)

    def map(self, fn) -> Vec:
        vals = {i: fn(v) for i, v in self._c.items()}
        return Vec._raw(vals, all(isinstance(v, Fraction) for v in vals.values()))

    def shift(self, k: int) -> Vec:
        return Vec._raw({i + k: v for i, v in self._c.items()}, self.exact)

    def to_float(self) -> Vec:
        return Vec._raw({i: float(v) for i, v in self._c.items()}, False)

    def l1(self):
        return sum(map(abs, self._c.values()), Fraction(0) if self.exact else 0.0)

    def linf(self):
        return max(map(abs, self._c.values()), default=Fraction(0) if self.exact else 0.0)

    def dot(self, other: Vec):
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        zero = Fraction(0) if self.exact and other.exact else 0.0
        return sum((v * big._c[i] for i, v in small._c.items() if i in big._c), zero)

    def _combine(self, other: Vec, sign: int) -> Vec:
        c = dict(self._c)
        for i, v in other._c.items():
            c[i] = c.get(i, 0) + sign * v
        return Vec._raw(c, self.exact and other.exact)

    def __add__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self._combine(other, 1)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return Vec._raw({i: -v for i, v in self._c.items()}, self.exact)

    def __mul__(self, scalar):
        s = to_scalar(scalar)
        return Vec._raw({i: s * v for i, v in self._c.items()}, self.exact and isinstance(s, Fraction))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = to_scalar(scalar)
        return self * (1 / s)

    def __eq__(self, other):
        if isinstance(other, Vec):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __repr__(self):
        body = ", ".join(f"{i}: {format_scalar(v)!s}" for i, v in self._c.items())
        return f"Vec({{{body}}})"

    def to_json(self) -> dict:
        return {str(i): format_scalar(v) for i, v in self._c.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> Vec:
        return cls({int(k): v for k, v in data.items()})


def span(coefficients, vectors) -> Vec:
    """``sum a_n x_n``."""
    out = Vec()
    for a, x in zip(coefficients, vectors):
        if a:
            out = out + a * x
    return out
