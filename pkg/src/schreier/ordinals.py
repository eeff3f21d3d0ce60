"""Countable ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents, each exponent itself an :class:`Ordinal`.  Limits carry
the usual canonical fundamental sequences.

Text form::

    expr := term ("+" term)*
    term := nat | "w" ["*" nat] | "w^" atom ["*" nat]
    atom := nat | "w" | "w^" atom | "(" expr ")"

``"w1"`` (or ``"omega1"``) denotes the first uncountable ordinal; it is only
accepted by :func:`parse_index` since it is used purely as a family index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Union

from .errors import OrdinalParseError


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=()):
        terms = tuple((e, int(c)) for e, c in terms if c)
        for i, (e, c) in enumerate(terms):
            if not isinstance(e, Ordinal):
                raise TypeError("exponents must be Ordinal")
            if c < 0:
                raise ValueError("coefficients must be positive")
            if i and not e < terms[i - 1][0]:
                raise ValueError("exponents must strictly decrease")
        self.terms = terms
        self._hash = hash(terms)

    @classmethod
    def of(cls, value: OrdinalLike) -> Ordinal:
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not an ordinal")
        if isinstance(value, int):
            if value < 0:
                raise ValueError("negative integers are not ordinals")
            return cls(((ZERO, value),)) if value else ZERO
        if isinstance(value, str):
            return parse(value)
        raise TypeError(f"cannot make an ordinal from {value!r}")

    # comparison

    def _cmp(self, other: Ordinal) -> int:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return 1 if e1 > e2 else -1
            if c1 != c2:
                return 1 if c1 > c2 else -1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.is_finite and self.finite_value == other
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, Omega1):
            return True
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        if self.is_finite:
            return hash(self.finite_value)
        return self._hash

    # structure

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    @property
    def finite_value(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def predecessor(self) -> Ordinal:
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        *head, (e, c) = self.terms
        return Ordinal((*head, (e, c - 1)))

    def successor(self) -> Ordinal:
        return self + ONE

    # arithmetic

    def __add__(self, other):
        other = Ordinal.of(other)
        if other.is_zero:
            return self
        lead = other.terms[0][0]
        kept = [(e, c) for e, c in self.terms if e > lead]
        merged = [(e, c) for e, c in self.terms if e == lead]
        rest = list(other.terms)
        if merged:
            rest[0] = (lead, merged[0][1] + rest[0][1])
        return Ordinal(kept + rest)

    def __radd__(self, other):
        return Ordinal.of(other) + self

    def __mul__(self, other):
        other = Ordinal.of(other)
        if self.is_zero or other.is_zero:
            return ZERO
        out = ZERO
        lead_e, lead_c = self.terms[0]
        for e, c in other.terms:
            if e.is_zero:
                piece = Ordinal(((lead_e, lead_c * c), *self.terms[1:]))
            else:
                piece = Ordinal(((lead_e + e, c),))
            out = out + piece
        return out

    def __rmul__(self, other):
        return Ordinal.of(other) * self

    def fundamental(self, n: int) -> Ordinal:
        """The n-th term of the canonical fundamental sequence of a limit."""
        if not self.is_limit:
            raise ValueError(f"{self} is not a limit ordinal")
        if n < 1:
            raise ValueError("fundamental sequences are indexed from 1")
        *head, (e, c) = self.terms
        base = Ordinal((*head, (e, c - 1)))
        if e.is_successor:
            return base + Ordinal(((e.predecessor(), n),))
        return base + Ordinal(((e.fundamental(n), 1),))

    def __getitem__(self, n: int) -> Ordinal:
        return self.fundamental(n)

    # text

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.terms:
            if e.is_zero:
                parts.append(str(c))
                continue
            if e == ONE:
                head = "w"
            elif len(e.terms) == 1 and (e.is_finite or e.terms[0][1] == 1):
                head = f"w^{e}"
            else:
                head = f"w^({e})"
            parts.append(head if c == 1 else f"{head}*{c}")
        return "+".join(parts)

    def __repr__(self):
        return f"Ordinal('{self}')"


class Omega1:
    """The first uncountable ordinal, usable only as a family index."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("omega1")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __str__(self):
        return "w1"

    def __repr__(self):
        return "OMEGA1"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))
OMEGA1 = Omega1()

OrdinalLike = Union[Ordinal, int, str]
Index = Union[Ordinal, Omega1]


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Successor:
    pred: Ordinal


@dataclass(frozen=True)
class Limit:
    pass


def classify(alpha: OrdinalLike) -> Zero | Successor | Limit:
    alpha = Ordinal.of(alpha)
    if alpha.is_zero:
        return Zero()
    if alpha.is_successor:
        return Successor(alpha.predecessor())
    return Limit()


def fundamental(alpha: OrdinalLike, n: int) -> Ordinal:
    return Ordinal.of(alpha).fundamental(n)


def omega_power(exponent: OrdinalLike) -> Ordinal:
    return Ordinal(((Ordinal.of(exponent), 1),))


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(omega1|w1)|(w|ω|omega)|(\^)|(\*)|(\+)|(\()|(\)))")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, w1, w, *ops = m.groups()
        if num is not None:
            out.append(num)
        elif w1 is not None:
            out.append("w1")
        elif w is not None:
            out.append("w")
        else:
            out.append(next(o for o in ops if o is not None))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise OrdinalParseError(f"expected {expected or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        out = []
        for e, c in terms:
            if c == 0:
                if len(terms) > 1:
                    raise OrdinalParseError(f"zero term inside a sum in {self.text!r}")
                continue
            if out and not e < out[-1][0]:
                raise OrdinalParseError(f"exponents must strictly decrease in {self.text!r}")
            out.append((e, c))
        return Ordinal(out)

    def term(self):
        tok = self.peek()
        if tok is not None and tok.isdigit():
            self.take()
            return ZERO, int(tok)
        if tok == "w":
            self.take()
            exp = ONE
            if self.peek() == "^":
                self.take()
                exp = self.atom()
            coef = 1
            if self.peek() == "*":
                self.take()
                num = self.take()
                if not num.isdigit() or int(num) == 0:
                    raise OrdinalParseError(f"bad coefficient in {self.text!r}")
                coef = int(num)
            return exp, coef
        raise OrdinalParseError(f"unexpected {tok!r} in {self.text!r}")

    def atom(self) -> Ordinal:
        tok = self.peek()
        if tok is not None and tok.isdigit():
            self.take()
            return Ordinal.of(int(tok))
        if tok == "w":
            self.take()
            if self.peek() == "^":
                self.take()
                return omega_power(self.atom())
            return OMEGA
        if tok == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise OrdinalParseError(f"unexpected {tok!r} in exponent of {self.text!r}")


def parse(text: str) -> Ordinal:
    p = _Parser(text)
    if "w1" in p.toks:
        raise OrdinalParseError("w1 is only allowed as a family index")
    out = p.expr()
    if p.peek() is not None:
        raise OrdinalParseError(f"trailing input in {text!r}")
    return out


def parse_index(value) -> Index:
    """Parse a family index: an ordinal below epsilon_0 or ``w1``."""
    if isinstance(value, (Omega1, Ordinal)):
        return value
    if isinstance(value, str) and value.strip() in ("w1", "omega1", "ω1"):
        return OMEGA1
    return Ordinal.of(value)
