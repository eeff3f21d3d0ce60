"""Finite prefixes of infinite subsets of the positive integers.

An infinite set ``M = (M(1) < M(2) < ...)`` is represented by an explicit
tuple of leading elements and an optional tail rule that generates the rest.
Positions are 1-based throughout, matching ``M(n)``.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import DescriptorError, InsufficientPrefix


@dataclass(frozen=True)
class ArithmeticTail:
    """Tail ``start, start + step, start + 2 step, ...``."""

    start: int
    step: int

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("tail step must be positive")

    def value(self, k: int) -> int:
        return self.start + k * self.step

    def index_at_least(self, v: int) -> int:
        if v <= self.start:
            return 0
        return -((self.start - v) // self.step)

    def describe(self) -> str:
        return f"arith({self.start},{self.step})"


@dataclass(frozen=True, eq=False)
class GrowthTail:
    """Tail given by a strictly increasing function ``k -> value`` (k from 0)."""

    name: str
    fn: Callable[[int], int]

    def value(self, k: int) -> int:
        return self.fn(k)

    def index_at_least(self, v: int) -> int:
        k = 0
        step = 1
        while self.fn(k + step - 1) < v:
            k += step
            step *= 2
        lo, hi = k, k + step - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.fn(mid) < v:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def describe(self) -> str:
        return self.name


Tail = ArithmeticTail | GrowthTail


@dataclass(frozen=True)
class Prefix:
    """An increasing sequence of positive integers, finite or with a tail rule."""

    elements: tuple[int, ...] = ()
    tail: Tail | None = None

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        object.__setattr__(self, "elements", els)
        for a, b in zip(els, els[1:]):
            if not a < b:
                raise ValueError("prefix elements must be strictly increasing")
        if els and els[0] < 1:
            raise ValueError("elements must be positive integers")
        if self.tail is not None and els and self.tail.value(0) <= els[-1]:
            raise ValueError("tail must start above the explicit elements")

    @classmethod
    def of(cls, value) -> Prefix:
        if isinstance(value, Prefix):
            return value
        if isinstance(value, str):
            return parse_prefix(value)
        return cls(tuple(value))

    @classmethod
    def naturals(cls, start: int = 1, step: int = 1) -> Prefix:
        return cls((), ArithmeticTail(start, step))

    @property
    def is_infinite(self) -> bool:
        return self.tail is not None

    def __len__(self):
        if self.tail is not None:
            raise TypeError("infinite prefix has no length")
        return len(self.elements)

    def available(self) -> int | float:
        return float("inf") if self.tail is not None else len(self.elements)

    def get(self, n: int) -> int:
        """``M(n)`` for ``n >= 1``."""
        if n < 1:
            raise IndexError("positions start at 1")
        if n <= len(self.elements):
            return self.elements[n - 1]
        if self.tail is None:
            raise InsufficientPrefix(n, len(self.elements))
        return self.tail.value(n - 1 - len(self.elements))

    __call__ = get

    def take(self, n: int) -> tuple[int, ...]:
        if n <= len(self.elements):
            return self.elements[:n]
        return self.elements + tuple(self.get(i) for i in range(len(self.elements) + 1, n + 1))

    def __iter__(self) -> Iterator[int]:
        yield from self.elements
        if self.tail is not None:
            k = 0
            while True:
                yield self.tail.value(k)
                k += 1

    def image(self, positions: Iterable[int]) -> tuple[int, ...]:
        """``M(F) = (M(f) : f in F)``."""
        return tuple(self.get(p) for p in positions)

    def position_at_least(self, v: int) -> int:
        """Smallest position ``n`` with ``M(n) >= v``."""
        i = bisect_left(self.elements, v)
        if i < len(self.elements):
            return i + 1
        if self.tail is None:
            raise InsufficientPrefix(len(self.elements) + 1, len(self.elements))
        return len(self.elements) + 1 + self.tail.index_at_least(v)

    def index_of(self, v: int) -> int | None:
        """Position of ``v`` in ``M``, or None if ``v`` is not an element."""
        i = bisect_left(self.elements, v)
        if i < len(self.elements):
            return i + 1 if self.elements[i] == v else None
        if self.tail is None:
            return None
        k = self.tail.index_at_least(v)
        return len(self.elements) + 1 + k if self.tail.value(k) == v else None

    def covers(self, v: int) -> bool:
        """True when membership of ``v`` is decided by this prefix."""
        return self.tail is not None or (bool(self.elements) and v <= self.elements[-1])

    def positions(self, F: Sequence[int]) -> tuple[int, ...] | None:
        """Positions of the elements of ``F`` in ``M``, or None if ``F`` is not a subset.

        Raises InsufficientPrefix when the prefix cannot decide.
        """
        out = []
        for v in F:
            if self.tail is None and (not self.elements or v > self.elements[-1]):
                raise InsufficientPrefix(len(self.elements) + 1, len(self.elements))
            p = self.index_of(v)
            if p is None:
                return None
            out.append(p)
        return tuple(out)

    def contains_set(self, F: Sequence[int]) -> bool:
        return self.positions(F) is not None

    def drop(self, k: int) -> Prefix:
        """``M`` with its first ``k`` elements removed."""
        if k <= len(self.elements):
            return Prefix(self.elements[k:], self.tail)
        if self.tail is None:
            raise InsufficientPrefix(k, len(self.elements))
        skip = k - len(self.elements)
        t = self.tail
        if isinstance(t, ArithmeticTail):
            return Prefix((), ArithmeticTail(t.value(skip), t.step))
        return Prefix((), GrowthTail(f"{t.name}>>{skip}", lambda j, f=t.fn, s=skip: f(j + s)))

    def after(self, v: int) -> Prefix:
        """Elements of ``M`` strictly greater than ``v``."""
        if self.tail is None and (not self.elements or v >= self.elements[-1]):
            return Prefix(())
        return self.drop(self.position_at_least(v + 1) - 1)

    def compose(self, inner: Prefix) -> Prefix:
        """The sequence ``n -> self(inner(n))``."""
        inner = Prefix.of(inner)
        if inner.tail is None:
            return Prefix(self.image(inner.elements))
        head = self.image(inner.elements)
        fn = lambda k, outer=self, t=inner.tail: outer.get(t.value(k))
        return Prefix(head, GrowthTail(f"compose({self.describe()},{inner.describe()})", fn))

    def truncate(self, n: int) -> Prefix:
        """A finite prefix holding the first ``n`` elements."""
        return Prefix(self.take(n))

    def describe(self) -> str:
        head = ",".join(map(str, self.elements))
        if self.tail is None:
            return head
        if isinstance(self.tail, ArithmeticTail):
            return f"{head},{self.tail.describe()}..." if head else f"{self.tail.describe()}..."
        return f"{head},{self.tail.describe()}" if head else self.tail.describe()

    def __str__(self):
        return self.describe()


def subsequence(M: Prefix, F: Iterable[int]) -> Prefix:
    """The finite set ``F`` viewed as a prefix (after checking ``F`` is inside ``M``)."""
    F = tuple(F)
    if M.positions(F) is None:
        raise ValueError(f"{F} is not a subset of M")
    return Prefix(F)


_ARITH = re.compile(r"^arith\((\d+),(\d+)\)(\.\.\.)?$")


def parse_prefix(text: str) -> Prefix:
    """Parse ``"2,4,6,8"`` (finite), ``"2,4,6,..."`` (arithmetic continuation)
    or ``"1,5,arith(10,3)..."``."""
    parts = [p.strip() for p in text.strip().strip("()[]").split(",") if p.strip()]
    if not parts:
        return Prefix(())
    tail = None
    if parts[-1] == "...":
        parts = parts[:-1]
        nums = [int(p) for p in parts]
        if len(nums) < 2:
            raise DescriptorError("an arithmetic continuation needs two elements")
        step = nums[-1] - nums[-2]
        return Prefix(tuple(nums), ArithmeticTail(nums[-1] + step, step))
    m = _ARITH.match(parts[-1].replace(" ", "")) if parts else None
    if m is None and len(parts) >= 2:
        m = _ARITH.match(",".join(parts[-2:]).replace(" ", ""))
        if m:
            parts = parts[:-2]
            tail = ArithmeticTail(int(m.group(1)), int(m.group(2)))
    try:
        nums = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise DescriptorError(f"bad prefix {text!r}") from exc
    return Prefix(nums, tail)
