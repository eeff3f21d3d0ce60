"""Probability blocks: the Dirac block and the repeated-averages hierarchy.

A block assigns to every infinite ``M`` a sequence of finitely supported
probability measures ``P_{M,1}, P_{M,2}, ...`` whose supports are successive
maximal members of the companion family and tile ``M``.

Repeated averages of order ``xi``:

* order 0 is the Dirac block, ``P_{M,n} = delta_{M(n)}``;
* order ``xi+1``: the first measure is the uniform average of ``m = M(1)``
  consecutive first measures of order ``xi``, each taken on what is left of
  ``M`` after removing the supports of the previous ones;
* limit order ``lam``: use order ``lam[M(1)]``;
* later measures are first measures on the tail of ``M`` past earlier supports.

All weights are exact ``Fraction`` values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .config import Counter
from .errors import BudgetExceeded, InsufficientPrefix
from .families import (
    Family,
    FineSchreier,
    SEGMENT_LIMIT,
    Schreier,
    as_set,
    decompose,
    initial_segment,
    is_maximal,
)
from .ordinals import Ordinal
from .sequences import ArithmeticTail, Prefix
from .vectors import Vec


class ProbMeasure(Mapping[int, Fraction]):
    """A finitely supported probability measure on the positive integers."""

    __slots__ = ("_w",)

    def __init__(self, weights: Mapping[int, object]):
        w = {int(i): Fraction(v) for i, v in weights.items() if Fraction(v) != 0}
        if not w:
            raise ValueError("a probability measure needs nonempty support")
        if any(v < 0 for v in w.values()):
            raise ValueError("weights must be positive")
        if sum(w.values()) != 1:
            raise ValueError(f"weights sum to {sum(w.values())}, not 1")
        self._w = dict(sorted(w.items()))

    @classmethod
    def dirac(cls, i: int) -> ProbMeasure:
        return cls({i: 1})

    def __getitem__(self, i):
        return self._w.get(i, Fraction(0))

    def __iter__(self):
        return iter(self._w)

    def __len__(self):
        return len(self._w)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._w)

    def mass(self, E: Iterable[int]) -> Fraction:
        return sum((self._w.get(i, Fraction(0)) for i in set(E)), Fraction(0))

    def max_atom(self) -> Fraction:
        return max(self._w.values())

    def expect(self, f: Mapping[int, object]) -> Fraction:
        """Integral of f; indices missing from the mapping count as 0."""
        return sum((w * Fraction(f.get(i, 0)) for i, w in self._w.items()), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, ProbMeasure):
            return self._w == other._w
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._w.items()))

    def __repr__(self):
        return "ProbMeasure({" + ", ".join(f"{i}: {w}" for i, w in self._w.items()) + "})"

    def to_json(self) -> dict:
        return {str(i): str(w) for i, w in self._w.items()}


def _average(measures: Sequence[dict]) -> dict:
    m = len(measures)
    out: dict[int, Fraction] = {}
    for mu in measures:
        for i, w in mu.items():
            out[i] = out.get(i, Fraction(0)) + w / m
    return out


@dataclass(frozen=True)
class Dirac:
    def companion(self) -> Family:
        return FineSchreier(1)

    def first(self, M: Prefix) -> dict:
        return {M.get(1): Fraction(1)}

    def __str__(self):
        return "dirac"


@dataclass(frozen=True)
class RepeatedAverages:
    order: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "order", Ordinal.of(self.order))

    def companion(self) -> Family:
        return Schreier(self.order)

    def first(self, M: Prefix) -> dict:
        return _first_average(self.order, M)

    def __str__(self):
        return f"RA({self.order})"


Block = Dirac | RepeatedAverages


def _first_average(xi: Ordinal, M: Prefix, counter: Counter | None = None) -> dict:
    if counter is None:
        counter = Counter("repeated-averages support size", SEGMENT_LIMIT)
    while xi.is_limit:
        xi = xi.fundamental(M.get(1))
    if xi.is_zero:
        counter.tick()
        return {M.get(1): Fraction(1)}
    pred = xi.predecessor()
    m = M.get(1)
    if pred.is_zero:
        # uniform on the first m elements
        counter.tick(m)
        w = Fraction(1, m)
        return {i: w for i in M.take(m)}
    parts = []
    rest = M
    for _ in range(m):
        mu = _first_average(pred, rest, counter)
        parts.append(mu)
        rest = rest.drop(len(mu))
    return _average(parts)


def as_block(block) -> Block:
    if isinstance(block, (Dirac, RepeatedAverages)):
        return block
    from .descriptors import parse_block

    return parse_block(block)


def _coerce_prefix(M) -> Prefix:
    return M if isinstance(M, Prefix) else Prefix.of(M)


def measure_sequence(block: Block, M, count: int) -> list[ProbMeasure]:
    """``P_{M,1}, ..., P_{M,count}``."""
    block = as_block(block)
    M = _coerce_prefix(M)
    out = []
    rest = M
    for _ in range(count):
        mu = block.first(rest)
        out.append(ProbMeasure(mu))
        rest = rest.drop(len(mu))
    return out


def measure(block: Block, M, n: int) -> ProbMeasure:
    if n < 1:
        raise ValueError("measures are indexed from 1")
    return measure_sequence(block, M, n)[-1]


def measures_for(block: Block, F: Iterable[int]) -> list[ProbMeasure]:
    """The measures ``P_{F,1..t}`` attached to a decomposable set ``F``."""
    block = as_block(block)
    F = as_set(F)
    blocks = decompose(block.companion(), F)
    out = [ProbMeasure(block.first(Prefix(b))) for b in blocks]
    for b, mu in zip(blocks, out):
        if mu.support != b:
            raise AssertionError(f"support {mu.support} differs from block {b}")
    return out


def expect(block: Block, F: Iterable[int], f: Mapping[int, object]) -> Fraction:
    """``E_F f = sum_n sum_{i in F_n} f(i) P_{F,n}(i)``."""
    return sum((mu.expect(f) for mu in measures_for(block, F)), Fraction(0))


def _combine(mu: ProbMeasure, seq) -> Vec:
    out = Vec()
    for i, w in mu.items():
        try:
            x = seq[i]
        except (KeyError, IndexError) as exc:
            raise KeyError(f"no vector supplied for index {i}") from exc
        out = out + w * x
    return out


def convex_block(block: Block, M_or_F, seq, count: int | None = None) -> list[Vec]:
    """The convex block sequence ``E_M seq(n) = sum_i P_{M,n}(i) x_i``.

    ``seq`` maps an index i to the vector x_i (a dict, or a list read 1-based).
    For a finite set F the sequence has one vector per block of F; ``count``
    pads it with zero vectors.  For an infinite M, ``count`` terms are built.
    """
    block = as_block(block)
    if isinstance(seq, (list, tuple)):
        seq = {i + 1: x for i, x in enumerate(seq)}
    if isinstance(M_or_F, Prefix) and M_or_F.is_infinite:
        if count is None:
            raise ValueError("count is required for an infinite M")
        mus = measure_sequence(block, M_or_F, count)
        return [_combine(mu, seq) for mu in mus]
    F = M_or_F.elements if isinstance(M_or_F, Prefix) else M_or_F
    mus = measures_for(block, F)
    out = [_combine(mu, seq) for mu in mus]
    if count is not None and count > len(out):
        out += [Vec() for _ in range(count - len(out))]
    return out


def set_mass(block: Block, M, E: Iterable[int]) -> Fraction:
    """``P_{M,1}(E)``."""
    return measure(block, M, 1).mass(E)


# thinning


@dataclass
class ThinningResult:
    prefix: Prefix
    deltas: tuple[Fraction, ...]
    samples_checked: int
    worst_ratio: Fraction
    ok: bool

    def to_json(self) -> dict:
        return {
            "prefix": list(self.prefix.elements),
            "deltas": [str(d) for d in self.deltas],
            "samples_checked": self.samples_checked,
            "worst_ratio": str(self.worst_ratio),
            "ok": self.ok,
        }


def thin_for_small_coefficients(
    block: Block,
    L,
    deltas: Sequence,
    length: int | None = None,
    samples: int = 20,
    seed: int = 0,
) -> ThinningResult:
    """Choose ``M`` inside ``L`` so every ``P_{N,n}`` with ``N`` inside ``M`` has atoms at most ``delta_n``.

    Uses that the largest atom of a first repeated-averages measure (order >= 1)
    is at most the reciprocal of its first element, and that the n-th measure of
    any ``N`` inside ``M`` starts at or after ``M(n)``.  So ``M(n) >= 1/delta_n``
    suffices.  Deltas beyond the list repeat the smallest one.
    """
    block = as_block(block)
    if isinstance(block, Dirac) or block.order.is_zero:
        raise ValueError("thinning needs repeated averages of positive order")
    L = _coerce_prefix(L)
    deltas = tuple(Fraction(d) for d in deltas)
    if not deltas or any(d <= 0 for d in deltas):
        raise ValueError("deltas must be positive")
    length = length or len(deltas)

    def delta(n: int) -> Fraction:
        return deltas[n - 1] if n <= len(deltas) else min(deltas)

    chosen: list[int] = []
    pos = 0
    for n in range(1, length + 1):
        need = -((-1 * delta(n).denominator) // delta(n).numerator)  # ceil(1/delta)
        floor = max(need, chosen[-1] + 1 if chosen else 1)
        pos = max(pos + 1, L.position_at_least(floor))
        chosen.append(L.get(pos))
    M = Prefix(tuple(chosen))

    rng = random.Random(seed)
    checked = 0
    worst = Fraction(0)
    for _ in range(samples):
        keep = [x for x in M.elements if rng.random() < 0.7] or list(M.elements)
        N = Prefix(tuple(keep))
        rest = N
        n = 0
        while True:
            try:
                mu = block.first(rest)
            except InsufficientPrefix:
                break
            n += 1
            worst = max(worst, max(mu.values()) / delta(n))
            checked += 1
            rest = rest.drop(len(mu))
            if not rest.elements:
                break
    return ThinningResult(M, deltas, checked, worst, worst <= 1)


# axioms


@dataclass
class AxiomReport:
    block: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"block": self.block, "checked": self.checked, "ok": self.ok, "failures": self.failures[:20]}


MeasureFn = Callable[[Prefix, int], ProbMeasure]


def verify_axioms(block: Block, samples: Iterable[tuple], measure_fn: MeasureFn | None = None, seed: int = 0) -> AxiomReport:
    """Check the block axioms on sample prefixes.

    For each ``(M, r)``: the first support is ``M|P`` and maximal in ``P``;
    supports of the first ``r`` measures tile an initial segment of ``M`` by
    successive maximal members; and each of those measures is reproduced as the
    first measure of a set that starts with its support and continues with
    later elements of ``M`` (permanence).  ``measure_fn`` overrides the measure
    table, which is how a corrupted table is fed in as a negative control.
    """
    block = as_block(block)
    rng = random.Random(seed)
    if measure_fn is None:
        measure_fn = lambda M, n: measure(block, M, n)  # noqa: E731
    P = block.companion()
    report = AxiomReport(str(block))
    for M, r in samples:
        M = _coerce_prefix(M)
        report.checked += 1
        try:
            mus = [measure_fn(M, n) for n in range(1, r + 1)]
        except (InsufficientPrefix, BudgetExceeded) as exc:
            report.failures.append({"M": M.describe(), "error": str(exc)})
            continue
        first = mus[0]
        if sum(first.values()) != 1:
            report.failures.append({"M": M.describe(), "axiom": "normalization"})
        try:
            seg = initial_segment(P, M)
        except InsufficientPrefix:
            seg = None
        if seg is not None and first.support != seg:
            report.failures.append({"M": M.describe(), "axiom": "support", "support": first.support, "segment": seg})
            continue
        used = 0
        for n, mu in enumerate(mus, 1):
            supp = mu.support
            if supp != M.take(used + len(supp))[used:]:
                report.failures.append({"M": M.describe(), "axiom": "tiling", "n": n, "support": supp})
                break
            if not is_maximal(P, supp):
                report.failures.append({"M": M.describe(), "axiom": "maximal", "n": n, "support": supp})
                break
            used += len(supp)
        else:
            # permanence: supp(P_{M,n}) followed by a thinned tail of M
            beyond = M.drop(used)
            avail = beyond.available()
            later = tuple(x for x in beyond.take(int(min(avail, 30))) if rng.random() < 0.6)
            for n, mu in enumerate(mus, 1):
                ext = mu.support + later
                N = Prefix(ext, ArithmeticTail(ext[-1] + rng.randint(1, 5), rng.randint(1, 3)))
                try:
                    again = measure_fn(N, 1)
                except InsufficientPrefix as exc:
                    report.failures.append({"M": M.describe(), "axiom": "permanence", "n": n, "error": str(exc)})
                    continue
                if again != mu:
                    report.failures.append(
                        {"M": M.describe(), "axiom": "permanence", "n": n, "expected": mu.to_json(), "got": again.to_json()}
                    )
    return report


def random_prefix(rng: random.Random, first: int, length: int, max_gap: int = 3, gap_region: int | None = None) -> Prefix:
    """A random increasing prefix starting at ``first`` with a unit-step tail.

    Gaps between consecutive elements are drawn from 1..max_gap for the first
    ``gap_region`` elements (all of them by default) and are 1 afterwards.
    """
    gap_region = length if gap_region is None else gap_region
    els = [first]
    while len(els) < length:
        gap = rng.randint(1, max_gap) if len(els) < gap_region else 1
        els.append(els[-1] + gap)
    return Prefix(tuple(els), ArithmeticTail(els[-1] + 1, 1))
