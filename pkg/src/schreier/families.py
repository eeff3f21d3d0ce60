"""Regular families of finite subsets of the positive integers.

Finite sets are increasing tuples.  Families are immutable expression trees
(frozen dataclasses) and membership is decided by :func:`contains`, which is
memoized on the structural hash of the expression.

All built-in families are hereditary and spreading, which is what makes the
greedy algorithms below exact: the longest initial segment of a set lying in a
hereditary family is found by bisection, and for a spreading outer family the
greedy block decomposition has the smallest possible list of block minima
(pointwise, in the spreading order).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .config import Counter
from .errors import BudgetExceeded, InsufficientPrefix, NotDecomposable, NotHereditary
from .ordinals import Index, Omega1, Ordinal, parse_index
from .sequences import Prefix

FiniteSet = tuple[int, ...]

CACHE_SIZE = int(os.environ.get("SCHREIER_CACHE", "1000000"))
SEGMENT_LIMIT = 1 << 20
# sets longer than this bypass the membership cache
CACHE_SET_LIMIT = 64


def as_set(F: Iterable[int]) -> FiniteSet:
    out = tuple(sorted(set(int(x) for x in F)))
    if out and out[0] < 1:
        raise ValueError("sets live inside the positive integers")
    return out


class Family:
    """Base class for family expressions."""

    #: ambient infinite set for families defined relative to some M
    ambient: Prefix | None = None

    def __contains__(self, F) -> bool:
        return contains(self, F)


@dataclass(frozen=True)
class FineSchreier(Family):
    index: Index

    def __post_init__(self):
        object.__setattr__(self, "index", parse_index(self.index))

    def __str__(self):
        return f"F({self.index})"


@dataclass(frozen=True)
class Schreier(Family):
    index: Ordinal

    def __post_init__(self):
        idx = parse_index(self.index)
        if isinstance(idx, Omega1):
            raise ValueError("Schreier families are indexed by countable ordinals")
        object.__setattr__(self, "index", idx)

    def __str__(self):
        return f"S({self.index})"


@dataclass(frozen=True)
class Singletons(Family):
    def __str__(self):
        return "singletons"


@dataclass(frozen=True)
class AllFinite(Family):
    def __str__(self):
        return "all"


@dataclass(frozen=True)
class Compose(Family):
    """``outer[inner]``: unions of successive nonempty inner-members whose minima form an outer-member."""

    outer: Family
    inner: Family

    def __str__(self):
        return f"compose({self.outer},{self.inner})"


@dataclass(frozen=True)
class ComposeRel(Family):
    """The relative composition: blocks inside ``M`` with minima in ``outer(M)``."""

    outer: Family
    inner: Family
    M: Prefix

    @property
    def ambient(self):
        return self.M

    def __str__(self):
        return f"composerel({self.outer},{self.inner},M={self.M})"


@dataclass(frozen=True)
class Image(Family):
    """``f(M) = {M(G) : G in f}``."""

    base: Family
    M: Prefix

    @property
    def ambient(self):
        return self.M

    def __str__(self):
        return f"image({self.base},M={self.M})"


@dataclass(frozen=True)
class Restrict(Family):
    """Members of ``base`` that are subsets of ``M``."""

    base: Family
    M: Prefix

    @property
    def ambient(self):
        return self.M

    def __str__(self):
        return f"restrict({self.base},M={self.M})"


@dataclass(frozen=True)
class Pair(Family):
    """``{F u G : F < G, F in first, G in second}``."""

    first: Family
    second: Family

    def __str__(self):
        return f"pair({self.first},{self.second})"


@dataclass(frozen=True)
class TensorPow(Family):
    """``f`` composed with itself: ``f^(1) = f`` and ``f^(m+1) = f[f^(m)]``."""

    base: Family
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("tensor powers start at 1")

    def expand(self) -> Family:
        out = self.base
        for _ in range(self.m - 1):
            out = Compose(self.base, out)
        return out

    def __str__(self):
        return f"tensor({self.base},{self.m})"


@dataclass(frozen=True)
class Explicit(Family):
    """A finite hereditary family given by its members."""

    sets: frozenset
    spreading: bool = False
    ground: int | None = None

    def __post_init__(self):
        sets = frozenset(as_set(s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if sets:
            for s in sets:
                for i in range(len(s)):
                    if s[:i] + s[i + 1 :] not in sets:
                        raise NotHereditary(f"{s[:i] + s[i + 1:]} missing below {s}")
        if self.ground is None:
            top = max((s[-1] for s in sets if s), default=0)
            object.__setattr__(self, "ground", top + 1)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(sorted(self.sets, key=lambda s: (len(s), s)))

    def __str__(self):
        return f"explicit({len(self.sets)} sets)"


def singleton_family() -> Family:
    return Singletons()


# membership


def contains(fam: Family, F: Iterable[int]) -> bool:
    return _contains(fam, as_set(F))


def _longest_prefix(fam: Family, F: FiniteSet, start: int = 0) -> int:
    """Largest j with ``F[start:j]`` in ``fam`` (bisection, valid for hereditary fam)."""
    lo, hi = start, len(F)
    if _contains(fam, F[start:hi]):
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _contains(fam, F[start:mid]):
            lo = mid
        else:
            hi = mid
    return lo


def greedy_blocks(inner: Family, F: FiniteSet) -> list[FiniteSet] | None:
    """Split ``F`` into successive longest initial segments lying in ``inner``."""
    blocks, i = [], 0
    while i < len(F):
        j = _longest_prefix(inner, F, i)
        if j == i:
            return None
        blocks.append(F[i:j])
        i = j
    return blocks


def _is_spreading(fam: Family) -> bool:
    if isinstance(fam, Explicit):
        return fam.spreading
    if isinstance(fam, Compose):
        return _is_spreading(fam.outer) and _is_spreading(fam.inner)
    if isinstance(fam, Pair):
        return _is_spreading(fam.first) and _is_spreading(fam.second)
    if isinstance(fam, TensorPow):
        return _is_spreading(fam.base)
    return fam.ambient is None


def _strip_finite(xi: Ordinal) -> tuple[Ordinal, int]:
    if xi.is_successor:
        *head, (_, k) = xi.terms
        return Ordinal(head), k
    return xi, 0


@lru_cache(maxsize=CACHE_SIZE)
def _fine(xi: Ordinal, F: FiniteSet) -> bool:
    if not F:
        return True
    if xi.is_finite:
        return len(F) <= xi.finite_value
    lam, k = _strip_finite(xi)
    if k:
        return len(F) <= k or _fine(lam, F[k:])
    for n in range(F[0], 0, -1):
        if _fine(lam.fundamental(n), F):
            return True
    return False


def _schreier_span(xi: Ordinal, get, avail, i: int, memo: dict, counter: Counter) -> int:
    """Length of the longest initial segment of ``(get(i), get(i+1), ...)`` lying in S_xi.

    ``avail`` is the number of available elements (may be infinite).  For a
    successor order the segment is the union of ``get(i)`` greedy blocks of the
    previous order; for a limit it is the longest over the admissible orders.
    """
    key = (xi, i)
    if key in memo:
        return memo[key]
    if i >= avail:
        return 0
    first = get(i)
    counter.tick()
    if xi.is_zero:
        r = 1
    elif xi == 1:
        r = min(first, avail - i)
    elif xi.is_successor:
        pred = xi.predecessor()
        j, c = i, 0
        while j < avail and c < first:
            j += _schreier_span(pred, get, avail, j, memo, counter)
            c += 1
        r = j - i
    else:
        r = 0
        for n in range(first, 0, -1):
            r = max(r, _schreier_span(xi.fundamental(n), get, avail, i, memo, counter))
            if r >= avail - i:
                break
    memo[key] = r
    return r


def _schreier(xi: Ordinal, F: FiniteSet) -> bool:
    if not F:
        return True
    if xi.is_zero:
        return len(F) <= 1
    if xi == 1:
        return len(F) <= F[0]
    counter = Counter("Schreier membership")
    return _schreier_span(xi, F.__getitem__, len(F), 0, {}, counter) == len(F)


def _contains(fam: Family, F: FiniteSet) -> bool:
    if len(F) > CACHE_SET_LIMIT:
        return _contains_impl(fam, F)
    return _contains_cached(fam, F)


def _contains_impl(fam: Family, F: FiniteSet) -> bool:
    if not F:
        return True
    if isinstance(fam, FineSchreier):
        if isinstance(fam.index, Omega1):
            return True
        return _fine(fam.index, F)
    if isinstance(fam, Schreier):
        return _schreier(fam.index, F)
    if isinstance(fam, Singletons):
        return len(F) <= 1
    if isinstance(fam, AllFinite):
        return True
    if isinstance(fam, Explicit):
        return F in fam.sets
    if isinstance(fam, TensorPow):
        return _contains(fam.expand(), F)
    if isinstance(fam, Pair):
        return any(_contains(fam.first, F[:i]) and _contains(fam.second, F[i:]) for i in range(len(F) + 1))
    if isinstance(fam, Image):
        pos = fam.M.positions(F)
        return pos is not None and _contains(fam.base, pos)
    if isinstance(fam, Restrict):
        return fam.M.positions(F) is not None and _contains(fam.base, F)
    if isinstance(fam, Compose):
        if not _is_spreading(fam.outer):
            return _compose_exhaustive(fam.outer, fam.inner, F, None)
        blocks = greedy_blocks(fam.inner, F)
        return blocks is not None and _contains(fam.outer, tuple(b[0] for b in blocks))
    if isinstance(fam, ComposeRel):
        if fam.M.positions(F) is None:
            return False
        if not _is_spreading(fam.outer):
            return _compose_exhaustive(fam.outer, fam.inner, F, fam.M)
        blocks = greedy_blocks(fam.inner, F)
        if blocks is None:
            return False
        return _contains(fam.outer, fam.M.positions(tuple(b[0] for b in blocks)))
    raise TypeError(f"unknown family {fam!r}")


_contains_cached = lru_cache(maxsize=CACHE_SIZE)(_contains_impl)


def _compose_exhaustive(outer: Family, inner: Family, F: FiniteSet, M: Prefix | None) -> bool:
    """Try every split of F into successive inner-blocks (for non-spreading outer)."""

    def rec(i: int, mins: tuple) -> bool:
        if i == len(F):
            key = M.positions(mins) if M is not None else mins
            return _contains(outer, key)
        for j in range(i + 1, len(F) + 1):
            if not _contains(inner, F[i:j]):
                break
            if rec(j, mins + (F[i],)):
                return True
        return False

    return rec(0, ())


def clear_caches() -> None:
    _contains_cached.cache_clear()
    _fine.cache_clear()


# maximality and segments


def is_maximal(fam: Family, F: Iterable[int]) -> bool:
    """Whether F is a maximal member of fam (no proper superset is a member)."""
    F = as_set(F)
    if not contains(fam, F):
        raise ValueError(f"{F} is not a member of {fam}")
    if isinstance(fam, AllFinite) or (isinstance(fam, FineSchreier) and isinstance(fam.index, Omega1)):
        return False
    M = fam.ambient
    if M is not None:
        nxt = M.get(1) if not F else None
        if F:
            pos = M.index_of(F[-1])
            nxt = M.get(pos + 1)
        return not _contains(fam, F + (nxt,))
    if isinstance(fam, Explicit) and not fam.spreading:
        return all(not _contains(fam, as_set(F + (n,))) for n in range(1, fam.ground + 1) if n not in F)
    nxt = F[-1] + 1 if F else 1
    return not _contains(fam, F + (nxt,))


def initial_segment_length(fam: Family, M: Prefix, limit: int = SEGMENT_LIMIT) -> int:
    """Length of ``M|fam``, the longest initial segment of M lying in fam.

    Raises BudgetExceeded once the segment is known to be longer than ``limit``.
    """
    M = Prefix.of(M)
    if isinstance(fam, Schreier):
        avail = M.available()
        n = _schreier_span(fam.index, lambda j: M.get(j + 1), avail, 0, {}, Counter("initial segment", limit))
        if n >= avail and not is_maximal(fam, M.take(n)):
            raise InsufficientPrefix(n + 1, n)
        return n
    if isinstance(fam, (Singletons,)) or (isinstance(fam, FineSchreier) and fam.index == 0):
        return 0 if isinstance(fam, FineSchreier) else 1
    if isinstance(fam, FineSchreier) and isinstance(fam.index, Ordinal) and fam.index.is_finite:
        n = fam.index.finite_value
        M.get(n)
        return n
    # doubling then bisection; membership of initial segments is monotone
    avail = M.available()
    good, step = 0, 1
    while True:
        cand = good + step
        if cand > avail:
            cand = int(avail)
            if cand == good or _contains(fam, M.take(cand)):
                if cand and is_maximal(fam, M.take(cand)):
                    return cand
                raise InsufficientPrefix(cand + 1, cand)
            bad = cand
            break
        if _contains(fam, M.take(cand)):
            good = cand
            step *= 2
            if good > limit:
                raise BudgetExceeded("initial segment length", limit)
        else:
            bad = cand
            break
    while bad - good > 1:
        mid = (good + bad) // 2
        if _contains(fam, M.take(mid)):
            good = mid
        else:
            bad = mid
    return good


def initial_segment(fam: Family, M: Prefix) -> FiniteSet:
    M = Prefix.of(M)
    return M.take(initial_segment_length(fam, M))


def decompose(P: Family, F: Iterable[int]) -> list[FiniteSet]:
    """The partition of F into successive maximal members of P."""
    F = as_set(F)
    blocks: list[FiniteSet] = []
    i = 0
    while i < len(F):
        j = _longest_prefix(P, F, i)
        if j == i:
            raise NotDecomposable(F, blocks)
        block = F[i:j]
        if not is_maximal(P, block):
            raise NotDecomposable(F, blocks)
        blocks.append(block)
        i = j
    return blocks


def is_decomposable(P: Family, F: Iterable[int]) -> bool:
    try:
        decompose(P, F)
    except NotDecomposable:
        return False
    return True


def apply_image(M: Prefix, F: Iterable[int]) -> FiniteSet:
    return Prefix.of(M).image(as_set(F))


def is_spread(F: Sequence[int], G: Sequence[int]) -> bool:
    """Whether F is a spread of G: same size and F(n) >= G(n) for all n."""
    F, G = as_set(F), as_set(G)
    if len(F) != len(G):
        raise ValueError("spreads compare sets of equal size")
    return all(a >= b for a, b in zip(F, G))


# enumeration


def members(fam: Family, ground: Sequence[int], budget: int | None = None) -> list[FiniteSet]:
    """All members of fam that are subsets of ``ground``, by depth-first extension."""
    ground = tuple(sorted(set(ground)))
    counter = Counter("family enumeration", budget)
    out: list[FiniteSet] = [()]
    stack: list[tuple[FiniteSet, int]] = [((), 0)]
    while stack:
        cur, start = stack.pop()
        for i in range(start, len(ground)):
            cand = cur + (ground[i],)
            if _contains(fam, cand):
                counter.tick()
                out.append(cand)
                stack.append((cand, i + 1))
    return out


def materialize(fam: Family, N: int, budget: int | None = None) -> Explicit:
    """The truncation of fam to subsets of {1..N}."""
    if isinstance(fam, AllFinite) or (isinstance(fam, FineSchreier) and isinstance(fam.index, Omega1)):
        if N > 20:
            raise BudgetExceeded("materializing all finite sets", 2**20)
    found = members(fam, range(1, N + 1), budget)
    return Explicit(frozenset(found), spreading=False, ground=N)


def maximal_members(fam: Family, ground: Sequence[int], budget: int | None = None) -> list[FiniteSet]:
    """Members of MAX(fam) lying inside ``ground``, in lexicographic order."""
    out = [F for F in members(fam, ground, budget) if is_maximal(fam, F)]
    return sorted(out)


def tree_rank(explicit: Explicit | Family, N: int | None = None) -> int:
    """Least r with the r-th derivative empty, for a finite family seen as a tree."""
    if not isinstance(explicit, Explicit):
        if isinstance(explicit, AllFinite) or (
            isinstance(explicit, FineSchreier) and isinstance(explicit.index, Omega1)
        ):
            raise ValueError("the family of all finite sets is ill-founded")
        if N is None:
            raise ValueError("a ground size is needed to rank a non-explicit family")
        explicit = materialize(explicit, N)
    sets = explicit.sets
    if () not in sets:
        return 0
    height = dict.fromkeys(sets, 0)
    for s in sorted(sets, key=len, reverse=True):
        if s:
            parent = s[:-1]
            height[parent] = max(height[parent], height[s] + 1)
    return height[()] + 1


def almost_monotone_threshold(zeta, xi, N: int, budget: int | None = None) -> int | None:
    """Smallest l such that members of F_zeta inside {l+1..N} all lie in F_xi.

    Returns None when no l <= N works on this truncation.
    """
    lower, upper = FineSchreier(zeta), FineSchreier(xi)
    bad = [F for F in members(lower, range(1, N + 1), budget) if not _contains(upper, F)]
    if not bad:
        return 0
    threshold = max(F[0] for F in bad)
    return threshold if threshold <= N else None


def schreier_limit_report(lam, n_max: int, N: int) -> dict:
    """Check on {1..N} that S_{lam[n]} restricted to sets with min >= n sits inside S_lam."""
    lam = Ordinal.of(lam)
    big = Schreier(lam)
    failures = []
    for n in range(1, n_max + 1):
        for F in members(Schreier(lam.fundamental(n)), range(n, N + 1)):
            if not _contains(big, F):
                failures.append((n, F))
    return {"limit": str(lam), "n_max": n_max, "ground": N, "failures": failures, "ok": not failures}


def pair_rank_examples(N: int) -> dict:
    """Truncated ranks of a few pair families (used by the self test)."""
    return {
        f"pair(F({a}),F({b}))": tree_rank(materialize(Pair(FineSchreier(a), FineSchreier(b)), N))
        for a, b in combinations(range(1, 4), 2)
    }
