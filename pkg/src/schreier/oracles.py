"""Slow, direct evaluations used to cross-check the fast routines.

Each function here unfolds a definition literally, with no normal-form
shortcuts, so that agreement with the optimized code is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .families import Schreier, _contains, members
from .ordinals import Ordinal
from .vectors import Vec


def tsirelson_bruteforce(mu, theta, x: Vec) -> Fraction | float:
    """The implicit Tsirelson norm by enumerating all interval families.

    Intervals are arbitrary integer intervals inside ``range(x)``; those that
    see no support are skipped because they carry no mass and only add minima.
    A family with fewer than two nonempty pieces is never better than the
    vector itself, so at least two are required.
    """
    mu = Ordinal.of(mu)
    fam = Schreier(mu)
    coords = dict(x.abs().items())
    if not coords:
        return Fraction(0) if x.exact else 0.0

    @lru_cache(maxsize=None)
    def value(lo: int, hi: int):
        pts = [i for i in coords if lo <= i <= hi]
        if not pts:
            return 0
        best = max(coords[i] for i in pts)
        # every interval [a, b] inside [lo, hi] that meets the support
        intervals = [(a, b) for a in range(lo, hi + 1) for b in range(a, hi + 1) if any(a <= i <= b for i in pts)]
        top = None

        def extend(last_hi, mins, acc, count):
            nonlocal top
            if count >= 2 and (top is None or acc > top):
                top = acc
            for a, b in intervals:
                if a <= last_hi:
                    continue
                nxt = mins + (a,)
                if not _contains(fam, nxt):
                    continue
                if count == 0 and (a, b) == (lo, hi):
                    continue
                extend(b, nxt, acc + value(a, b), count + 1)

        extend(lo - 1, (), 0, 0)
        if top is not None and theta * top > best:
            best = theta * top
        return best

    lo, hi = x.range
    return value(lo, hi)


def hxi_bruteforce(h_norm: Callable[[Vec], object], xi, x: Vec):
    """The H_xi norm by listing every successive family of S_xi subsets of the support."""
    fam = Schreier(Ordinal.of(xi))
    supp = x.support
    sets = [E for E in members(fam, supp) if E]
    absx = x.abs()
    best = None

    def walk(last, chosen):
        nonlocal best
        v = Vec._raw({E[-1]: sum(absx[i] for i in E) for E in chosen}, x.exact)
        val = h_norm(v)
        if best is None or val > best:
            best = val
        for E in sets:
            if E[0] > last:
                walk(E[-1], chosen + [E])

    walk(0, [])
    return best


def sign_bruteforce(ground_norm: Callable[[Vec], object], seq: Sequence[Vec]):
    """``max over all sign vectors of ||sum eps_n x_n||`` (all 2^t patterns)."""
    best = None
    for signs in itertools.product((1, -1), repeat=len(seq)):
        v = Vec()
        for s, x in zip(signs, seq):
            v = v + x * s
        val = ground_norm(v)
        if best is None or val > best:
            best = val
    return best


def schreier_bruteforce(xi, F: Sequence[int]) -> bool:
    """Membership in S_xi from the recursive definition, for finite xi.

    ``S_0`` holds the empty set and singletons; ``S_{n+1}`` holds unions of
    ``t <= min F_1`` successive members of ``S_n``.
    """
    xi = Ordinal.of(xi)
    if not xi.is_finite:
        raise ValueError("the brute-force check covers finite orders only")
    n = xi.finite_value
    F = tuple(F)

    @lru_cache(maxsize=None)
    def member(level: int, s: tuple) -> bool:
        if len(s) <= 1:
            return True
        if level == 0:
            return False

        def split(rest: tuple, count: int) -> bool:
            if not rest:
                return True
            if count == s[0]:
                return False
            return any(member(level - 1, rest[:k]) and split(rest[k:], count + 1) for k in range(1, len(rest) + 1))

        return split(s, 0)

    return member(n, F)
