"""Constructive combinatorics: diagonal sets, index-matching witnesses, block covers.

Every routine returns data that can be re-checked with the families and blocks
oracles, and each one has a ``validate_*`` companion that does that re-check
without reusing the construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .blocks import RepeatedAverages, measure_sequence
from .errors import AuxiliaryNotFound, InsufficientPrefix, NotDecomposable
from .families import (
    ComposeRel,
    Family,
    FineSchreier,
    Schreier,
    _contains,
    as_set,
    decompose,
    initial_segment_length,
    is_maximal,
    members,
)
from .ordinals import Ordinal, omega_power
from .sequences import ArithmeticTail, GrowthTail, Prefix


# nested chains and diagonals


@dataclass(frozen=True)
class NestedChain:
    """Prefixes ``M_1 ⊇ M_2 ⊇ ...``; containment is checked on the explicit parts."""

    prefixes: tuple

    def __post_init__(self):
        ps = tuple(Prefix.of(p) for p in self.prefixes)
        object.__setattr__(self, "prefixes", ps)
        for n in range(1, len(ps)):
            outer, inner = ps[n - 1], ps[n]
            for v in inner.elements:
                if not outer.covers(v):
                    break
                if outer.index_of(v) is None:
                    raise ValueError(f"M_{n + 1} is not inside M_{n}: {v} is missing")

    @classmethod
    def from_function(cls, fn: Callable[[int], Prefix], length: int) -> NestedChain:
        return cls(tuple(fn(n) for n in range(1, length + 1)))

    def __len__(self):
        return len(self.prefixes)

    def __getitem__(self, n: int) -> Prefix:
        """``M_n`` for ``n >= 1``."""
        return self.prefixes[n - 1]


def diagonalize(chain: NestedChain) -> Prefix:
    """``M(n) = M_n(n)`` for n up to the chain length."""
    out = []
    for n in range(1, len(chain) + 1):
        out.append(chain[n].get(n))
    for a, b in zip(out, out[1:]):
        if not a < b:
            raise ValueError("diagonal is not strictly increasing")
    return Prefix(tuple(out))


@dataclass
class InclusionReport:
    zeta: Ordinal
    ground: int
    checked: int
    realized_by: dict
    missing: list

    @property
    def ok(self) -> bool:
        return not self.missing

    def to_json(self) -> dict:
        return {
            "zeta": str(self.zeta),
            "ground": self.ground,
            "checked": self.checked,
            "realized_by": {",".join(map(str, k)): v for k, v in sorted(self.realized_by.items())},
            "missing": [list(m) for m in self.missing],
            "ok": self.ok,
        }


def diagonal_inclusion_check(chain: NestedChain, zeta, P: Family, N: int, budget: int | None = None) -> InclusionReport:
    """Check that every member of ``F_zeta^M[P]`` inside {1..N} lies in some ``F_{zeta[k]}^{M_k}[P]``.

    M is the diagonal of the chain.  For each member the least such k is
    recorded.
    """
    zeta = Ordinal.of(zeta)
    if not zeta.is_limit:
        raise ValueError("the diagonal inclusion concerns limit ordinals")
    M = diagonalize(chain)
    ground = tuple(v for v in M.elements if v <= N)
    # only the diagonal's elements up to N are ever queried, so any tail above
    # them stands in for the unknown continuation
    big = ComposeRel(FineSchreier(zeta), P, Prefix(M.elements, ArithmeticTail(max(M.elements[-1], N) + 1, 1)))
    realized, missing = {}, []
    found = members(big, ground, budget)
    for H in found:
        hit = None
        for k in range(1, len(chain) + 1):
            fam = ComposeRel(FineSchreier(zeta.fundamental(k)), P, chain[k])
            try:
                if _contains(fam, H):
                    hit = k
                    break
            except InsufficientPrefix:
                continue
        if hit is None:
            missing.append(H)
        else:
            realized[H] = hit
    return InclusionReport(zeta, N, len(found), realized, missing)


# the index-matching witness


@dataclass(frozen=True)
class Auxiliary:
    """An increasing map ``n -> N(n)`` with a readable name."""

    name: str
    fn: Callable[[int], int] = field(compare=False)

    def __call__(self, n: int) -> int:
        return self.fn(n)

    def image(self, G: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.fn(g) for g in G)


def _auxiliary_candidates(limit: int):
    yield Auxiliary("identity", lambda n: n)
    for l in range(1, limit + 1):
        yield Auxiliary(f"n+{l}", lambda n, l=l: n + l)
    for c in range(2, 5):
        yield Auxiliary(f"{c}n", lambda n, c=c: c * n)
    yield Auxiliary("n^2+1", lambda n: n * n + 1)
    yield Auxiliary("2^n", lambda n: 2**n)
    yield Auxiliary("2^(n+3)", lambda n: 2 ** (n + 3))


def find_auxiliary(Q: Family, P: Family, truncation: int = 10, budget: int | None = None) -> Auxiliary:
    """Search for N with ``N(G)`` in P for every G in Q, checked on subsets of {1..truncation}.

    The check is exhaustive on the truncation only; candidates are tried from
    slowest to fastest growth.
    """
    sets = members(Q, range(1, truncation + 1), budget)
    for cand in _auxiliary_candidates(truncation):
        if all(_contains(P, cand.image(G)) for G in sets):
            return cand
    raise AuxiliaryNotFound(f"no auxiliary map sends {Q} into {P} on 1..{truncation}")


@dataclass
class StarWitness:
    F: tuple
    E: tuple
    ks: tuple
    ns: tuple
    auxiliary: str

    def to_json(self) -> dict:
        return {
            "F": [str(v) if v > 2**53 else v for v in self.F],
            "E": list(self.E),
            "k": list(self.ks),
            "n": list(self.ns),
            "auxiliary": self.auxiliary,
        }


def star_witness(
    P: Family,
    Q: Family,
    M,
    L,
    K,
    m: int,
    auxiliary: Auxiliary | None = None,
    truncation: int = 10,
    max_steps: int = 10_000,
) -> StarWitness:
    """Sets F and E with ``m < F`` maximal in Q inside M, ``L(F minus min F) = K(E)`` and ``E`` in P.

    Follows the recursion: ``k_1 = m + 1``; ``K(k_s) = L(M(n_s))`` fixes ``n_s``;
    ``k_{s+1} = N(M(n_s)) + 1`` for an auxiliary N sending Q into P; stop once
    ``(M(n_1), ..., M(n_t))`` is maximal in Q.
    """
    M, L, K = Prefix.of(M), Prefix.of(L), Prefix.of(K)
    N = auxiliary if auxiliary is not None else find_auxiliary(Q, P, truncation)
    LM = L.compose(M)
    ks, ns, F = [], [], []
    k = m + 1
    for _ in range(max_steps):
        target = K.get(k)
        n = LM.index_of(target)
        if n is None:
            raise ValueError(f"K({k}) = {target} is not of the form L(M(n)); K must lie inside L(M)")
        ks.append(k)
        ns.append(n)
        F.append(M.get(n))
        if not _contains(Q, tuple(F)):
            raise ValueError(f"{Q} is not nice: the chain left the family")
        if is_maximal(Q, tuple(F)):
            return StarWitness(tuple(F), tuple(ks[1:]), tuple(ks), tuple(ns), N.name)
        k = N(M.get(n)) + 1
    raise InsufficientPrefix(max_steps, max_steps)


@dataclass
class Validation:
    ok: bool
    checks: dict

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def validate_star(w: StarWitness, P: Family, Q: Family, M, L, K, m: int) -> Validation:
    """Re-check conditions (i)-(iii) from the returned sets alone."""
    M, L, K = Prefix.of(M), Prefix.of(L), Prefix.of(K)
    F, E = tuple(w.F), tuple(w.E)
    checks = {}
    checks["min_above_m"] = bool(F) and F[0] > m
    checks["inside_M"] = M.positions(F) is not None
    checks["maximal_in_Q"] = _contains(Q, F) and is_maximal(Q, F)
    checks["index_identity"] = L.image(F[1:]) == K.image(E)
    checks["E_in_P"] = _contains(P, E)
    return Validation(all(checks.values()), checks)


# the thinned set T and block covers


def triangular(n: int) -> int:
    """``K(1) = 1`` and ``K(p+1) = K(p) + p + 1``."""
    return n * (n + 1) // 2


class _Tiling:
    """Successive maximal ``S_xi`` sets ``E_1 < E_2 < ...`` tiling M from the left.

    Only block start positions and lengths are stored, so blocks with
    astronomically large elements are cheap as long as there are few of them.
    """

    def __init__(self, xi: Ordinal, M: Prefix):
        self.xi = xi
        self.M = M
        self.starts = [1]  # 1-based position in M where E_i begins
        self.lengths: list[int] = []

    def _extend(self, i: int):
        fam = Schreier(self.xi)
        while len(self.lengths) < i:
            p = self.starts[-1]
            length = initial_segment_length(fam, self.M.drop(p - 1))
            self.lengths.append(length)
            self.starts.append(p + length)

    def start(self, i: int) -> int:
        self._extend(i)
        return self.starts[i - 1]

    def block(self, i: int) -> tuple[int, ...]:
        self._extend(i)
        p, length = self.starts[i - 1], self.lengths[i - 1]
        return tuple(self.M.get(q) for q in range(p, p + length))

    def min(self, i: int) -> int:
        return self.M.get(self.start(i))


def veryeasy_thin(xi, M, explicit: int = 4) -> Prefix:
    """``T(n) = min E_{K(n)}`` with ``E_i`` the greedy maximal ``S_xi`` tiling of M.

    The first ``explicit`` terms are materialized and the rest is a lazy tail.
    """
    xi = Ordinal.of(xi)
    M = Prefix.of(M)
    tiling = _Tiling(xi, M)

    @lru_cache(maxsize=None)
    def T(n: int) -> int:
        return tiling.min(triangular(n))

    head = tuple(T(n) for n in range(1, explicit + 1))
    tail = GrowthTail(f"thin(S({xi}),{M.describe()})", lambda k: T(explicit + 1 + k))
    return Prefix(head, tail)


@dataclass
class Cover:
    N: Prefix
    H: tuple
    blocks: tuple
    fillers: tuple

    def to_json(self) -> dict:
        def small(v):
            return str(v) if v > 2**53 else v

        return {
            "H": list(self.H),
            "N_prefix": [small(v) for v in self.N.elements],
            "N_tail": self.N.tail.describe() if self.N.tail is not None else None,
            "blocks": [[small(v) for v in b] for b in self.blocks],
            "fillers": [list(j) for j in self.fillers],
        }


def veryeasy_cover(xi, mu, M, F) -> Cover:
    """N inside M and H in ``F_{omega^mu}`` whose measures' supports at H tile F exactly.

    F must split into successive maximal ``S_xi`` sets inside T with block
    minima at ``F_{omega^mu}`` positions of T.  Between consecutive blocks of F,
    whole tiles ``E_i`` of M are inserted so that the block starting at
    ``T(i_n)`` becomes the ``i_n``-th measure of N.
    """
    xi, mu = Ordinal.of(xi), Ordinal.of(mu)
    M = Prefix.of(M)
    T = veryeasy_thin(xi, M)
    tiling = _Tiling(xi, M)
    F = as_set(F)
    if not F:
        return Cover(M, (), (), ())
    blocks = decompose(Schreier(xi), F)
    pos_T = T.positions(F)
    if pos_T is None:
        raise NotDecomposable(F, blocks)
    H = tuple(T.index_of(b[0]) for b in blocks)
    J = tuple(T.index_of(b[-1]) for b in blocks)
    if not _contains(FineSchreier(omega_power(mu)), H):
        raise ValueError(f"block minima sit at positions {H} of T, which is not in F(w^{mu})")
    elements: list[int] = []
    fillers = []
    prev_i, prev_j = None, None
    for n, (b, i, j) in enumerate(zip(blocks, H, J)):
        if prev_i is None:
            # i_1 - 1 tiles taken from the open interval (1, K(i_1))
            lo, hi, need = 1, triangular(i), i - 1
        else:
            lo, hi, need = triangular(prev_j), triangular(i), i - prev_i - 1
        choice = tuple(range(lo + 1, lo + 1 + need))
        if need and choice[-1] >= hi:
            raise ValueError("not enough room between blocks for the filler tiles")
        for e in choice:
            elements.extend(tiling.block(e))
        elements.extend(b)
        fillers.append(choice)
        prev_i, prev_j = i, j
    rest = M.after(elements[-1])
    N = Prefix(tuple(elements) + rest.elements, rest.tail)
    return Cover(N, H, tuple(blocks), tuple(fillers))


def validate_cover(cover: Cover, xi, F) -> Validation:
    """Recompute the repeated-averages supports of N at H and compare with F."""
    F = as_set(F)
    checks = {}
    if not cover.H:
        checks["empty"] = not F
        return Validation(all(checks.values()), checks)
    mus = measure_sequence(RepeatedAverages(Ordinal.of(xi)), cover.N, max(cover.H))
    covered = sorted(i for n in cover.H for i in mus[n - 1].support)
    checks["tiling_identity"] = tuple(covered) == F
    return Validation(all(checks.values()), checks)
