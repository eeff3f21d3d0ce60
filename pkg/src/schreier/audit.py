"""Truncated goodness and stability constants for convex block sequences.

A sample ``(x_1, x_2, ...)`` and a probability block give, for every finite
set F that splits into successive maximal companion blocks ``F_1 < ... < F_t``,
the convex block sequence ``E_F = (sum_i P_{F,n}(i) x_i)_{n<=t}``.  The
quantity of interest is the domination constant ``s_k(E_F)`` against the
target basis shifted by k.

Everything here works on finite truncations.  Extending a chain of blocks only
appends vectors to ``E_F``, which cannot lower ``s_k``, so maxima are taken over
chains that cannot be extended inside the truncation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .blocks import Block, Dirac, as_block, convex_block
from .config import Counter, default_budget
from .errors import BudgetExceeded
from .families import (
    FineSchreier,
    _contains,
    almost_monotone_threshold,
    as_set,
    is_maximal,
    members,
)
from .norms import SeqNormSpec, domination_constant, is_symmetric, norm
from .ordinals import Ordinal, parse_index
from .sequences import Prefix
from .vectors import Vec, format_scalar

MAX_GOOD_SIZE = 14


@dataclass
class SeqSample:
    """Vectors ``x_1, x_2, ...`` (1-based) in a ground space."""

    vectors: list
    label: str = ""
    ground: object = None

    def __post_init__(self):
        self.vectors = [v if isinstance(v, Vec) else Vec(v) for v in self.vectors]
        if self.ground is not None:
            for i, v in enumerate(self.vectors, 1):
                nv = norm(self.ground, v)
                if nv > 1 + 1e-12:
                    raise ValueError(f"x_{i} has norm {float(nv):.6g} > 1 in {self.ground}")

    def __len__(self):
        return len(self.vectors)

    def as_map(self) -> dict[int, Vec]:
        return {i: v for i, v in enumerate(self.vectors, 1)}

    def covers(self, indices: Iterable[int]) -> bool:
        return all(1 <= i <= len(self.vectors) for i in indices)

    def to_json(self) -> list:
        return [v.to_json() for v in self.vectors]


@dataclass
class AuditConfig:
    block: Block
    zeta: Ordinal
    k: int
    spec: SeqNormSpec
    ground_prefix: Prefix
    budget: int | None = None
    max_good_size: int = MAX_GOOD_SIZE

    def __post_init__(self):
        self.block = as_block(self.block)
        self.zeta = parse_index(self.zeta)
        self.ground_prefix = Prefix.of(self.ground_prefix)
        if self.k < 0:
            raise ValueError("the shift k must be nonnegative")
        if self.budget is None:
            self.budget = default_budget()
        if self.budget <= 0:
            raise ValueError("budget must be positive")

    @property
    def shifted_spec(self) -> SeqNormSpec:
        return replace(self.spec, shift=self.k)

    def with_(self, **kw) -> AuditConfig:
        return replace(self, **kw)


@dataclass
class Evaluation:
    """``s_k(E_F)`` for one set F together with its block decomposition."""

    F: tuple
    blocks: tuple
    value: Fraction | float
    exact: bool
    upper: Fraction | float | None = None

    def __post_init__(self):
        if self.upper is None:
            self.upper = self.value

    def to_json(self) -> dict:
        out = {
            "F": list(self.F),
            "blocks": [list(b) for b in self.blocks],
            "value": format_scalar(self.value),
            "exact": self.exact,
        }
        if not self.exact:
            out["upper"] = format_scalar(self.upper)
        return out


def _prefix_elements(M: Prefix, limit: int = 40) -> tuple[int, ...]:
    if M.is_infinite:
        return M.take(limit)
    return M.elements


def _maximal_blocks(P, ground: Sequence[int], counter: Counter) -> dict[int, list[tuple]]:
    """Maximal members of P inside ``ground``, grouped by their minimum."""
    out: dict[int, list[tuple]] = {}
    for B in members(P, ground, counter.budget):
        counter.tick()
        if B and is_maximal(P, B):
            out.setdefault(B[0], []).append(B)
    for v in out.values():
        v.sort()
    return out


def evaluate_set(cfg: AuditConfig, sample: SeqSample, blocks: Sequence[tuple]) -> Evaluation:
    """``s_k(E_F)`` for ``F = B_1 u ... u B_t`` given as its block list."""
    F = tuple(i for b in blocks for i in b)
    if not sample.covers(F):
        raise ValueError(f"the sample has no vector for some index of {F}")
    if not blocks:
        return Evaluation((), (), Fraction(0), True)
    seq = convex_block(cfg.block, F, sample.as_map())
    res = domination_constant(seq, cfg.shifted_spec, budget=cfg.budget)
    return Evaluation(F, tuple(blocks), res.value, res.exact, res.upper)


def _better(a: Evaluation | None, b: Evaluation) -> bool:
    # ties go to the lexicographically first witness
    return a is None or b.value > a.value


def _best_of(evaluations: Iterable[Evaluation]) -> Evaluation:
    """The evaluation with the largest value, carrying the largest upper bound seen.

    For inexact evaluations the value is a lower bound, so the maximum over
    sets is bracketed by the best value and the largest upper bound.
    """
    best, top, exact = None, None, True
    for ev in evaluations:
        exact = exact and ev.exact
        if top is None or ev.upper > top:
            top = ev.upper
        if _better(best, ev):
            best = ev
    if best is None:
        return Evaluation((), (), Fraction(0), True)
    return Evaluation(best.F, best.blocks, best.value, exact, top)


def _walk_chains(blocks_by_min, allowed, counter: Counter):
    """Yield every chain of successive blocks that admits no further block.

    ``allowed(chain)`` decides whether a chain stays in the family; it must be
    hereditary in the chain so that failing chains can be pruned.
    """
    starts = sorted(blocks_by_min)

    def rec(chain: tuple, last: int):
        counter.tick()
        extended = False
        for s in starts:
            if s <= last:
                continue
            for B in blocks_by_min[s]:
                nxt = chain + (B,)
                if allowed(nxt):
                    extended = True
                    yield from rec(nxt, B[-1])
        if not extended:
            yield chain

    yield from rec((), 0)


def goodness_constant(G: Iterable[int], cfg: AuditConfig, sample: SeqSample) -> Evaluation:
    """Largest ``s_k(E_F)`` over sets ``F`` inside G made of successive maximal blocks.

    G is good for a constant C exactly when the returned value is at most C.
    """
    G = as_set(G)
    if len(G) > cfg.max_good_size:
        raise BudgetExceeded(f"goodness over |G| = {len(G)}", cfg.max_good_size)
    if not G:
        return Evaluation((), (), Fraction(0), True)
    P = cfg.block.companion()
    if isinstance(cfg.block, Dirac) and is_symmetric(cfg.spec.target_space):
        # any subsequence is the full sequence with some coefficients set to zero
        return evaluate_set(cfg, sample, tuple((g,) for g in G))
    counter = Counter("goodness enumeration", cfg.budget)
    by_min = _maximal_blocks(P, G, counter)
    return _best_of(evaluate_set(cfg, sample, chain) for chain in _walk_chains(by_min, lambda c: True, counter))


def _stability_chains(cfg: AuditConfig, counter: Counter, elements: tuple | None = None):
    """Chains of maximal blocks inside the prefix whose minima sit at F_zeta positions of M."""
    M = cfg.ground_prefix
    elements = _prefix_elements(M) if elements is None else elements
    P = cfg.block.companion()
    outer = FineSchreier(cfg.zeta)
    index = {v: n for n, v in enumerate(elements, 1)}
    by_min = _maximal_blocks(P, elements, counter)

    def allowed(chain):
        return _contains(outer, tuple(index[B[0]] for B in chain))

    return _walk_chains(by_min, allowed, counter)


def stability_constant(cfg: AuditConfig, sample: SeqSample) -> Evaluation:
    """The least C making the truncated ``(zeta, k, C)``-stability hold for (sample, M).

    Equal to the largest goodness constant over members of the relative
    composition family inside the prefix; the family is hereditary, so this is
    the largest ``s_k(E_F)`` over its members that split into maximal blocks.
    This is a truncation constant, not the infinitary Gamma.
    """
    counter = Counter("stability enumeration", cfg.budget)
    return _best_of(evaluate_set(cfg, sample, chain) for chain in _stability_chains(cfg, counter))


@dataclass
class Witness:
    evaluation: Evaluation
    threshold: Fraction | float

    found = True

    def to_json(self) -> dict:
        return {"found": True, "threshold": format_scalar(self.threshold), **self.evaluation.to_json()}


@dataclass
class Exhausted:
    best: Evaluation | None
    threshold: Fraction | float
    searched: int

    found = False

    @property
    def max_value(self):
        return self.best.value if self.best is not None else Fraction(0)

    def to_json(self) -> dict:
        out = {"found": False, "threshold": format_scalar(self.threshold), "searched": self.searched}
        out["max_value"] = format_scalar(self.max_value)
        if self.best is not None:
            out["best"] = self.best.to_json()
        return out


def gamma_lower_search(cfg: AuditConfig, sample: SeqSample, D) -> Witness | Exhausted:
    """Look for a non-extendable member F of the truncated family with ``s_k(E_F) >= D``.

    Exhausted only says no such F exists inside this truncation.
    """
    counter = Counter("witness search", cfg.budget)
    best, searched = None, 0
    for chain in _stability_chains(cfg, counter):
        searched += 1
        ev = evaluate_set(cfg, sample, chain)
        if ev.value >= D:
            return Witness(ev, D)
        if _better(best, ev):
            best = ev
    return Exhausted(best, D, searched)


# profile and its laws


DEFAULT_GRID = ("0", "1", "2", "3", "4", "5", "6", "w", "w+1", "w*2", "w^2")


@dataclass
class LawCheck:
    law: str
    detail: str
    lhs: object
    rhs: object
    ok: bool

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "detail": self.detail,
            "lhs": format_scalar(self.lhs),
            "rhs": format_scalar(self.rhs),
            "ok": self.ok,
        }


@dataclass
class Profile:
    zetas: list
    ks: list
    values: dict
    laws: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def ok(self) -> bool:
        return all(l.ok for l in self.laws)

    def to_json(self) -> dict:
        return {
            "kind": "truncation constant",
            "zetas": [str(z) for z in self.zetas],
            "ks": list(self.ks),
            "values": {f"{z}|{k}": format_scalar(v.value) for (z, k), v in self.values.items()},
            "laws": [l.to_json() for l in self.laws],
            "ok": self.ok,
        }


def _le(a, b, tol: float) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return float(a) <= float(b) + tol


def _drop_supports(cfg: AuditConfig, p: int) -> Prefix:
    """M with the supports of its first p measures removed."""
    elements = list(_prefix_elements(cfg.ground_prefix))
    for _ in range(p):
        mu = cfg.block.first(Prefix(tuple(elements)))
        elements = elements[len(mu) :]
    return Prefix(tuple(elements))


def gamma_profile(
    cfg: AuditConfig,
    sample: SeqSample,
    zetas: Sequence = DEFAULT_GRID,
    ks: Sequence[int] = (0, 1, 2),
    tol: float = 1e-9,
    check_laws: bool = True,
) -> Profile:
    """Stability constants over a grid of (zeta, k), with the structural laws checked.

    Laws checked at the truncation:

    * ``zeta = 0`` gives 0;
    * for ``mu <= zeta`` on the grid, the constant for mu on M with its first l
      elements dropped is at most the constant for zeta on M, where l is the
      almost-monotone threshold of ``F_mu`` into ``F_zeta`` (l = 0 gives plain
      monotonicity of the column);
    * ``value(zeta + p, k) <= p + value(zeta, k + p)`` on the same M whenever
      both entries are on the grid;
    * ``value(zeta, k + p)`` on M minus its first p block supports is at most
      ``value(zeta + p, k)`` on M.
    """
    t0 = time.perf_counter()
    zetas = [parse_index(z) for z in zetas]
    values: dict = {}
    for z in zetas:
        for k in ks:
            values[(z, k)] = stability_constant(cfg.with_(zeta=z, k=k), sample)
    prof = Profile(zetas, list(ks), values)
    if not check_laws:
        prof.runtime = time.perf_counter() - t0
        return prof
    laws = prof.laws
    N = len(_prefix_elements(cfg.ground_prefix))
    for z in zetas:
        if z == 0:
            for k in ks:
                v = values[(z, k)].value
                laws.append(LawCheck("zero", f"k={k}", v, 0, v == 0))
    for k in ks:
        for i, mu in enumerate(zetas):
            for z in zetas[i + 1 :]:
                if not mu <= z:
                    continue
                l = almost_monotone_threshold(mu, z, N, cfg.budget)
                if l is None or l >= N:
                    continue
                if l == 0:
                    lhs = values[(mu, k)].value
                else:
                    shifted = cfg.with_(zeta=mu, k=k, ground_prefix=Prefix(_prefix_elements(cfg.ground_prefix)[l:]))
                    lhs = stability_constant(shifted, sample).value
                rhs = values[(z, k)].value
                laws.append(LawCheck("monotone", f"mu={mu} zeta={z} k={k} drop={l}", lhs, rhs, _le(lhs, rhs, tol)))
    for z in zetas:
        if not isinstance(z, Ordinal):
            continue
        for k in ks:
            for p in range(1, 4):
                zp = z + p
                if (zp, k) not in values or (z, k + p) not in values:
                    continue
                lhs = values[(zp, k)].value
                rhs_v = values[(z, k + p)].value
                laws.append(LawCheck("shift-up", f"zeta={z} p={p} k={k}", lhs, p + rhs_v, _le(lhs, p + rhs_v, tol)))
                dropped = cfg.with_(zeta=z, k=k + p, ground_prefix=_drop_supports(cfg, p))
                lhs2 = stability_constant(dropped, sample).value
                laws.append(LawCheck("shift-down", f"zeta={z} p={p} k={k}", lhs2, lhs, _le(lhs2, lhs, tol)))
    prof.runtime = time.perf_counter() - t0
    return prof


def hereditary_check(G: Iterable[int], cfg: AuditConfig, sample: SeqSample, subsets: Iterable[Iterable[int]]) -> list:
    """Goodness of subsets never exceeds goodness of G; returns violations."""
    top = goodness_constant(G, cfg, sample).value
    bad = []
    for H in subsets:
        v = goodness_constant(H, cfg, sample).value
        if not _le(v, top, 1e-9):
            bad.append((tuple(H), v, top))
    return bad
