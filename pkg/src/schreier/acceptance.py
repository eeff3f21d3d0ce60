"""The acceptance suite: twelve desk-scale checks with fixed seeds.

Each check returns a :class:`CheckResult`; ``run_all`` collects them into the
report printed by ``schreier selftest``.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .audit import AuditConfig, SeqSample, gamma_profile, hereditary_check, stability_constant
from .blocks import Dirac, RepeatedAverages, measure_sequence, random_prefix, thin_for_small_coefficients, verify_axioms
from .errors import BudgetExceeded
from .families import (
    FineSchreier,
    Pair,
    Schreier,
    TensorPow,
    _contains,
    contains,
    materialize,
    members,
    tree_rank,
)
from .norms import (
    ConvexifyQ,
    DominationByLp,
    DualOf,
    HXi,
    Lp,
    SeqNormSpec,
    Tsirelson,
    convexified_norm,
    domination_constant,
    dual_norm,
    norm,
    tsirelson_norm,
)
from .oracles import tsirelson_bruteforce
from .ordinals import Ordinal
from .sequences import Prefix
from .vectors import Vec, format_scalar
from .witnesses import star_witness, validate_cover, validate_star, veryeasy_cover, veryeasy_thin

SEED = 20240


@dataclass
class CheckResult:
    id: int
    citation: str
    status: str  # pass | fail | skipped
    value: object
    expected: object
    tolerance: object
    runtime: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "citation": self.citation,
            "status": self.status,
            "value": self.value,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "runtime_ms": round(self.runtime * 1000, 1),
            "detail": self.detail,
        }

    def line(self) -> str:
        return f"[{self.status.upper():7}] #{self.id:<2} {self.citation}: value={self.value} expected={self.expected} ({self.runtime:.2f}s)"


def _timed(fn):
    def run() -> CheckResult:
        t0 = time.perf_counter()
        res = fn()
        res.runtime = time.perf_counter() - t0
        if res.status == "pass" and getattr(fn, "limit", None) is not None and res.runtime > fn.limit:
            res.status = "fail"
            res.detail = f"runtime {res.runtime:.2f}s over the {fn.limit}s limit; " + res.detail
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _limit(seconds: float):
    def deco(fn):
        fn.limit = seconds
        return fn

    return deco


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# 1-3: families


@_timed
@_limit(1.0)
def check_fine_schreier() -> CheckResult:
    """Truncations of F_n are exactly the sets of size at most n."""
    bad = []
    for n in range(6):
        got = materialize(FineSchreier(n), 10).sets
        want = {c for r in range(n + 1) for c in itertools.combinations(range(1, 11), r)}
        if got != want:
            bad.append(n)
    return CheckResult(1, "fine Schreier truncation: sets of cardinality at most n", _status(not bad), bad or "all equal", "all equal", 0, 0)


@_timed
@_limit(1.0)
def check_schreier_one() -> CheckResult:
    """S_1 membership agrees with ``|F| <= min F`` on all subsets of {1..12}."""
    wrong = 0
    count = 0
    for mask in range(1 << 12):
        F = tuple(i + 1 for i in range(12) if mask >> i & 1)
        count += 1
        if contains(Schreier(1), F) != (not F or len(F) <= F[0]):
            wrong += 1
    return CheckResult(2, "S_1 characterization |F| <= min F", _status(wrong == 0), f"{wrong} mismatches of {count}", 0, 0, 0)


@_timed
def check_tree_ranks() -> CheckResult:
    """Ranks n+1 for F_n and rank 4 for the pair of F_1 and F_2."""
    ranks = {n: tree_rank(materialize(FineSchreier(n), n + 2)) for n in range(6)}
    pair = tree_rank(materialize(Pair(FineSchreier(1), FineSchreier(2)), 6))
    ok = all(r == n + 1 for n, r in ranks.items()) and pair == 4
    value = {**{f"F({n})": r for n, r in ranks.items()}, "pair(F(1),F(2))": pair}
    expected = {**{f"F({n})": n + 1 for n in ranks}, "pair(F(1),F(2))": 4}
    return CheckResult(3, "tree ranks of fine Schreier and pair families", _status(ok), value, expected, 0, 0)


# 4: repeated averages


def _ra_samples(xi: str, rng: random.Random, count: int):
    out = []
    for _ in range(count):
        if xi == "1":
            M = random_prefix(rng, rng.randint(1, 5), 12, max_gap=3)
            r = rng.randint(1, 3)
        elif xi == "2":
            first = rng.randint(1, 3)
            M = random_prefix(rng, first, 10, max_gap=2, gap_region=4)
            r = 2 if first <= 2 and rng.random() < 0.5 else 1
        elif xi == "3":
            M = random_prefix(rng, rng.randint(1, 2), 8, max_gap=2, gap_region=2)
            r = 1
        else:
            M = random_prefix(rng, rng.randint(1, 2), 8, max_gap=2, gap_region=2)
            r = 1
        out.append((M, r))
    return out


@_timed
def check_repeated_averages() -> CheckResult:
    """First supports are maximal initial segments, weights sum to 1, permanence holds."""
    rng = random.Random(SEED + 4)
    failures = {}
    checked = 0
    for xi in ("1", "2", "3", "w"):
        rep = verify_axioms(RepeatedAverages(Ordinal.of(xi)), _ra_samples(xi, rng, 100), seed=SEED)
        checked += rep.checked
        if not rep.ok:
            failures[xi] = rep.failures[:3]
    return CheckResult(
        4,
        "repeated averages: support is M|S_xi, normalization, permanence",
        _status(not failures),
        f"{checked} prefixes, {len(failures)} orders failing",
        "0 orders failing",
        0,
        0,
        str(failures) if failures else "",
    )


# 5: Hilbert example


def _rational_orthogonal(k: int, rng: random.Random) -> list[list[Fraction]]:
    """Cayley transform ``(I - A)(I + A)^-1`` of a random skew matrix: exactly orthogonal."""
    A = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            v = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            A[i][j], A[j][i] = v, -v
    I = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    P = [[I[i][j] + A[i][j] for j in range(k)] for i in range(k)]
    Mn = [[I[i][j] - A[i][j] for j in range(k)] for i in range(k)]
    # invert P by Gauss-Jordan
    aug = [row[:] + I[i][:] for i, row in enumerate(P)]
    for c in range(k):
        piv = next(r for r in range(c, k) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for r in range(k):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    inv = [row[k:] for row in aug]
    return [[sum(Mn[i][l] * inv[l][j] for l in range(k)) for j in range(k)] for i in range(k)]


@_timed
@_limit(5.0)
def check_hilbert_example() -> CheckResult:
    """k orthonormal vectors in l_2 against the sup norm give exactly sqrt(k)."""
    rng = random.Random(SEED + 5)
    worst = 0.0
    values = {}
    for k in range(1, 9):
        Q = _rational_orthogonal(k, rng)
        seq = [Vec({i + 1: Q[i][j] for i in range(k)}) for j in range(k)]
        res = domination_constant(seq, SeqNormSpec(Lp(2), DominationByLp("inf")))
        err = abs(float(res.value) - math.sqrt(k))
        worst = max(worst, err)
        values[k] = format_scalar(res.value)
    return CheckResult(5, "orthonormal l_2 vectors against c_0: constant sqrt(k)", _status(worst <= 1e-12), values, "sqrt(k)", 1e-12, 0, f"max error {worst:.3g}")


# 6: Tsirelson


def _random_rational_vec(rng: random.Random, max_support: int, ground: int) -> Vec:
    size = rng.randint(1, max_support)
    support = sorted(rng.sample(range(1, ground + 1), size))
    return Vec({i: Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 6)) for i in support})


@_timed
@_limit(60.0)
def check_tsirelson() -> CheckResult:
    """Normal-form dynamic program equals the all-partitions oracle; ``||e_k+..+e_{2k-1}|| = k/2``."""
    rng = random.Random(SEED + 6)
    space = Tsirelson(1, Fraction(1, 2))
    mismatches = []
    for _ in range(200):
        x = _random_rational_vec(rng, 9, 12)
        a = tsirelson_norm(space, x)
        b = tsirelson_bruteforce(1, Fraction(1, 2), x)
        if a != b:
            mismatches.append((x.to_json(), str(a), str(b)))
    halves = {k: tsirelson_norm(space, Vec({i: 1 for i in range(k, 2 * k)})) for k in range(2, 7)}
    ok = not mismatches and all(v == Fraction(k, 2) for k, v in halves.items())
    return CheckResult(
        6,
        "Tsirelson norm: dynamic program against brute force, flat vectors k/2",
        _status(ok),
        {"mismatches": len(mismatches), **{f"k={k}": str(v) for k, v in halves.items()}},
        {"mismatches": 0, **{f"k={k}": str(Fraction(k, 2)) for k in halves}},
        0,
        0,
        str(mismatches[:2]) if mismatches else "",
    )


# 7: convexification sandwich


def _admissible_blocks(rng: random.Random, m: int) -> list[Vec]:
    fam = TensorPow(Schreier(1), m) if m > 1 else Schreier(1)
    while True:
        first = rng.randint(1, 4)
        t = rng.randint(1, 6)
        mins = [first]
        for _ in range(t - 1):
            mins.append(mins[-1] + rng.randint(1, 3))
        if _contains(fam, tuple(mins)):
            break
    blocks = []
    for n, lo in enumerate(mins):
        hi = mins[n + 1] - 1 if n + 1 < len(mins) else lo + rng.randint(0, 2)
        coords = {lo: Fraction(rng.randint(1, 9) * rng.choice((1, -1)), rng.randint(1, 4))}
        for i in range(lo + 1, hi + 1):
            if rng.random() < 0.6:
                coords[i] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        blocks.append(Vec(coords))
    return blocks


@_timed
@_limit(60.0)
def check_convexification_sandwich() -> CheckResult:
    """``theta^(m/q) (sum ||x_n||^q)^(1/q) <= ||sum x_n|| <= (sum ||x_n||^q)^(1/q)``."""
    rng = random.Random(SEED + 7)
    theta = Fraction(1, 2)
    base = Tsirelson(1, theta)
    worst_lower, worst_upper = -math.inf, -math.inf
    fails = []
    for trial in range(100):
        q = (1, 2)[trial % 2]
        m = (1, 2)[(trial // 2) % 2]
        space = ConvexifyQ(base, q)
        xs = _admissible_blocks(rng, m)
        total = Vec()
        for x in xs:
            total = total + x
        whole = float(convexified_norm(space, total))
        parts = math.fsum(float(convexified_norm(space, x)) ** q for x in xs) ** (1 / q)
        lower = float(theta) ** (m / q) * parts
        rel_l = (lower - whole) / max(whole, 1e-300)
        rel_u = (whole - parts) / max(parts, 1e-300)
        worst_lower, worst_upper = max(worst_lower, rel_l), max(worst_upper, rel_u)
        if rel_l > 1e-9 or rel_u > 1e-9:
            fails.append({"q": q, "m": m, "blocks": [x.to_json() for x in xs]})
    return CheckResult(
        7,
        "convexified Tsirelson sandwich over admissible blocks",
        _status(not fails),
        {"worst lower excess": worst_lower, "worst upper excess": worst_upper},
        "<= 1e-9 relative",
        1e-9,
        0,
        str(fails[:1]) if fails else "",
    )


# 8: dual bounds


@_timed
@_limit(120.0)
def check_dual_bounds() -> CheckResult:
    """Dual norms of flat S_1-admissible functionals lie in [1, 2 + 1e-6] with replayable certificates."""
    base = Tsirelson(1, Fraction(1, 2))
    space = DualOf(base, 8)
    lo, hi = math.inf, 0.0
    bad = []
    count = 0
    for G in members(Schreier(1), range(1, 9)):
        if not G:
            continue
        count += 1
        y = Vec({n: 1 for n in G})
        res = dual_norm(space, y)
        cert = res.certificate
        replay_norm = float(norm(base, cert))
        replay_pair = float(cert.dot(y.to_float()))
        replays = replay_norm <= 1 + 1e-9 and abs(replay_pair - res.value) <= 1e-9
        v = float(res.value)
        lo, hi = min(lo, v), max(hi, v)
        if not (1 - 1e-6 <= v <= 2 + 1e-6) or not replays:
            bad.append({"G": list(G), "value": v, "replays": replays})
    return CheckResult(
        8,
        "dual Tsirelson norm of flat functionals on S_1 sets",
        _status(not bad),
        {"sets": count, "min": lo, "max": hi},
        "[1, 2 + 1e-6]",
        1e-6,
        0,
        str(bad[:3]) if bad else "",
    )


# 9: H_xi spreading model


@_timed
def check_hxi_spreading() -> CheckResult:
    """``||sum_E a_n e_n|| >= sum |a_n|`` on S_xi sets, and the max-support lower bound."""
    rng = random.Random(SEED + 9)
    worst = 0.0
    fails = []
    for xi in (1, 2):
        space = HXi(Lp(2), xi)
        sets = [E for E in members(Schreier(xi), range(1, 13)) if E]
        for _ in range(100):
            E = rng.choice(sets)
            x = Vec({n: Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for n in E})
            gap = float(sum(abs(v) for v in x.values())) - float(norm(space, x))
            worst = max(worst, gap)
            if gap > 1e-9:
                fails.append(("spreading", xi, x.to_json()))
    count = 0
    for trial in range(50):
        xi = 1 if trial % 5 else 2
        space = HXi(Lp(2), xi)
        if xi == 1:
            M = random_prefix(rng, rng.randint(1, 4), 10, max_gap=2)
            t = rng.randint(1, 3)
        else:
            M = random_prefix(rng, rng.randint(1, 2), 6, max_gap=1)
            t = 2 if M.get(1) == 1 else 1
        mus = measure_sequence(RepeatedAverages(xi), M, t)
        a = [Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4)) for _ in range(t)]
        x = Vec()
        for an, mu in zip(a, mus):
            x = x + Vec({i: an * w for i, w in mu.items()})
        lhs = float(norm(space, x))
        rhs = float(norm(Lp(2), Vec({mu.support[-1]: abs(an) for an, mu in zip(a, mus)})))
        count += 1
        worst = max(worst, rhs - lhs)
        if rhs - lhs > 1e-9:
            fails.append(("max-support", xi, M.describe(), [str(v) for v in a]))
    return CheckResult(
        9,
        "H_xi basis: l_1^xi spreading model and max-support lower bound",
        _status(not fails),
        {"worst excess": worst, "pairs": count},
        "<= 1e-9",
        1e-9,
        0,
        str(fails[:2]) if fails else "",
    )


# 10: witness replay


_STAR_PAIRS = [
    (Schreier(1), Schreier(1)),
    (Schreier(1), Schreier(0)),
    (Schreier(2), Schreier(1)),
    (Schreier(2), Schreier(0)),
    (Schreier(1), FineSchreier(2)),
    (Schreier(1), FineSchreier(3)),
    (Schreier(2), FineSchreier(4)),
]


def _random_infinite(rng: random.Random, first: int, length: int) -> Prefix:
    return random_prefix(rng, first, length, max_gap=3, gap_region=length)


@_timed
def check_witness_replay() -> CheckResult:
    """Block covers tile exactly and index-matching witnesses satisfy their three conditions."""
    rng = random.Random(SEED + 10)
    cover_fail, star_fail = [], []
    for trial in range(50):
        M = _random_infinite(rng, rng.randint(1, 4), 8)
        T = veryeasy_thin(1, M)
        if trial == 0:
            F = ()
        else:
            i = rng.randint(1, 3)
            F = tuple(T.get(j) for j in range(i, i + T.get(i)))
        cover = veryeasy_cover(1, 1, M, F)
        val = validate_cover(cover, 1, F)
        inside = M.positions(cover.N.elements) is not None
        if not val.ok or not inside:
            cover_fail.append({"M": M.describe(), "F_min": F[:1], "checks": val.checks, "N_inside_M": inside})
    for trial in range(50):
        P, Q = _STAR_PAIRS[trial % len(_STAR_PAIRS)]
        M = _random_infinite(rng, rng.randint(1, 3), 6)
        L = _random_infinite(rng, rng.randint(1, 3), 6)
        R = _random_infinite(rng, rng.randint(1, 2), 6)
        K = L.compose(M).compose(R)
        m = rng.randint(0, 5)
        w = star_witness(P, Q, M, L, K, m)
        val = validate_star(w, P, Q, M, L, K, m)
        if not val.ok:
            star_fail.append({"P": str(P), "Q": str(Q), "m": m, "checks": val.checks})
    ok = not cover_fail and not star_fail
    return CheckResult(
        10,
        "witness replay: block-cover tiling identity and index-matching conditions",
        _status(ok),
        {"cover failures": len(cover_fail), "star failures": len(star_fail)},
        {"cover failures": 0, "star failures": 0},
        0,
        0,
        str((cover_fail + star_fail)[:2]) if not ok else "",
    )


# 11: audit laws


def _audit_sample(rng: random.Random, count: int) -> SeqSample:
    vecs = []
    for _ in range(count):
        coords = {rng.randint(1, 6): Fraction(rng.randint(-4, 4), 8) for _ in range(2)}
        v = Vec(coords)
        vecs.append(v if v else Vec({1: Fraction(1, 2)}))
    return SeqSample(vecs, ground=Lp(2))


@_timed
def check_audit_laws() -> CheckResult:
    """Goodness is hereditary; the profile is zero at 0, monotone and obeys both shift laws."""
    rng = random.Random(SEED + 11)
    spec = SeqNormSpec(Lp(2), DominationByLp("inf"))
    violations = []
    law_count = 0
    sample = _audit_sample(rng, 14)
    for block, G in ((Dirac(), (2, 3, 5, 7, 8)), (RepeatedAverages(1), (2, 3, 4, 5, 6, 7))):
        cfg = AuditConfig(block, 0, 0, spec, Prefix(G))
        subsets = [S for r in range(len(G) + 1) for S in itertools.combinations(G, r)]
        bad = hereditary_check(G, cfg, sample, subsets)
        law_count += len(subsets)
        violations += [("hereditary", str(block), b) for b in bad]
    for block, M, grid in (
        (Dirac(), Prefix(tuple(range(1, 9))), ("0", "1", "2", "3", "4", "w", "w+1", "w*2")),
        (RepeatedAverages(1), Prefix(tuple(range(2, 14))), ("0", "1", "2", "3", "w", "w+1")),
    ):
        cfg = AuditConfig(block, 0, 0, spec, M)
        prof = gamma_profile(cfg, sample, grid, ks=(0, 1, 2))
        law_count += len(prof.laws)
        violations += [(l.law, str(block), l.detail) for l in prof.laws if not l.ok]
    return CheckResult(
        11,
        "audit laws: hereditary goodness, zero, monotone and shift laws of the profile",
        _status(not violations),
        {"checks": law_count, "violations": len(violations)},
        {"violations": 0},
        0,
        0,
        str(violations[:3]) if violations else "",
    )


# 12: the l_2 direction


def _hxi_block_sample(rng: random.Random, count: int, space) -> SeqSample:
    vecs, c = [], 1
    for _ in range(count):
        size = rng.randint(1, 3)
        v = Vec({c + j: Fraction(rng.randint(1, 9) * rng.choice((1, -1))) for j in range(size)})
        c += size + rng.randint(0, 2)
        vecs.append(v.to_float() * (1 / float(norm(space, v))))
    return SeqSample(vecs, ground=space)


@_timed
def check_l2_direction() -> CheckResult:
    """Certified upper bounds of truncated stability constants in H_1 over l_2 stay below 1.1."""
    rng = random.Random(SEED + 12)
    space = HXi(Lp(2), 1)
    spec = SeqNormSpec(space, DominationByLp(2))
    worst_upper, worst_lower = 0.0, 0.0
    try:
        for trial in range(20):
            L = random_prefix(rng, rng.randint(2, 3), 6, max_gap=2)
            thin = thin_for_small_coefficients(RepeatedAverages(1), L, [Fraction(1, 2**n) for n in range(1, 13)], seed=trial)
            M = thin.prefix
            sample = _hxi_block_sample(rng, M.elements[-1], space)
            cfg = AuditConfig(RepeatedAverages(1), "w1", 0, spec, M)
            ev = stability_constant(cfg, sample)
            worst_upper = max(worst_upper, float(ev.upper))
            worst_lower = max(worst_lower, float(ev.value))
    except BudgetExceeded as exc:
        return CheckResult(12, "H_1 over l_2: stability constants at most 1", "skipped", None, "<= 1.1", 0.1, 0, f"budget-limited: {exc}")
    return CheckResult(
        12,
        "H_1 over l_2: stability constants at most 1",
        _status(worst_upper <= 1.1),
        {"worst certified upper": worst_upper, "worst lower": worst_lower},
        "<= 1.1",
        0.1,
        0,
    )


CHECKS: list[Callable[[], CheckResult]] = [
    check_fine_schreier,
    check_schreier_one,
    check_tree_ranks,
    check_repeated_averages,
    check_hilbert_example,
    check_tsirelson,
    check_convexification_sandwich,
    check_dual_bounds,
    check_hxi_spreading,
    check_witness_replay,
    check_audit_laws,
    check_l2_direction,
]


def run_all(only: set[int] | None = None) -> list[CheckResult]:
    out = []
    for i, fn in enumerate(CHECKS, 1):
        if only and i not in only:
            continue
        try:
            out.append(fn())
        except Exception as exc:  # report, do not abort the suite
            out.append(CheckResult(i, fn.__doc__.strip().splitlines()[0], "fail", None, None, None, 0.0, f"{type(exc).__name__}: {exc}"))
    return out
