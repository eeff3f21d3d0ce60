"""Norms on c_00 and domination constants of finite vector sequences.

Spaces are small immutable expressions:

* ``Lp(p)`` and ``C0()``;
* ``Tsirelson(mu, theta)``, the Figiel-Johnson space whose norm is the larger
  of the sup norm and ``theta`` times the best sum of norms over families of
  successive intervals with minima in ``S_mu``;
* ``ConvexifyQ(base, q)`` with ``||x|| = || (|x_i|^q) ||_base^(1/q)``;
* ``DualOf(base, N)``, the dual norm of a Tsirelson-type space on ``{1..N}``;
* ``HXi(H, xi)``, where a vector is cut into successive ``S_xi`` sets whose
  l_1 masses are placed at the set maxima and measured in ``H``.

Exact ``Fraction`` arithmetic is used wherever the norm is a finite maximum
of rational linear forms; everything else is a float, and every result built
by :func:`evaluate` records which of the two it is.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from .config import DEFAULT_TOL, Counter
from .errors import BudgetExceeded
from .families import Schreier, _contains, members
from .ordinals import Ordinal
from .vectors import Vec, format_scalar, to_scalar

INF = math.inf


# space expressions


@dataclass(frozen=True)
class Lp:
    p: Fraction | float

    def __post_init__(self):
        p = self.p
        if isinstance(p, str):
            p = INF if p.strip().lower() in {"inf", "infinity", "oo"} else Fraction(p)
        elif isinstance(p, int):
            p = Fraction(p)
        if p != INF and p < 1:
            raise ValueError("l_p needs p >= 1")
        object.__setattr__(self, "p", p)

    def __str__(self):
        return "linf" if self.p == INF else f"l{format_scalar(self.p)}"


@dataclass(frozen=True)
class C0:
    def __str__(self):
        return "c0"


@dataclass(frozen=True)
class Tsirelson:
    mu: Ordinal
    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu", Ordinal.of(self.mu))
        theta = to_scalar(self.theta)
        if not 0 < theta < 1:
            raise ValueError("theta must lie strictly between 0 and 1")
        object.__setattr__(self, "theta", theta)

    def __str__(self):
        return f"T(mu={self.mu},theta={format_scalar(self.theta)})"


@dataclass(frozen=True)
class ConvexifyQ:
    base: Tsirelson
    q: Fraction

    def __post_init__(self):
        q = to_scalar(self.q)
        if q < 1:
            raise ValueError("convexification needs q >= 1")
        object.__setattr__(self, "q", q)

    def __str__(self):
        return f"conv({self.base},q={format_scalar(self.q)})"


@dataclass(frozen=True)
class DualOf:
    base: Tsirelson | ConvexifyQ
    N: int

    def __post_init__(self):
        if not isinstance(self.base, (Tsirelson, ConvexifyQ)):
            raise ValueError("duals are available for Tsirelson spaces and their convexifications")
        if self.N < 1:
            raise ValueError("the ground size must be positive")

    def __str__(self):
        return f"dual({self.base},N={self.N})"


@dataclass(frozen=True)
class HXi:
    H: object
    xi: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "xi", Ordinal.of(self.xi))

    def __str__(self):
        return f"hxi({self.H},xi={self.xi})"


Space = Lp | C0 | Tsirelson | ConvexifyQ | DualOf | HXi


def is_symmetric(space) -> bool:
    return isinstance(space, (Lp, C0))


def is_left_dominant(space) -> bool:
    """Moving coefficients to earlier basis vectors never lowers the norm."""
    return isinstance(space, (Lp, C0, DualOf))


def _sup_like(space) -> bool:
    return isinstance(space, C0) or (isinstance(space, Lp) and space.p == INF)


def _exact_for(space, x: Vec) -> bool:
    """Whether the norm of x in this space comes out as an exact rational."""
    if not x.exact:
        return False
    if isinstance(space, C0):
        return True
    if isinstance(space, Lp):
        return space.p in (1, INF)
    if isinstance(space, Tsirelson):
        return isinstance(space.theta, Fraction)
    if isinstance(space, ConvexifyQ):
        return space.q == 1 and isinstance(space.base.theta, Fraction)
    if isinstance(space, HXi):
        return isinstance(space.H, (C0, Tsirelson)) or (isinstance(space.H, Lp) and space.H.p in (1, INF))
    return False


@dataclass
class NormResult:
    value: Fraction | float
    exact: bool
    mode: str
    certificate: object = None
    upper: Fraction | float | None = None

    def to_json(self) -> dict:
        out = {"value": format_scalar(self.value), "exact": self.exact, "mode": self.mode}
        if self.upper is not None:
            out["upper"] = format_scalar(self.upper)
        if isinstance(self.certificate, Vec):
            out["certificate"] = self.certificate.to_json()
        elif self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def _as_vec(x) -> Vec:
    return x if isinstance(x, Vec) else Vec(x)


# l_p and c_0


def lp_norm(p, x: Vec):
    x = _as_vec(x)
    if not x:
        return Fraction(0) if x.exact else 0.0
    if p == INF:
        return x.linf()
    if p == 1:
        return x.l1()
    pf = float(p)
    return math.fsum(abs(float(v)) ** pf for v in x.values()) ** (1.0 / pf)


# Tsirelson


def _tsirelson_general(mu: Ordinal, theta, pos, vals, counter: Counter):
    """Interval recursion for an arbitrary order ``mu``.

    Same normal form as the order-1 kernel: intervals start at support points,
    cover everything from the first start on, and number at least two.  The
    minima are tested against ``S_mu`` as the partition grows; ``S_mu`` is
    hereditary, so a failing partial list of minima is pruned.
    """
    n = len(vals)
    fam = Schreier(mu)
    N = [[None] * n for _ in range(n)]
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length - 1
            best = max(vals[i : j + 1])
            inner = None

            def grow(a, mins, acc):
                nonlocal inner
                for e in range(a, j + 1):
                    counter.tick()
                    if e == j:
                        if len(mins) >= 2 and (inner is None or acc + N[a][j] > inner):
                            inner = acc + N[a][j]
                        continue
                    nxt = mins + (pos[e + 1],)
                    if _contains(fam, nxt):
                        grow(e + 1, nxt, acc + N[a][e])

            for s in range(i, j):
                if _contains(fam, (pos[s],)):
                    # the first group is [s..e]; the second starts at e+1
                    for e in range(s, j):
                        counter.tick()
                        mins = (pos[s], pos[e + 1])
                        if _contains(fam, mins):
                            grow(e + 1, mins, N[s][e])
            if inner is not None and theta * inner > best:
                best = theta * inner
            N[i][j] = best
    return N[0][n - 1]


def tsirelson_norm(space: Tsirelson, x, budget: int | None = None):
    x = _as_vec(x)
    if not x:
        return Fraction(0) if x.exact else 0.0
    pos = list(x.support)
    vals = [abs(v) for v in x.values()]
    theta = space.theta if x.exact else float(space.theta)
    if space.mu == 1:
        return kernels.tsirelson_s1(pos, vals, theta)
    return _tsirelson_general(space.mu, theta, pos, vals, Counter("Tsirelson recursion", budget))


def _qth_powers(x: Vec, q) -> Vec:
    if x.exact and isinstance(q, Fraction) and q.denominator == 1:
        e = int(q)
        return Vec._raw({i: abs(v) ** e for i, v in x.items()}, True)
    qf = float(q)
    return Vec._raw({i: abs(float(v)) ** qf for i, v in x.items()}, False)


def convexified_power(space: ConvexifyQ, x, budget: int | None = None):
    """``||x||^q``, exact for integer q on rational input."""
    return tsirelson_norm(space.base, _qth_powers(_as_vec(x), space.q), budget)


def convexified_norm(space: ConvexifyQ, x, budget: int | None = None):
    val = convexified_power(space, x, budget)
    if space.q == 1:
        return val
    return float(val) ** (1.0 / float(space.q))


# norming sets and duals


def _dominated(f: tuple, g: tuple) -> bool:
    return all(a <= b for a, b in zip(f, g))


def positive_norming_set(space: Tsirelson, N: int, budget: int | None = None) -> list[Vec]:
    """Nonnegative functionals on ``{1..N}`` norming the Tsirelson space.

    Starts from the coordinate functionals and closes under
    ``theta (f_1 + ... + f_t)`` for successive ``f_1 < ... < f_t`` (t >= 2) whose
    support minima lie in ``S_mu``.  A functional is discarded when another one
    with the same support minimum and maximum dominates it coordinatewise: the
    survivor can stand in for it in any later combination.
    """
    theta = space.theta
    fam = Schreier(space.mu)
    counter = Counter("norming set", budget)
    # functionals as (min, max, coefficient tuple over 1..N)
    zero = [Fraction(0)] * N
    by_span: dict[tuple[int, int], list[tuple]] = {}
    for i in range(1, N + 1):
        c = list(zero)
        c[i - 1] = Fraction(1)
        by_span[(i, i)] = [tuple(c)]

    def add(lo, hi, coeffs) -> bool:
        bucket = by_span.setdefault((lo, hi), [])
        if any(_dominated(coeffs, g) for g in bucket):
            return False
        bucket[:] = [g for g in bucket if not _dominated(g, coeffs)]
        bucket.append(coeffs)
        return True

    fresh = {(lo, hi, c) for (lo, hi), cs in by_span.items() for c in cs}
    while fresh:
        current = sorted((lo, hi, c) for (lo, hi), cs in by_span.items() for c in cs)
        starts: dict[int, list] = {}
        for item in current:
            starts.setdefault(item[0], []).append(item)
        produced = []

        def chain(last_hi, mins, acc, used_fresh):
            for lo in range(last_hi + 1, N + 1):
                nxt = mins + (lo,)
                if not _contains(fam, nxt):
                    # S_mu is spreading, so a larger minimum may still pass
                    continue
                for item in starts.get(lo, ()):
                    counter.tick()
                    _, hi, c = item
                    total = tuple(a + b for a, b in zip(acc, c))
                    uf = used_fresh or item in fresh
                    if len(nxt) >= 2 and uf:
                        produced.append((mins[0] if mins else lo, hi, tuple(theta * v for v in total)))
                    chain(hi, nxt, total, uf)

        chain(0, (), tuple(zero), False)
        fresh = set()
        for lo, hi, c in produced:
            if add(lo, hi, c):
                fresh.add((lo, hi, c))
        # entries removed by domination are no longer live
        live = {(lo, hi, c) for (lo, hi), cs in by_span.items() for c in cs}
        fresh &= live
    out = []
    for (lo, hi), cs in sorted(by_span.items()):
        for c in cs:
            out.append(Vec._raw({i + 1: v for i, v in enumerate(c) if v}, True))
    return out


def norming_set(space: Tsirelson, N: int, budget: int | None = None) -> list[Vec]:
    """All sign variants of :func:`positive_norming_set`."""
    counter = Counter("norming set signs", budget)
    out = []
    for f in positive_norming_set(space, N, budget):
        supp = f.support
        for signs in itertools.product((1, -1), repeat=len(supp)):
            counter.tick()
            out.append(Vec._raw({i: s * f[i] for i, s in zip(supp, signs)}, True))
    return out


def norm_from_set(functionals: Sequence[Vec], x) -> Fraction | float:
    x = _as_vec(x).abs()
    return max((f.dot(x) for f in functionals), default=Fraction(0))


_NORMING_CACHE: dict = {}


def _cached_norming(space: Tsirelson, N: int, budget):
    key = (space, N)
    if key not in _NORMING_CACHE:
        _NORMING_CACHE[key] = positive_norming_set(space, N, budget)
    return _NORMING_CACHE[key]


def _base_parts(space: DualOf) -> tuple[Tsirelson, Fraction]:
    if isinstance(space.base, ConvexifyQ):
        return space.base.base, space.base.q
    return space.base, Fraction(1)


def _constraint_matrix(K: Sequence[Vec], cols: Sequence[int]):
    import numpy as np

    rows = {tuple(float(f[i]) for i in cols) for f in K}
    rows.discard(tuple(0.0 for _ in cols))
    A = np.array(sorted(rows), dtype=float)
    return A


def dual_norm(space: DualOf, y, budget: int | None = None, tol: float = 1e-6) -> NormResult:
    """Dual norm of y with a primal certificate and a dual upper bound.

    With ``q = 1`` the unit ball is the polytope cut out by the norming set and
    the problem is a linear program.  For ``q > 1`` the ball is
    ``{u >= 0 : <f, u^q> <= 1}``, a convex set; the value reported is always a
    feasible certificate's pairing with y, and the upper bound comes from the
    Lagrangian dual of the solver's multipliers.
    """
    import numpy as np

    y = _as_vec(y)
    if y and y.range[1] > space.N:
        raise ValueError(f"support of y must lie inside 1..{space.N}")
    if not y:
        return NormResult(0.0, False, "lp", Vec(), 0.0)
    base, q = _base_parts(space)
    K = _cached_norming(base, space.N, budget)
    cols = list(y.support)
    a = np.array([abs(float(y[i])) for i in cols])
    A = _constraint_matrix(K, cols)
    if q == 1:
        from scipy.optimize import linprog

        res = linprog(-a, A_ub=A, b_ub=np.ones(len(A)), bounds=[(0, None)] * len(cols), method="highs")
        if res.status != 0:
            raise RuntimeError(f"LP solver failed: {res.message}")
        u = np.maximum(res.x, 0.0)
        lam = np.maximum(-res.ineqlin.marginals, 0.0)
        c = A.T @ lam
        with np.errstate(divide="ignore"):
            scale = max(float(np.max(np.where(a > 0, a / np.where(c > 0, c, 0.0), 0.0))), 0.0)
        upper = scale * float(lam.sum()) if np.isfinite(scale) else INF
        mode = "lp"
    else:
        import cvxpy as cp

        qf = float(q)
        u_var = cp.Variable(len(cols), nonneg=True)
        cons = [A @ cp.power(u_var, qf) <= 1]
        prob = cp.Problem(cp.Maximize(a @ u_var), cons)
        prob.solve()
        if u_var.value is None:
            raise RuntimeError(f"convex solver failed: {prob.status}")
        u = np.maximum(np.asarray(u_var.value, dtype=float), 0.0)
        lam = np.maximum(np.asarray(cons[0].dual_value, dtype=float).ravel(), 0.0)
        c = A.T @ lam
        upper = float(lam.sum())
        for ai, ci in zip(a, c):
            if ai <= 0:
                continue
            if ci <= 0:
                upper = INF
                break
            # max_u a u - c u^q = (1 - 1/q) a (a / (q c))^(1/(q-1))
            upper += (1 - 1 / qf) * ai * (ai / (qf * ci)) ** (1 / (qf - 1))
        mode = "convex"
    # rescale the solver's point onto the ball using the exact primal norm
    x = Vec._raw({i: math.copysign(float(ui), float(y[i])) for i, ui in zip(cols, u)}, False)
    primal = ConvexifyQ(base, q) if q != 1 else base
    nx = norm(primal, x, budget)
    if nx > 1:
        x = x / nx
    value = float(x.dot(y.to_float()))
    gap = upper - value
    flag = "ok" if gap <= tol * max(1.0, abs(value)) else "numeric-tolerance"
    return NormResult(value, False, f"{mode}:{flag}", x, upper)


# H_xi


def _block_options(xi: Ordinal, pos: Sequence[int], vals: Sequence, counter: Counter) -> dict:
    """Best l_1 mass for each (first point, last point) over S_xi subsets of the support."""
    best: dict[tuple[int, int], object] = {}
    index = {p: k for k, p in enumerate(pos)}
    for E in members(Schreier(xi), pos):
        if not E:
            continue
        counter.tick()
        a, b = index[E[0]], index[E[-1]]
        m = sum((vals[index[p]] for p in E), vals[0] - vals[0])
        if (a, b) not in best or m > best[(a, b)]:
            best[(a, b)] = m
    return best


def _hxi_search(space: HXi, x: Vec, budget):
    """Branch and bound over successive blocks ``E_1 < E_2 < ...`` inside the support."""
    counter = Counter("H_xi search", budget)
    pos = list(x.support)
    vals = [abs(v) for v in x.values()]
    n = len(pos)
    options = _block_options(space.xi, pos, vals, counter)
    by_start: dict[int, list] = {}
    for (a, b), m in options.items():
        by_start.setdefault(a, []).append((b, m))
    for lst in by_start.values():
        lst.sort()
    suffix = [vals[0] - vals[0]] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] + vals[k]
    H = space.H
    lp_p = None
    if isinstance(H, Lp) and H.p != INF:
        lp_p = H.p if x.exact and H.p == 1 else float(H.p)

    def h_norm(entries):
        return norm(H, Vec._raw(dict(entries), x.exact), budget)

    # 1-unconditionality makes the value grow along a chain, so only chains
    # that cannot be extended are scored; l_p targets also prune on the l_1 tail
    best_val = None
    best_cert = None
    stack = [(0, (), vals[0] - vals[0])]
    while stack:
        start, entries, powsum = stack.pop()
        counter.tick()
        extendable = False
        for a in range(start, n):
            for b, m in by_start.get(a, ()):
                extendable = True
                new = entries + ((pos[b], m),)
                ps = powsum
                if lp_p is not None:
                    ps = powsum + (m if lp_p == 1 else float(m) ** lp_p)
                    bound = ps + (suffix[b + 1] if lp_p == 1 else float(suffix[b + 1]) ** lp_p)
                    if best_val is not None and bound <= best_val:
                        continue
                stack.append((b + 1, new, ps))
        if extendable:
            continue
        val = powsum if lp_p is not None else h_norm(entries)
        if best_val is None or val > best_val:
            best_val, best_cert = val, entries
    if best_val is None:
        best_val = vals[0] - vals[0]
    if lp_p is not None and lp_p != 1:
        return float(best_val) ** (1.0 / float(lp_p)), best_cert
    return best_val, best_cert


def hxi_norm(space: HXi, x, budget: int | None = None):
    x = _as_vec(x)
    if not x:
        return Fraction(0) if x.exact else 0.0
    H = space.H
    if space.xi == 1 and (isinstance(H, C0) or isinstance(H, Lp)):
        pos = list(x.support)
        vals = [abs(v) for v in x.values()]
        if _sup_like(H):
            return kernels.hxi_s1(pos, vals, None)
        if H.p == 1:
            return x.l1()
        p = float(H.p)
        return float(kernels.hxi_s1(pos, [float(v) for v in vals], p)) ** (1.0 / p)
    if space.xi == 0:
        # singletons: the vector is measured in H with its own coordinates
        return norm(H, x.abs(), budget)
    return _hxi_search(space, x, budget)[0]


# dispatch


def norm(space, x, budget: int | None = None):
    """The norm of a finitely supported vector in ``space``."""
    x = _as_vec(x)
    if isinstance(space, C0):
        return lp_norm(INF, x)
    if isinstance(space, Lp):
        return lp_norm(space.p, x)
    if isinstance(space, Tsirelson):
        return tsirelson_norm(space, x, budget)
    if isinstance(space, ConvexifyQ):
        return convexified_norm(space, x, budget)
    if isinstance(space, DualOf):
        return dual_norm(space, x, budget).value
    if isinstance(space, HXi):
        return hxi_norm(space, x, budget)
    raise TypeError(f"unknown space {space!r}")


def evaluate(space, x, budget: int | None = None) -> NormResult:
    """Like :func:`norm` but reports exactness and the evaluation mode."""
    x = _as_vec(x)
    if isinstance(space, DualOf):
        return dual_norm(space, x, budget)
    value = norm(space, x, budget)
    exact = isinstance(value, Fraction)
    mode = "exact" if exact else f"float:rel{DEFAULT_TOL:g}"
    return NormResult(value, exact, mode)


# domination constants


@dataclass(frozen=True)
class DominationByLp:
    p: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "p", Lp(self.p).p)

    @property
    def space(self):
        return Lp(self.p)


@dataclass(frozen=True)
class DominationByBasis:
    space: object


@dataclass(frozen=True)
class SeqNormSpec:
    ground: object
    target: DominationByLp | DominationByBasis
    shift: int = 0

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    @property
    def target_space(self):
        return self.target.space


@dataclass
class DominationResult:
    value: Fraction | float
    upper: Fraction | float
    exact: bool
    certificate: tuple = ()
    method: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": format_scalar(self.value),
            "upper": format_scalar(self.upper),
            "exact": self.exact,
            "method": self.method,
            "certificate": [format_scalar(a) for a in self.certificate],
            **self.extra,
        }


def target_norm(spec: SeqNormSpec, coeffs: Sequence) -> Fraction | float:
    """``|| sum a_n e_{n+k} ||`` in the target space."""
    v = Vec({n + 1 + spec.shift: a for n, a in enumerate(coeffs) if a})
    return norm(spec.target_space, v)


def combination(coeffs: Sequence, seq: Sequence[Vec]) -> Vec:
    out = Vec() if all(v.exact for v in seq) else Vec().to_float()
    for a, x in zip(coeffs, seq):
        if a:
            out = out + (x * a if x.exact or not isinstance(a, Fraction) else x * float(a))
    return out


def ratio(seq: Sequence[Vec], spec: SeqNormSpec, coeffs: Sequence, budget=None) -> float:
    den = target_norm(spec, coeffs)
    if not den:
        return 0.0
    return float(norm(spec.ground, combination(coeffs, seq), budget)) / float(den)


def _target_kind(spec: SeqNormSpec):
    sp = spec.target_space
    if _sup_like(sp):
        return "sup"
    if isinstance(sp, Lp) and sp.p == 1:
        return "l1"
    if isinstance(sp, Lp):
        return "lp"
    return "basis"


def _is_hilbert(space) -> bool:
    return isinstance(space, Lp) and space.p == 2


def _gram(seq: Sequence[Vec]):
    return [[x.dot(y) for y in seq] for x in seq]


def _sqrt(v):
    if isinstance(v, Fraction):
        n, d = math.isqrt(v.numerator), math.isqrt(v.denominator)
        if n * n == v.numerator and d * d == v.denominator:
            return Fraction(n, d)
    return math.sqrt(float(v))


def _holder_upper(norms: Sequence, spec: SeqNormSpec) -> float:
    kind = _target_kind(spec)
    if kind == "sup":
        return float(sum(norms))
    if kind == "l1":
        return float(max(norms))
    if kind == "lp":
        p = float(spec.target_space.p)
        q = p / (p - 1)
        return math.fsum(float(v) ** q for v in norms) ** (1 / q)
    # a normalized 1-unconditional basis dominates the sup norm
    return float(sum(norms))


def _sign_enumeration(seq: Sequence[Vec], spec: SeqNormSpec, budget):
    t = len(seq)
    if t > 20:
        raise BudgetExceeded("sign enumeration (t > 20)", 20)
    if _is_hilbert(spec.ground):
        best, signs = kernels.sign_max_gram(_gram(seq))
        return _sqrt(best), tuple(signs), "sign-enumeration:gram"
    best, best_signs = None, ()
    counter = Counter("sign enumeration", budget)
    for rest in itertools.product((1, -1), repeat=t - 1):
        counter.tick()
        signs = (1,) + rest
        v = norm(spec.ground, combination(signs, seq), budget)
        if best is None or v > best:
            best, best_signs = v, signs
    return best, best_signs, "sign-enumeration"


def _ascent(seq, spec, budget, rng: random.Random, restarts: int, iters: int):
    t = len(seq)
    starts = [[1.0 if m == n else 0.0 for m in range(t)] for n in range(t)]
    starts.append([1.0] * t)
    for _ in range(restarts):
        starts.append([rng.uniform(-1, 1) for _ in range(t)])
    best, best_a = -1.0, None
    for a in starts:
        cur = ratio(seq, spec, a, budget)
        step = 0.5
        for _ in range(iters):
            n = rng.randrange(t)
            improved = False
            for d in (step, -step):
                b = list(a)
                b[n] += d
                if not any(b):
                    continue
                r = ratio(seq, spec, b, budget)
                if r > cur + 1e-15:
                    a, cur, improved = b, r, True
                    break
            if not improved:
                step *= 0.7
                if step < 1e-6:
                    break
        if cur > best:
            best, best_a = cur, a
    return best, tuple(best_a)


NET_POINTS = 20_000


def _net_upper(seq: Sequence[Vec], spec: SeqNormSpec, budget, radius: float = 0.01):
    """Certified upper bound against the l_2 target by an angular net of the sphere.

    ``a -> ||sum a_n x_n||`` is Lipschitz for the l_2 distance with the
    constant C itself, so with every unit vector within ``r`` of a net point,
    ``C <= max over the net / (1 - r)``.  For disjoint supports and a
    1-unconditional ground only the positive orthant is needed; otherwise
    every sign pattern of the orthant net is evaluated.  Returns
    ``(net maximum, upper bound)`` or None if the net would be too large.
    """
    t = len(seq)
    if t < 2:
        return None
    # hyperspherical angles in [0, pi/2]; midpoint grids put every angle within
    # h/2 of a grid value, and the sphere metric is at most the flat angle metric
    per_angle = math.ceil(math.sqrt(t - 1) * (math.pi / 2) / (2 * radius))
    h = (math.pi / 2) / per_angle
    r = math.sqrt(t - 1) * h / 2
    signs = [(1,) * t] if _disjoint(seq) else [(1,) + s for s in itertools.product((1, -1), repeat=t - 1)]
    if per_angle ** (t - 1) * len(signs) > NET_POINTS or r >= 1:
        return None
    grid = [(j + 0.5) * h for j in range(per_angle)]
    best = 0.0
    counter = Counter("net evaluation", budget)
    for angles in itertools.product(grid, repeat=t - 1):
        a, s = [], 1.0
        for phi in angles:
            a.append(s * math.cos(phi))
            s *= math.sin(phi)
        a.append(s)
        for sg in signs:
            counter.tick()
            b = [x * e for x, e in zip(a, sg)]
            v = float(norm(spec.ground, combination(b, seq), budget))
            best = max(best, v)
    return best, best / (1 - r)


def _disjoint(seq: Sequence[Vec]) -> bool:
    seen: set = set()
    for x in seq:
        s = set(x.support)
        if s & seen:
            return False
        seen |= s
    return True


def _hxi_l2_upper(seq: Sequence[Vec], space: HXi, budget):
    """Upper bound for disjoint vectors in H_xi over l_2 against the l_2 basis.

    With masses ``m_jn = ||E_j w_n||_1``, Cauchy-Schwarz gives
    ``sum_j (sum_n |a_n| m_jn)^2 <= sum_n a_n^2 sum_j m_jn c_j`` where
    ``c_j = ||E_j sum |w_n| ||_1``.  Bounding ``c_j`` by the ``H_xi`` norm over
    ``c_0`` of ``sum |w_n|`` and ``sum_j m_jn`` by ``||w_n||_1`` yields
    ``s^2 <= max_n ||w_n||_1 * || sum |w_n| ||_{H_xi(c_0)}``.
    """
    total = Vec()
    for w in seq:
        total = total + (w.abs() if w.exact else w.abs())
    if not total.exact:
        total = total.to_float()
    K = norm(HXi(C0(), space.xi), total, budget)
    return math.sqrt(float(max(w.l1() for w in seq)) * float(K))


def domination_constant(
    seq: Sequence,
    spec: SeqNormSpec,
    *,
    seed: int = 0,
    restarts: int = 6,
    iters: int = 60,
    budget: int | None = None,
) -> DominationResult:
    """Least C with ``||sum a_n x_n|| <= C ||sum a_n e_{n+k}||`` for all scalars.

    Exact routes: sign enumeration against a sup-norm target, ``max ||x_n||``
    against an l_1 target, the largest singular value for l_2 against l_2.
    Otherwise the value is a lower bound from randomized coordinate ascent and
    ``upper`` is a Hoelder-type bound (or the sharper disjoint-block bound for
    ``H_xi`` over l_2).
    """
    seq = [_as_vec(x) for x in seq]
    keep = [x for x in seq if x]
    if not keep:
        return DominationResult(Fraction(0), Fraction(0), True, tuple(0 for _ in seq), "zero")
    norms = [norm(spec.ground, x, budget) for x in seq]
    kind = _target_kind(spec)
    if len(keep) == 1 and kind != "basis":
        n = next(i for i, x in enumerate(seq) if x)
        v = norms[n]
        cert = tuple(1 if i == n else 0 for i in range(len(seq)))
        return DominationResult(v, v, True, cert, "single-vector")
    if kind == "sup":
        idx = [i for i, x in enumerate(seq) if x]
        val, signs, method = _sign_enumeration([seq[i] for i in idx], spec, budget)
        cert = [0] * len(seq)
        for i, s in zip(idx, signs):
            cert[i] = s
        return DominationResult(val, val, True, tuple(cert), method)
    if kind == "l1":
        v = max(norms)
        n = norms.index(v)
        cert = tuple(1 if i == n else 0 for i in range(len(seq)))
        return DominationResult(v, v, True, cert, "extreme-points")
    if kind == "lp" and spec.target_space.p == 2 and _is_hilbert(spec.ground):
        import numpy as np

        support = sorted({i for x in seq for i in x.support})
        A = np.array([[float(x[i]) for x in seq] for i in support])
        _, s, vt = np.linalg.svd(A, full_matrices=False)
        return DominationResult(float(s[0]), float(s[0]), True, tuple(float(v) for v in vt[0]), "singular-value")
    rng = random.Random(seed)
    lower, cert = _ascent(seq, spec, budget, rng, restarts, iters)
    upper = _holder_upper(norms, spec)
    method = "ascent+hoelder"
    ground = spec.ground
    if kind == "lp" and spec.target_space.p == 2:
        net = _net_upper(seq, spec, budget)
        if net is not None:
            if net[1] < upper:
                upper, method = net[1], "ascent+net"
    if (
        kind == "lp"
        and spec.target_space.p == 2
        and isinstance(ground, HXi)
        and _is_hilbert(ground.H)
        and _disjoint(seq)
    ):
        alt = _hxi_l2_upper(seq, ground, budget)
        if alt < upper:
            upper, method = alt, "ascent+disjoint-block"
    return DominationResult(lower, max(upper, lower), False, cert, method)


# block stability and left dominance


@dataclass
class StabilityReport:
    worst_ratio: float
    worst_coeffs: tuple
    trials: int
    B: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "worst_ratio": self.worst_ratio,
            "worst_coeffs": list(self.worst_coeffs),
            "trials": self.trials,
            "B": self.B,
            "passed": self.passed,
        }


def _interleaved(xs: Sequence[Vec], ys: Sequence[Vec]) -> bool:
    for n in range(len(xs) - 1):
        hi = max(xs[n].range[1], ys[n].range[1])
        lo = min(xs[n + 1].range[0], ys[n + 1].range[0])
        if not hi < lo:
            return False
    return True


def check_block_stability(space, xs, ys, B, trials: int = 200, seed: int = 0, tol: float = DEFAULT_TOL) -> StabilityReport:
    """Fuzz ``||sum a_n y_n|| / ||sum a_n x_n||`` in both directions against B."""
    xs = [_as_vec(x) for x in xs]
    ys = [_as_vec(y) for y in ys]
    if len(xs) != len(ys) or any(not v for v in xs + ys):
        raise ValueError("need two equally long lists of nonzero blocks")
    if not _interleaved(xs, ys):
        raise ValueError("blocks must satisfy max ran(x_n), max ran(y_n) < min ran(x_{n+1}), min ran(y_{n+1})")
    rng = random.Random(seed)
    worst, worst_a = 1.0, ()
    for _ in range(trials):
        a = [rng.uniform(-1, 1) for _ in xs]
        nx = float(norm(space, combination(a, xs)))
        ny = float(norm(space, combination(a, ys)))
        if nx == 0 or ny == 0:
            continue
        r = max(nx / ny, ny / nx)
        if r > worst:
            worst, worst_a = r, tuple(a)
    return StabilityReport(worst, worst_a, trials, float(B), worst <= float(B) * (1 + tol))


def check_left_dominance(space, length: int = 4, max_index: int = 20, trials: int = 200, seed: int = 0, tol: float = DEFAULT_TOL) -> StabilityReport:
    """Fuzz ``||sum a_n e_{l_n}|| <= ||sum a_n e_{m_n}||`` for ``m_n <= l_n``."""
    rng = random.Random(seed)
    worst, worst_a = 0.0, ()
    for _ in range(trials):
        ls = sorted(rng.sample(range(1, max_index + 1), length))
        ms = sorted(rng.sample(range(1, max_index + 1), length))
        # pull each m_n below l_n while keeping the list increasing
        ms = [min(m, l) for m, l in zip(ms, ls)]
        for n in range(1, length):
            if ms[n] <= ms[n - 1]:
                ms[n] = ms[n - 1] + 1
        if any(m > l for m, l in zip(ms, ls)):
            continue
        a = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(length)]
        if not any(a):
            continue
        right = norm(space, Vec(dict(zip(ls, a))))
        left = norm(space, Vec(dict(zip(ms, a))))
        r = float(right) / float(left)
        if r > worst:
            worst, worst_a = r, (tuple(ms), tuple(ls), tuple(format_scalar(v) for v in a))
    return StabilityReport(worst, worst_a, trials, 1.0, worst <= 1 + tol)
