from fractions import Fraction as Fr

from hypothesis import assume, given
from hypothesis import strategies as st

from schreier.audit import AuditConfig, SeqSample, goodness_constant, stability_constant
from schreier.blocks import RepeatedAverages, measure
from schreier.families import FineSchreier, Schreier, contains, initial_segment, is_spread
from schreier.norms import DominationByLp, DualOf, HXi, Lp, SeqNormSpec, Tsirelson, dual_norm, norm
from schreier.oracles import tsirelson_bruteforce
from schreier.ordinals import Ordinal, omega_power
from schreier.sequences import ArithmeticTail, Prefix
from schreier.vectors import Vec
from schreier.witnesses import star_witness, validate_star

T = Tsirelson(1, Fr(1, 2))

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
vectors = st.dictionaries(st.integers(1, 9), coeff, min_size=1, max_size=6).map(Vec)
finite_sets = st.sets(st.integers(1, 14), max_size=6).map(lambda s: tuple(sorted(s)))
small_ordinals = st.builds(
    lambda a, b, c: omega_power(2) * a + omega_power(1) * b + c,
    st.integers(0, 2),
    st.integers(0, 3),
    st.integers(0, 4),
)
increasing = st.lists(st.integers(1, 3), min_size=8, max_size=8).map(
    lambda gaps: [sum(gaps[: i + 1]) for i in range(len(gaps))]
)


def infinite(elements):
    return Prefix(tuple(elements), ArithmeticTail(elements[-1] + 1, 1))


@given(small_ordinals, small_ordinals, small_ordinals)
def test_ordinal_addition_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(small_ordinals, small_ordinals, st.integers(1, 3))
def test_ordinal_left_distributes(a, b, n):
    m = Ordinal.of(n)
    assert m * (a + b) == m * a + m * b


@given(vectors)
def test_tsirelson_matches_oracle_and_sandwich(x):
    v = norm(T, x)
    assert v == tsirelson_bruteforce(1, Fr(1, 2), x)
    assert norm(Lp("inf"), x) <= v <= norm(Lp(1), x)


@given(vectors, st.integers(1, 9), st.integers(1, 9))
def test_interval_projections_do_not_increase_norms(x, a, b):
    lo, hi = min(a, b), max(a, b)
    proj = Vec({i: v for i, v in x.items() if lo <= i <= hi})
    for space in (T, HXi(Lp(2), 1)):
        assert float(norm(space, proj)) <= float(norm(space, x)) + 1e-12


@given(vectors)
def test_dual_norm_sandwich(y):
    y = Vec({i: v for i, v in y.items() if i <= 6})
    assume(y)
    val = float(dual_norm(DualOf(T, 6), y).value)
    assert float(norm(Lp("inf"), y)) - 1e-7 <= val <= float(norm(Lp(1), y)) + 1e-7


@given(finite_sets, st.integers(0, 3))
def test_schreier_families_are_hereditary(F, xi):
    if contains(Schreier(xi), F):
        for i in range(len(F)):
            assert contains(Schreier(xi), F[:i] + F[i + 1 :])


@given(finite_sets, st.lists(st.integers(0, 4), min_size=6, max_size=6), st.integers(0, 3))
def test_schreier_families_are_spreading(F, bumps, xi):
    G, last = [], 0
    for f, b in zip(F, bumps):
        last = max(last + 1, f + b)
        G.append(last)
    G = tuple(G)
    assert is_spread(G, F)
    if contains(Schreier(xi), F):
        assert contains(Schreier(xi), G)


@given(finite_sets, st.integers(0, 4))
def test_fine_schreier_counts_cardinality(F, n):
    assert contains(FineSchreier(n), F) == (len(F) <= n)


@given(increasing, st.integers(1, 2))
def test_repeated_averages_are_probabilities_on_the_segment(els, xi):
    M = infinite(els)
    mu = measure(RepeatedAverages(xi), M, 1)
    assert sum(mu.values()) == 1
    assert mu.support == initial_segment(Schreier(xi), M)


def _orthonormal(n):
    return SeqSample([Vec.basis(i) for i in range(1, n + 1)], "", Lp(2))


@given(st.sets(st.integers(2, 9), max_size=7), st.data())
def test_goodness_is_hereditary(G, data):
    G = tuple(sorted(G))
    H = tuple(x for x in G if data.draw(st.booleans()))
    cfg = AuditConfig("RA(1)", 1, 0, SeqNormSpec(Lp(2), DominationByLp("inf")), "1,2,3")
    sample = _orthonormal(9)
    assert float(goodness_constant(H, cfg, sample).value) <= float(goodness_constant(G, cfg, sample).value) + 1e-12


@given(st.lists(st.integers(1, 10), min_size=3, max_size=7, unique=True), st.data(), st.sampled_from(["dirac", "RA(1)"]))
def test_stability_shrinks_on_subprefixes(elements, data, block):
    elements = sorted(elements)
    sub = [x for x in elements if data.draw(st.booleans())] or elements[:1]
    spec = SeqNormSpec(Tsirelson(1, Fr(1, 2)), DominationByLp("inf"))
    sample = SeqSample([Vec.basis(i) for i in range(1, 11)], "", spec.ground)
    big = stability_constant(AuditConfig(block, 2, 0, spec, Prefix(tuple(elements))), sample)
    small = stability_constant(AuditConfig(block, 2, 0, spec, Prefix(tuple(sub))), sample)
    assert float(small.value) <= float(big.value) + 1e-12


@given(increasing, increasing, st.integers(0, 5), st.sampled_from([(1, 1), (1, 0), (2, 1)]))
def test_star_witnesses_validate(m_els, l_els, m, orders):
    P, Q = Schreier(orders[0]), Schreier(orders[1])
    M, L = infinite(m_els), infinite(l_els)
    K = L.compose(M)
    w = star_witness(P, Q, M, L, K, m)
    assert validate_star(w, P, Q, M, L, K, m).ok
