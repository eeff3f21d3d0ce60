import math
import random
from fractions import Fraction as Fr

import pytest

from schreier.families import Schreier, contains
from schreier.norms import (
    C0,
    ConvexifyQ,
    DominationByBasis,
    DominationByLp,
    DualOf,
    HXi,
    Lp,
    SeqNormSpec,
    Tsirelson,
    check_block_stability,
    check_left_dominance,
    domination_constant,
    dual_norm,
    norm,
    norm_from_set,
    norming_set,
    ratio,
)
from schreier.oracles import hxi_bruteforce, sign_bruteforce, tsirelson_bruteforce
from schreier.vectors import Vec

T = Tsirelson(1, Fr(1, 2))


def rand_vec(rng, top=7, exact=True):
    idx = rng.sample(range(1, top + 1), rng.randint(1, min(top, 5)))
    if exact:
        return Vec({i: Fr(rng.randint(-6, 6), rng.randint(1, 3)) for i in idx})
    return Vec({i: rng.uniform(-2, 2) for i in idx})


def ones(*idx):
    return Vec({i: 1 for i in idx})


def test_lp_norms():
    x = Vec({1: 3, 2: -4})
    assert norm(Lp(1), x) == 7
    assert norm(Lp(2), x) == 5
    assert norm(Lp("inf"), x) == 4
    assert norm(C0(), x) == 4


def test_tsirelson_examples():
    assert norm(T, ones(4, 5, 6, 7)) == 2
    assert norm(T, Vec.basis(1)) == 1
    assert norm(T, ones(1, 2)) == 1


@pytest.mark.parametrize("mu,theta", [(1, Fr(1, 2)), (1, Fr(1, 3)), (2, Fr(1, 2))])
def test_tsirelson_matches_partition_oracle(mu, theta):
    rng = random.Random(11)
    space = Tsirelson(mu, theta)
    for _ in range(60):
        x = rand_vec(rng)
        assert norm(space, x) == tsirelson_bruteforce(mu, theta, x)


def test_tsirelson_float_route_agrees_with_exact():
    rng = random.Random(5)
    for _ in range(40):
        x = rand_vec(rng, top=9)
        assert math.isclose(float(norm(T, x.to_float())), float(norm(T, x)), rel_tol=1e-12)


def test_tsirelson_sandwich():
    rng = random.Random(2)
    for _ in range(50):
        x = rand_vec(rng, top=10)
        v = norm(T, x)
        assert norm(Lp("inf"), x) <= v <= norm(Lp(1), x)


def test_hxi_examples():
    assert norm(HXi(Lp(2), 1), ones(2, 3)) == 2
    x = Vec({3: 1, 4: -2, 5: Fr(1, 2), 9: 5})
    want = max(sum(abs(x[i]) for i in E) for E in _s1_subsets(x.support))
    assert norm(HXi(C0(), 1), x) == want


def _s1_subsets(support):
    from itertools import combinations

    for k in range(len(support) + 1):
        for E in combinations(support, k):
            if contains(Schreier(1), E):
                yield E


@pytest.mark.parametrize("H", [Lp(2), Lp(1), C0(), T])
def test_hxi_matches_selection_oracle(H):
    rng = random.Random(17)
    space = HXi(H, 1)
    for _ in range(25):
        x = rand_vec(rng, top=8)
        got = norm(space, x)
        want = hxi_bruteforce(lambda v: norm(H, v), 1, x)
        assert math.isclose(float(got), float(want), rel_tol=1e-9)


def test_norming_set_reproduces_the_norm():
    K = norming_set(T, 5)
    rng = random.Random(4)
    for _ in range(100):
        x = rand_vec(rng, top=5)
        assert norm_from_set(K, x) == norm(T, x)


def test_norming_set_contains_coordinate_functionals():
    K = set(norming_set(T, 3))
    for n in (1, 2, 3):
        assert Vec.basis(n) in K and Vec.basis(n, -1) in K


def test_dual_of_basis_vectors():
    for n in (1, 3, 6):
        res = dual_norm(DualOf(T, 6), Vec.basis(n))
        assert math.isclose(float(res.value), 1.0, abs_tol=1e-9)


def test_dual_of_admissible_sums():
    D = DualOf(T, 8)
    for G in [(2, 3), (3, 4, 5), (4, 5, 6, 7)]:
        res = dual_norm(D, ones(*G))
        assert float(res.value) <= 2 + 1e-9
        assert float(res.value) >= 1 - 1e-9


def test_dual_lower_bound_by_pairing():
    # <y, x> / ||x||_T bounds the dual norm from below for every x
    D = DualOf(T, 6)
    rng = random.Random(8)
    for _ in range(20):
        y = rand_vec(rng, top=6)
        val = float(dual_norm(D, y).value)
        for _ in range(10):
            x = rand_vec(rng, top=6)
            if not x:
                continue
            assert val >= float(y.dot(x)) / float(norm(T, x)) - 1e-7


def test_convexified_space():
    C = ConvexifyQ(T, 2)
    x = ones(4, 5, 6, 7)
    # ||x||_{T^(2)} = ||(|x_i|^2)||_T^{1/2}
    assert math.isclose(float(norm(C, x)), math.sqrt(2), rel_tol=1e-12)


def test_domination_orthonormal_sup():
    seq = [Vec.basis(i) for i in range(1, 5)]
    res = domination_constant(seq, SeqNormSpec(Lp(2), DominationByLp("inf")))
    assert res.exact and res.value == 2


def test_domination_single_vector():
    x = Vec({2: 3, 5: 4})
    for p in ("1", "2", "inf"):
        res = domination_constant([x], SeqNormSpec(Lp(2), DominationByLp(p)))
        assert res.value == 5


def test_domination_tsirelson_basis_vectors():
    seq = [Vec.basis(i) for i in (4, 5, 6, 7)]
    res = domination_constant(seq, SeqNormSpec(T, DominationByLp("inf")))
    assert res.value == 2
    assert res.value == sign_bruteforce(lambda v: norm(T, v), seq)


def test_domination_sign_route_matches_oracle():
    rng = random.Random(9)
    for _ in range(15):
        seq = [rand_vec(rng, top=8) for _ in range(rng.randint(2, 4))]
        res = domination_constant(seq, SeqNormSpec(T, DominationByLp("inf")))
        assert res.value == sign_bruteforce(lambda v: norm(T, v), seq)


def test_domination_hilbert_to_l2_is_top_singular_value():
    seq = [Vec({1: 1.0, 2: 1.0}), Vec({1: 1.0, 2: -1.0})]
    res = domination_constant(seq, SeqNormSpec(Lp(2), DominationByLp(2)))
    assert res.exact and math.isclose(res.value, math.sqrt(2))


def test_l2_target_bounds_bracket_every_ratio():
    rng = random.Random(12)
    space = HXi(Lp(2), 1)
    spec = SeqNormSpec(space, DominationByLp(2))
    for _ in range(5):
        seq = [Vec({2 * n + 3: 1.0, 2 * n + 4: rng.uniform(0.1, 1)}) for n in range(3)]
        res = domination_constant(seq, spec)
        assert res.value <= res.upper + 1e-12
        for _ in range(200):
            a = [rng.uniform(-1, 1) for _ in seq]
            assert ratio(seq, spec, a) <= res.upper + 1e-9


def test_net_bound_covers_overlapping_supports():
    rng = random.Random(13)
    spec = SeqNormSpec(T, DominationByLp(2))
    seq = [rand_vec(rng, top=6, exact=False) for _ in range(3)]
    res = domination_constant(seq, spec)
    assert res.value <= res.upper
    for _ in range(300):
        a = [rng.gauss(0, 1) for _ in seq]
        assert ratio(seq, spec, a) <= res.upper + 1e-9


def test_domination_by_basis_target():
    seq = [Vec.basis(i) for i in (3, 4, 5)]
    res = domination_constant(seq, SeqNormSpec(T, DominationByBasis(T), shift=2))
    assert res.value >= 1 - 1e-9


def test_block_stability_identical_and_lp():
    xs = [Vec({1: 1.0, 2: 1.0}), Vec({4: 2.0}), Vec({6: 1.0, 7: -1.0})]
    assert check_block_stability(Lp(2), xs, xs, 1).passed
    ys = [Vec({3: math.sqrt(2)}), Vec({5: 2.0}), Vec({8: math.sqrt(2)})]
    rep = check_block_stability(Lp(2), xs, ys, 1)
    assert rep.passed and math.isclose(rep.worst_ratio, 1.0)


@pytest.mark.parametrize("space", [Lp(2), Lp(1), Lp("inf")])
def test_left_dominance(space):
    assert check_left_dominance(space, trials=60).passed


def test_tsirelson_grows_under_right_shifts():
    # moving supports right admits more splittings, so left shifts can only shrink the norm
    rep = check_left_dominance(T, trials=60)
    assert not rep.passed and rep.worst_ratio > 1
