from itertools import combinations

import pytest

from schreier.errors import NotDecomposable
from schreier.families import (
    Compose,
    Explicit,
    FineSchreier,
    Pair,
    Schreier,
    Singletons,
    almost_monotone_threshold,
    apply_image,
    contains,
    decompose,
    initial_segment,
    is_maximal,
    is_spread,
    materialize,
    members,
    tree_rank,
)
from schreier.oracles import schreier_bruteforce
from schreier.ordinals import OMEGA
from schreier.sequences import Prefix


def subsets(n):
    for k in range(n + 1):
        yield from combinations(range(1, n + 1), k)


def test_fine_schreier_counts_cardinality():
    assert contains(FineSchreier(2), (4, 10))
    assert not contains(FineSchreier(2), (1, 2, 3))


def test_schreier_one_membership():
    assert contains(Schreier(1), (3, 5, 9))
    assert not contains(Schreier(1), (2, 5, 9))


def test_composition_membership():
    assert contains(Compose(Schreier(1), Schreier(1)), (2, 3, 4, 5, 6))


@pytest.mark.parametrize("fam", [Schreier(0), Schreier(3), FineSchreier(0), FineSchreier(OMEGA), Singletons()])
def test_empty_set_always_belongs(fam):
    assert contains(fam, ())


@pytest.mark.parametrize("xi", [0, 1, 2, 3])
def test_schreier_matches_recursive_definition(xi):
    for F in subsets(9):
        assert contains(Schreier(xi), F) == schreier_bruteforce(xi, F), F


def test_maximality():
    assert is_maximal(Schreier(1), (3, 5, 9))
    # |(2,7)| = 2 = min, so nothing can be appended
    assert is_maximal(Schreier(1), (2, 7))
    assert not is_maximal(Schreier(1), (3, 7))
    assert not is_maximal(FineSchreier(3), (1, 4))
    assert is_maximal(FineSchreier(3), (2, 5, 9))


def test_initial_segments():
    assert initial_segment(Schreier(1), Prefix.naturals(2, 2)) == (2, 4)
    assert initial_segment(FineSchreier(0), Prefix.naturals(5)) == ()
    assert initial_segment(Schreier(2), Prefix.naturals(2)) == (2, 3, 4, 5, 6, 7)


def test_decompose():
    assert decompose(Schreier(1), (2, 3, 4, 5, 6, 7)) == [(2, 3), (4, 5, 6, 7)]
    assert decompose(Schreier(1), ()) == []
    # every block has to be maximal, and (4,5,6) extends to (4,5,6,7)
    with pytest.raises(NotDecomposable):
        decompose(Schreier(1), (2, 3, 4, 5, 6))
    with pytest.raises(NotDecomposable):
        decompose(Schreier(1), (3, 4))


def test_decompose_matches_exhaustive_split():
    fam = Schreier(1)

    def splits(F):
        if not F:
            return [[]]
        out = []
        for k in range(1, len(F) + 1):
            head = F[:k]
            if contains(fam, head) and is_maximal(fam, head):
                out += [[head] + rest for rest in splits(F[k:])]
        return out

    for F in subsets(9):
        found = splits(F)
        if found:
            assert decompose(fam, F) == found[0]
        else:
            with pytest.raises(NotDecomposable):
                decompose(fam, F)


def test_image_and_spreads():
    assert apply_image(Prefix.naturals(2, 2), (1, 3)) == (2, 6)
    assert is_spread((3, 7), (2, 7))
    assert not is_spread((1, 9), (2, 9))


def test_materialize_small_families():
    assert materialize(FineSchreier(1), 3).sets == frozenset({(), (1,), (2,), (3,)})
    assert materialize(FineSchreier(0), 10).sets == frozenset({()})
    want = {F for F in subsets(4) if not F or len(F) <= F[0]}
    assert materialize(Schreier(1), 4).sets == want


def test_members_agree_with_contains():
    fam = Compose(Schreier(1), Schreier(1))
    found = set(members(fam, range(1, 9)))
    assert found == {F for F in subsets(8) if contains(fam, F)}


def test_tree_ranks():
    assert tree_rank(Explicit(frozenset({()}))) == 1
    for N in (3, 4, 6):
        assert tree_rank(materialize(FineSchreier(2), N)) == 3
    assert tree_rank(materialize(Pair(FineSchreier(1), FineSchreier(2)), 6)) == 4


def test_almost_monotone_thresholds():
    assert almost_monotone_threshold(2, 3, 10) == 0
    assert almost_monotone_threshold(1, 2, 8) == 0
    # least threshold is 2: sets with min >= 3 and at most 3 elements satisfy |F| <= min F
    assert almost_monotone_threshold(3, OMEGA, 8) == 2
    for F in subsets(8):
        if F and F[0] > 2 and len(F) <= 3:
            assert contains(FineSchreier(OMEGA), F)
    assert not contains(FineSchreier(OMEGA), (2, 3, 4))
