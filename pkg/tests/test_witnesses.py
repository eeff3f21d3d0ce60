import pytest

from schreier.errors import AuxiliaryNotFound, InsufficientPrefix
from schreier.families import FineSchreier, Schreier, contains, is_maximal
from schreier.ordinals import OMEGA
from schreier.sequences import ArithmeticTail, Prefix
from schreier.witnesses import (
    Auxiliary,
    NestedChain,
    diagonal_inclusion_check,
    diagonalize,
    find_auxiliary,
    star_witness,
    triangular,
    validate_cover,
    validate_star,
    veryeasy_cover,
    veryeasy_thin,
)


def tail_from(n, length=40):
    return Prefix(tuple(range(n, n + length)), ArithmeticTail(n + length, 1))


def test_diagonal_of_constant_chain():
    M = Prefix.of("2,5,9,11,14,20")
    assert diagonalize(NestedChain((M,) * 5)).elements == M.take(5)


def test_diagonal_of_shifted_tails():
    chain = NestedChain.from_function(tail_from, 8)
    assert diagonalize(chain).elements == (1, 3, 5, 7, 9, 11, 13, 15)


def test_chain_must_be_nested():
    with pytest.raises(ValueError):
        NestedChain((Prefix.of("1,3,5,7,9"), Prefix.of("2,9")))


def test_diagonal_inclusion_for_omega():
    chain = NestedChain.from_function(tail_from, 12)
    rep = diagonal_inclusion_check(chain, OMEGA, Schreier(1), 12)
    assert rep.ok and rep.checked > 1
    assert rep.realized_by[()] == 1


def test_diagonal_inclusion_needs_a_limit():
    with pytest.raises(ValueError):
        diagonal_inclusion_check(NestedChain.from_function(tail_from, 3), 2, Schreier(1), 6)


def test_triangular_numbers():
    assert [triangular(n) for n in range(1, 6)] == [1, 3, 6, 10, 15]


def test_thinned_set_values():
    T = veryeasy_thin(1, Prefix.naturals(2))
    assert T.take(4) == (2, 8, 64, 1024)


def test_auxiliary_identity_when_families_nest():
    N = find_auxiliary(Schreier(1), Schreier(1))
    assert N(7) == 7
    with pytest.raises(AuxiliaryNotFound):
        find_auxiliary(Schreier(1), FineSchreier(1))


def test_auxiliary_maps_q_into_p():
    N = find_auxiliary(FineSchreier(3), Schreier(1))
    for G in [(1, 2, 3), (1, 5), (2, 3, 4)]:
        assert contains(Schreier(1), N.image(G))


@pytest.mark.parametrize(
    "P,Q",
    [(Schreier(1), Schreier(1)), (Schreier(2), Schreier(1)), (Schreier(1), FineSchreier(3))],
)
@pytest.mark.parametrize("m", [0, 2, 5])
def test_star_witness_conditions(P, Q, m):
    M = Prefix.of("2,3,5,7,...")
    L = Prefix.naturals(1)
    K = L.compose(M)
    w = star_witness(P, Q, M, L, K, m)
    val = validate_star(w, P, Q, M, L, K, m)
    assert val.ok, val.checks
    assert w.F[0] > m and is_maximal(Q, w.F)


def test_star_witness_singleton_case():
    M = L = K = Prefix.naturals(1)
    w = star_witness(Schreier(1), Schreier(0), M, L, K, 3)
    assert w.F == (4,) and w.E == ()


def test_star_witness_example():
    M = L = K = Prefix.naturals(1)
    w = star_witness(Schreier(1), Schreier(1), M, L, K, 2)
    assert w.F == (3, 4, 5) and w.E == (4, 5)


def test_star_witness_runs_out_of_prefix():
    M = Prefix.of("1,2,3,4")
    with pytest.raises(InsufficientPrefix):
        star_witness(Schreier(1), Schreier(1), M, M, M, 10)


def test_star_validation_catches_tampering():
    from dataclasses import replace

    M = L = K = Prefix.naturals(1)
    w = star_witness(Schreier(1), Schreier(1), M, L, K, 2)
    bad = replace(w, E=(4, 6))
    assert not validate_star(bad, Schreier(1), Schreier(1), M, L, K, 2).ok


def test_explicit_auxiliary_is_used():
    M = L = K = Prefix.naturals(1)
    aux = Auxiliary("double", lambda n: 2 * n)
    w = star_witness(Schreier(1), Schreier(1), M, L, K, 1, auxiliary=aux)
    assert w.auxiliary == "double"
    assert validate_star(w, Schreier(1), Schreier(1), M, L, K, 1).ok


def test_veryeasy_cover_single_block():
    M = Prefix.naturals(2)
    T = veryeasy_thin(1, M)
    F = tuple(T.get(j) for j in range(2, 2 + T.get(2)))
    cover = veryeasy_cover(1, 1, M, F)
    assert cover.H == (2,)
    assert validate_cover(cover, 1, F).ok
    assert M.positions(cover.N.elements) is not None


def test_veryeasy_cover_empty():
    cover = veryeasy_cover(1, 1, Prefix.naturals(2), ())
    assert cover.H == () and validate_cover(cover, 1, ()).ok


def test_tampered_cover_fails():
    from dataclasses import replace

    M = Prefix.naturals(3)
    T = veryeasy_thin(1, M)
    F = tuple(T.get(j) for j in range(1, 1 + T.get(1)))
    cover = veryeasy_cover(1, 1, M, F)
    shifted = replace(cover, N=cover.N.drop(1))
    assert not validate_cover(shifted, 1, F).ok
