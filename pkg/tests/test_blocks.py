import random
from fractions import Fraction as Fr

import pytest

from schreier.blocks import (
    Dirac,
    ProbMeasure,
    RepeatedAverages,
    convex_block,
    expect,
    measure,
    measure_sequence,
    measures_for,
    random_prefix,
    set_mass,
    thin_for_small_coefficients,
    verify_axioms,
)
from schreier.errors import NotDecomposable
from schreier.oracles import schreier_bruteforce
from schreier.sequences import Prefix
from schreier.vectors import Vec


def oracle_first(order, M):
    """First repeated-averages measure from brute-force maximal Schreier segments."""
    if order == 0:
        return {M[0]: Fr(1)}
    parts, rest = [], list(M)
    for _ in range(M[0]):
        k = max(k for k in range(1, len(rest) + 1) if schreier_bruteforce(order - 1, rest[:k]))
        parts.append(oracle_first(order - 1, rest[:k]))
        rest = rest[k:]
    out = {}
    for mu in parts:
        for i, w in mu.items():
            out[i] = out.get(i, 0) + w / len(parts)
    return out


def test_dirac_measure():
    assert measure(Dirac(), "2,5,9,...", 2) == ProbMeasure.dirac(5)


def test_first_averages():
    assert dict(measure(RepeatedAverages(1), "3,7,8,11,12", 1)) == {3: Fr(1, 3), 7: Fr(1, 3), 8: Fr(1, 3)}
    want = {2: Fr(1, 4), 3: Fr(1, 4), 4: Fr(1, 8), 5: Fr(1, 8), 6: Fr(1, 8), 7: Fr(1, 8)}
    assert dict(measure(RepeatedAverages(2), Prefix.naturals(2), 1)) == want


@pytest.mark.parametrize("order", [1, 2])
def test_measures_match_recursion_oracle(order):
    rng = random.Random(order)
    for _ in range(25):
        M = random_prefix(rng, rng.randint(1, 3), 120, gap_region=4)
        got = dict(measure(RepeatedAverages(order), M, 1))
        assert got == oracle_first(order, list(M.take(120)))


def test_measures_for_sets():
    assert [dict(m) for m in measures_for(RepeatedAverages(1), (2, 3, 4, 5, 6, 7))] == [
        {2: Fr(1, 2), 3: Fr(1, 2)},
        {4: Fr(1, 4), 5: Fr(1, 4), 6: Fr(1, 4), 7: Fr(1, 4)},
    ]
    assert measures_for(Dirac(), (5,)) == [ProbMeasure.dirac(5)]
    with pytest.raises(NotDecomposable):
        measures_for(RepeatedAverages(1), (3, 4))


def test_expectations():
    F = (2, 3, 4, 5, 6, 7)
    assert expect(RepeatedAverages(1), F, {i: 1 for i in F}) == 2
    assert expect(Dirac(), (2, 5), {2: 3, 5: 7}) == 10
    assert expect(RepeatedAverages(1), F, {2: 1, 4: 6}) == Fr(1, 2) + Fr(6, 4)


def test_convex_blocks():
    basis = {i: Vec.basis(i) for i in range(1, 10)}
    got = convex_block(RepeatedAverages(1), (2, 3, 4, 5, 6, 7), basis)
    assert got == [Vec({2: Fr(1, 2), 3: Fr(1, 2)}), Vec({i: Fr(1, 4) for i in (4, 5, 6, 7)})]
    zeros = {i: Vec() for i in range(1, 20)}
    assert all(v == Vec() for v in convex_block(RepeatedAverages(2), Prefix.naturals(2), zeros, count=1))


def test_set_mass():
    M = Prefix.naturals(2)
    block = RepeatedAverages(2)
    assert set_mass(block, M, (2, 4)) == Fr(3, 8)
    assert set_mass(block, M, (100, 200)) == 0
    assert set_mass(block, M, range(1, 20)) == 1


def test_thinning_for_small_atoms():
    res = thin_for_small_coefficients(RepeatedAverages(1), Prefix.naturals(1), [Fr(1, 10)] * 4)
    assert res.ok and res.prefix.get(1) >= 10
    res = thin_for_small_coefficients(RepeatedAverages(2), Prefix.naturals(1), [Fr(1, 2**n) for n in range(2, 6)])
    assert res.ok
    res = thin_for_small_coefficients(RepeatedAverages(1), Prefix.naturals(3), [1])
    assert res.prefix.get(1) == 3


def test_measure_sequence_tiles_the_prefix():
    mus = measure_sequence(RepeatedAverages(1), Prefix.naturals(2), 3)
    assert [m.support for m in mus] == [(2, 3), (4, 5, 6, 7), tuple(range(8, 16))]


@pytest.mark.parametrize("block", [Dirac(), RepeatedAverages(1), RepeatedAverages(2), RepeatedAverages(3)])
def test_axioms_hold_on_random_prefixes(block):
    rng = random.Random(7)
    if isinstance(block, RepeatedAverages) and block.order > 1:
        samples = [(random_prefix(rng, rng.randint(1, 2), 10, max_gap=2, gap_region=2), 1) for _ in range(20)]
    else:
        samples = [(random_prefix(rng, rng.randint(1, 3), 40), 3) for _ in range(20)]
    report = verify_axioms(block, samples)
    assert report.ok, report.failures[:3]


def test_corrupted_table_is_caught():
    block = RepeatedAverages(1)

    def corrupted(M, n):
        mu = dict(measure(block, M, n))
        if n == 1:
            return ProbMeasure(mu)
        first, second = sorted(mu)[:2]
        shift = mu[first] / 2
        mu[first] -= shift
        mu[second] += shift
        return ProbMeasure(mu)

    rng = random.Random(3)
    samples = [(random_prefix(rng, 2, 30), 2) for _ in range(5)]
    report = verify_axioms(block, samples, measure_fn=corrupted)
    assert not report.ok
    assert {f["axiom"] for f in report.failures} == {"permanence"}
