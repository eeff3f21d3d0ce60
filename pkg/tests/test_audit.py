import math
from fractions import Fraction as Fr
from itertools import combinations

import pytest

from schreier.audit import (
    AuditConfig,
    SeqSample,
    gamma_lower_search,
    gamma_profile,
    goodness_constant,
    hereditary_check,
    stability_constant,
)
from schreier.errors import BudgetExceeded
from schreier.norms import DominationByLp, Lp, SeqNormSpec, Tsirelson
from schreier.oracles import sign_bruteforce
from schreier.norms import norm
from schreier.vectors import Vec

T = Tsirelson(1, Fr(1, 2))


def orthonormal(n):
    return SeqSample([Vec.basis(i) for i in range(1, n + 1)], "l2 basis", Lp(2))


def cfg(block="dirac", zeta=1, k=0, ground=Lp(2), prefix="1,2,3,4,5,6,7,8", p="inf"):
    return AuditConfig(block, zeta, k, SeqNormSpec(ground, DominationByLp(p)), prefix)


def test_sample_rejects_long_vectors():
    with pytest.raises(ValueError):
        SeqSample([Vec({1: 2})], ground=Lp(2))


def test_empty_set_is_good():
    assert goodness_constant((), cfg(), orthonormal(8)).value == 0


def test_dirac_goodness_is_square_root_of_size():
    ev = goodness_constant((2, 4, 5, 7), cfg(), orthonormal(8))
    assert ev.value == 2 and ev.exact


def test_repeated_averages_goodness_on_short_set():
    # inside (2,3,4,5,6) no maximal S_1 block can start at 4 or later, so every
    # admissible chain is one block of two or three points
    ev = goodness_constant((2, 3, 4, 5, 6), cfg("RA(1)"), orthonormal(8))
    assert math.isclose(float(ev.value), 1 / math.sqrt(2), rel_tol=1e-12)
    assert len(ev.blocks) == 1 and len(ev.blocks[0]) == 2


def test_repeated_averages_goodness_with_two_blocks():
    ev = goodness_constant((2, 3, 4, 5, 6, 7), cfg("RA(1)"), orthonormal(8))
    # (e2+e3)/2 +- (e4+..+e7)/4 in l2 against the sup norm of the signs
    assert math.isclose(float(ev.value), math.sqrt(1 / 2 + 1 / 4), rel_tol=1e-12)


def test_goodness_size_cap():
    with pytest.raises(BudgetExceeded):
        goodness_constant(range(1, 30), cfg(prefix="1,2,3,..."), orthonormal(30))


def test_dirac_goodness_matches_subsequence_signs():
    # Dirac blocks: goodness is the largest sign-enumerated norm over subsequences of G
    sample = SeqSample([Vec.basis(i) for i in range(1, 9)], "T basis", T)
    c = cfg(ground=T)
    G = (3, 4, 6, 8)
    want = max(
        sign_bruteforce(lambda v: norm(T, v), [sample.vectors[i - 1] for i in H])
        for r in range(1, len(G) + 1)
        for H in combinations(G, r)
    )
    assert goodness_constant(G, c, sample).value == want


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_dirac_stability_orthonormal(m):
    ev = stability_constant(cfg(zeta=m), orthonormal(8))
    assert math.isclose(float(ev.value), math.sqrt(m), rel_tol=1e-12)


def test_dirac_stability_tsirelson_pairs():
    sample = SeqSample([Vec.basis(i) for i in range(1, 12)], "T basis", T)
    ev = stability_constant(cfg(zeta=2, ground=T, prefix="4,5,6,7,8,9,10,11"), sample)
    assert ev.value == 1


def test_witness_search():
    c = cfg(zeta=4)
    hit = gamma_lower_search(c, orthonormal(8), 1.9)
    assert hit.found and hit.evaluation.value == 2 and len(hit.evaluation.F) == 4
    first = gamma_lower_search(c, orthonormal(8), 0)
    assert first.found
    sample = SeqSample([Vec.basis(i) for i in range(1, 12)], "T basis", T)
    miss = gamma_lower_search(cfg(zeta=2, ground=T, prefix="4,5,6,7,8,9,10,11"), sample, 1.5)
    assert not miss.found and miss.max_value == 1


def test_witness_replays():
    from schreier.audit import evaluate_set

    c = cfg("RA(1)", zeta=2, prefix="2,3,4,5,6,7,8,9,10,11,12,13")
    hit = gamma_lower_search(c, orthonormal(13), 0.5)
    again = evaluate_set(c, orthonormal(13), hit.evaluation.blocks)
    assert again.value == hit.evaluation.value


def test_goodness_is_hereditary():
    c = cfg("RA(1)")
    G = (2, 3, 4, 5, 6, 7, 8)
    subs = [H for r in range(len(G)) for H in combinations(G, r)]
    assert hereditary_check(G, c, orthonormal(8), subs) == []


def test_profile_laws_dirac():
    prof = gamma_profile(cfg(), orthonormal(8), zetas=("0", "1", "2", "3", "w"), ks=(0, 1))
    assert prof.ok, [l.to_json() for l in prof.laws if not l.ok]
    assert all(prof.values[(z, k)].value == 0 for (z, k) in prof.values if z == 0)
    laws = {l.law for l in prof.laws}
    assert {"zero", "monotone", "shift-up", "shift-down"} <= laws


def test_profile_laws_repeated_averages():
    c = cfg("RA(1)", prefix="2,3,4,5,6,7,8,9,10,11,12,13")
    prof = gamma_profile(c, orthonormal(13), zetas=("0", "1", "2"), ks=(0, 1))
    assert prof.ok, [l.to_json() for l in prof.laws if not l.ok]
    col = [prof.values[(z, 0)].value for z in prof.zetas]
    assert all(float(a) <= float(b) + 1e-9 for a, b in zip(col, col[1:]))
