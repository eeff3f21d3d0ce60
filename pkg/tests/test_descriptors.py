from fractions import Fraction as Fr

import pytest

from schreier.blocks import Dirac, RepeatedAverages
from schreier.descriptors import parse_block, parse_family, parse_prefix_text, parse_space
from schreier.errors import DescriptorError
from schreier.families import AllFinite, Compose, FineSchreier, Pair, Schreier, Singletons, TensorPow
from schreier.norms import C0, ConvexifyQ, DualOf, HXi, Lp, Tsirelson
from schreier.ordinals import OMEGA


@pytest.mark.parametrize(
    "text,want",
    [
        ("S(2)", Schreier(2)),
        ("S2", Schreier(2)),
        ("F(w)", FineSchreier(OMEGA)),
        ("F3", FineSchreier(3)),
        ("singletons", Singletons()),
        ("all", AllFinite()),
        ("compose(S(1),S(1))", Compose(Schreier(1), Schreier(1))),
        ("pair(F(1),F(2))", Pair(FineSchreier(1), FineSchreier(2))),
        ("tensor(S(1),m=2)", TensorPow(Schreier(1), 2)),
    ],
)
def test_families(text, want):
    assert parse_family(text) == want


def test_blocks():
    assert parse_block("dirac") == Dirac()
    assert parse_block("RA(w+1)") == RepeatedAverages(OMEGA + 1)


@pytest.mark.parametrize(
    "text,want",
    [
        ("l2", Lp(2)),
        ("l_3/2", Lp(Fr(3, 2))),
        ("linf", Lp("inf")),
        ("lp(4)", Lp(4)),
        ("c0", C0()),
        ("T", Tsirelson(1, Fr(1, 2))),
        ("T(mu=2,theta=1/3)", Tsirelson(2, Fr(1, 3))),
        ("conv(T(mu=1,theta=1/2),q=2)", ConvexifyQ(Tsirelson(1, Fr(1, 2)), 2)),
        ("dual(T(1,1/2),N=10)", DualOf(Tsirelson(1, Fr(1, 2)), 10)),
        ("hxi(l2,xi=1)", HXi(Lp(2), 1)),
    ],
)
def test_spaces(text, want):
    assert parse_space(text) == want


@pytest.mark.parametrize("bad", ["S(", "S(w+w^2)", "Q(1)", "compose(S(1))", "pair(S(1),,S(2))"])
def test_bad_families(bad):
    with pytest.raises(DescriptorError):
        parse_family(bad)


@pytest.mark.parametrize("bad", ["l0", "T(theta=2)", "dual(l2,N=3)", "zz", "conv(T,q=1/2)"])
def test_bad_spaces(bad):
    with pytest.raises(DescriptorError):
        parse_space(bad)


def test_prefixes():
    assert parse_prefix_text("2,4,6,8").elements == (2, 4, 6, 8)
    assert parse_prefix_text("2,4,6,...").take(5) == (2, 4, 6, 8, 10)
    assert parse_prefix_text("1,5,arith(10,3)...").take(5) == (1, 5, 10, 13, 16)
    with pytest.raises(DescriptorError):
        parse_prefix_text("3,2")
