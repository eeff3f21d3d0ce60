import pytest

from schreier.errors import OrdinalParseError
from schreier.ordinals import OMEGA, Limit, Ordinal, Successor, Zero, classify, fundamental, omega_power, parse


def O(text):
    return parse(text)


@pytest.mark.parametrize("text", ["0", "1", "7", "w", "w+1", "w*2+3", "w^2*3+w+1", "w^w", "w^(w+1)*2"])
def test_parse_roundtrip(text):
    assert parse(str(parse(text))) == parse(text)


def test_parse_denotation():
    assert parse("0").is_zero
    a = parse("w^2*3+w+1")
    assert a == omega_power(2) * 3 + OMEGA + 1


@pytest.mark.parametrize("bad", ["w+w^2", "", "w^", "3+w+", "x"])
def test_parse_rejects(bad):
    with pytest.raises(OrdinalParseError):
        parse(bad)


def test_addition():
    a = O("w*2+3")
    assert Ordinal.of(0) + a == a
    assert Ordinal.of(1) + OMEGA == OMEGA
    assert a + OMEGA == O("w*3")
    assert OMEGA + 1 != 1 + OMEGA


def test_multiplication():
    assert OMEGA * OMEGA == O("w^2")
    assert O("w+1") * 2 == O("w*2+1")
    assert omega_power(1) * OMEGA == O("w^2")
    assert 2 * OMEGA == OMEGA


def test_classify():
    assert isinstance(classify(0), Zero)
    assert classify(O("w+3")) == Successor(O("w+2"))
    assert isinstance(classify(O("w^2")), Limit)


@pytest.mark.parametrize(
    "alpha,n,want",
    [("w", 5, "5"), ("w^2", 3, "w*3"), ("w^w", 2, "w^2"), ("w*2", 4, "w+4"), ("w^2+w", 1, "w^2+1")],
)
def test_fundamental(alpha, n, want):
    assert fundamental(O(alpha), n) == O(want)


def test_fundamental_sequence_increases_to_limit():
    for alpha in ("w", "w^2", "w^w", "w*3"):
        lam = O(alpha)
        seq = [lam.fundamental(n) for n in range(1, 8)]
        assert all(a < b for a, b in zip(seq, seq[1:]))
        assert all(a < lam for a in seq)


def test_fundamental_rejects_non_limits():
    with pytest.raises(ValueError):
        O("w+1").fundamental(2)


def test_order():
    chain = [O(t) for t in ("0", "1", "5", "w", "w+1", "w*2", "w^2", "w^w")]
    assert chain == sorted(chain)
