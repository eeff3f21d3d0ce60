import itertools
import math
import random
from fractions import Fraction as Fr

import pytest

from schreier import _kernels_py as pure
from schreier import kernels

try:
    from schreier import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def rand_gram(rng, t):
    vecs = [[rng.uniform(-1, 1) for _ in range(t + 2)] for _ in range(t)]
    return [[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs]


def rand_support(rng, n):
    pos = sorted(rng.sample(range(1, 3 * n + 4), n))
    return pos, [rng.uniform(0, 3) for _ in range(n)]


def test_backend_is_reported():
    assert kernels.BACKEND in {"cython", "python"}


def test_sign_max_gram_matches_enumeration():
    rng = random.Random(1)
    for t in range(1, 8):
        G = rand_gram(rng, t)
        best = max(
            sum(e[i] * G[i][j] * e[j] for i in range(t) for j in range(t))
            for e in itertools.product((1, -1), repeat=t)
        )
        value, signs = pure.sign_max_gram(G)
        assert math.isclose(value, best, rel_tol=1e-12)
        assert signs[0] == 1


def test_pure_kernels_accept_fractions():
    G = [[Fr(2), Fr(-1)], [Fr(-1), Fr(2)]]
    assert pure.sign_max_gram(G)[0] == 6
    assert pure.tsirelson_s1([4, 5, 6, 7], [Fr(1)] * 4, Fr(1, 2)) == 2
    assert pure.hxi_s1([2, 3], [Fr(1), Fr(1)], None) == 2


@needs_compiled
def test_compiled_sign_max_gram_agrees():
    rng = random.Random(2)
    for t in range(1, 10):
        G = rand_gram(rng, t)
        a, b = compiled.sign_max_gram(G), pure.sign_max_gram(G)
        assert math.isclose(a[0], b[0], rel_tol=1e-12)


@needs_compiled
@pytest.mark.parametrize("p", [None, 1.0, 2.0, 3.5])
def test_compiled_hxi_agrees(p):
    rng = random.Random(3)
    for n in range(1, 14):
        pos, vals = rand_support(rng, n)
        assert math.isclose(compiled.hxi_s1(pos, vals, p), pure.hxi_s1(pos, vals, p), rel_tol=1e-12)


@needs_compiled
@pytest.mark.parametrize("theta", [0.5, 0.25, 0.9])
def test_compiled_tsirelson_agrees(theta):
    rng = random.Random(4)
    for n in range(1, 12):
        pos, vals = rand_support(rng, n)
        assert math.isclose(compiled.tsirelson_s1(pos, vals, theta), pure.tsirelson_s1(pos, vals, theta), rel_tol=1e-12)


def test_dispatch_keeps_fractions_exact():
    out = kernels.tsirelson_s1([4, 5, 6, 7], [Fr(1)] * 4, Fr(1, 2))
    assert out == 2 and isinstance(out, Fr)
