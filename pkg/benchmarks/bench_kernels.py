"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends get the same float inputs; results are checked to agree before
timings are reported.
"""

import argparse
import math
import random
import timeit

from schreier import _kernels_py as pure

try:
    from schreier import _kernels as compiled
except ImportError:
    compiled = None


def gram(rng, t):
    vecs = [[rng.uniform(-1, 1) for _ in range(t + 3)] for _ in range(t)]
    return [[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs]


def support(rng, n):
    pos = sorted(rng.sample(range(2, 4 * n + 4), n))
    return pos, [rng.uniform(0, 2) for _ in range(n)]


def cases(rng):
    G = gram(rng, 14)
    pos, vals = support(rng, 40)
    tpos, tvals = support(rng, 14)
    return {
        "sign_max_gram t=14": lambda k: k.sign_max_gram(G)[0],
        "hxi_s1 n=40 p=2": lambda k: k.hxi_s1(pos, vals, 2.0),
        "hxi_s1 n=40 c0": lambda k: k.hxi_s1(pos, vals, None),
        "tsirelson_s1 n=14": lambda k: k.tsirelson_s1(tpos, tvals, 0.5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'kernel':<22}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<22}{t_py:>14.2f}{'n/a':>14}{'':>10}")
            continue
        if not math.isclose(fn(pure), fn(compiled), rel_tol=1e-9):
            raise SystemExit(f"{name}: backends disagree")
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22}{t_py:>14.2f}{t_c:>14.3f}{t_py / t_c:>9.0f}x")


if __name__ == "__main__":
    main()
