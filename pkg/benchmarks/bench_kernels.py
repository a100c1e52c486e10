"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py --repeat 3

Both backends are checked for identical output before timing.
"""
import argparse
import time
from fractions import Fraction

from moranslice import kernels
from moranslice.carpet import MoranSequence
from moranslice.matrices import family_lists
from moranslice.slicing import Slope


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def oracle_case(slope, sigma, a, depth, budget):
    a = Fraction(a)
    tags = sigma.tags(depth)
    return lambda backend: kernels.oracle_level_counts(a.numerator, a.denominator, slope.M, slope.N, tags, budget,
                                                       backend=backend)


def histogram_case(slope, sigma, k):
    mats, tags = family_lists(slope), sigma.tags(k)
    return lambda backend: kernels.norm_histogram(mats, tags, backend=backend)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = ap.parse_args()

    if not kernels.HAVE_COMPILED:
        raise SystemExit("compiled extension not available; build with `pip install -e . --no-build-isolation`")

    d = 9 if args.quick else 13
    k = 8 if args.quick else 11
    cases = [
        (f"oracle   slope=1/1 sigma=(01) a=2/7 depth={d}", oracle_case(Slope(1, 1), MoranSequence.parse("(01)"),
                                                                      "2/7", d, 10**8)),
        (f"oracle   slope=2/3 sigma=(1)  a=1/5 depth={d - 1}", oracle_case(Slope(2, 3), MoranSequence.parse("(1)"),
                                                                        "1/5", d - 1, 10**8)),
        (f"spectrum slope=1/1 sigma=(0)  k={k + 1}", histogram_case(Slope(1, 1), MoranSequence.parse("(0)"), k + 1)),
        (f"spectrum slope=2/3 sigma=(01) k={k - 1}", histogram_case(Slope(2, 3), MoranSequence.parse("(01)"), k - 1)),
    ]
    print(f"{'case':<46} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, run in cases:
        tp, out_p = best_of(lambda: run("python"), args.repeat)
        tc, out_c = best_of(lambda: run("compiled"), args.repeat)
        if out_p != out_c:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<46} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
