"""Time the hot kernels on each available backend.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from fpgroups import kernels
from fpgroups.constructions import higman
from fpgroups.presentations import parse_presentation
from fpgroups.rips import rips_wise
from fpgroups.small_cancellation import sc_verify


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def low_index_case(text, bound):
    p = parse_presentation(text) if isinstance(text, str) else text
    rels = [p.codes(r) for r in p.relators]
    return lambda b: kernels.low_index_search(2 * p.rank, rels, bound, backend=b)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    gamma = rips_wise(higman()).gamma
    cases = [
        ("low-index Higman, index <= 6", low_index_case(higman(), 6)),
        ("low-index Higman, index <= 7", low_index_case(higman(), 7)),
        ("low-index F2, index <= 5", low_index_case("<a,b | >", 5)),
        ("low-index (2,3,7), index <= 12", low_index_case("<a,b | a^2, b^3, (a*b)^7>", 12)),
        ("piece scan, Rips(Higman) Gamma", lambda b: sc_verify(gamma, backend=b)),
    ]
    backends = sorted(kernels.available_backends())
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases:
        times = [best_of(lambda: fn(b), args.repeat) for b in backends]
        row = f"{name:40s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[backends.index('python')] / times[backends.index('cython')]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
