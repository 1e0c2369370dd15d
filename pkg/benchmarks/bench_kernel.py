"""Compare the compiled and pure-Python match kernels.

    python3 benchmarks/bench_kernel.py [--n 200000] [--repeat 3]

Both kernels build a signature histogram for the default 49-rule catalog over
a synthetic corpus; the histograms must agree.
"""

import argparse
import time

from crackplan import _kernel_py
from crackplan.ruledsl import builtin_prtk_default
from crackplan.synth import load_mix, synthesize

try:
    from crackplan import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def bench(kernel, rules, corpus, repeat: int) -> tuple[float, dict]:
    prog = kernel.build_program(rules)
    best = float("inf")
    hist = {}
    for _ in range(repeat):
        t0 = time.perf_counter()
        hist = kernel.signature_counts(prog, corpus)
        best = min(best, time.perf_counter() - t0)
    return best, hist


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rules = builtin_prtk_default().rules
    corpus = synthesize(load_mix("pio1-shares"), args.n, seed=args.seed)
    print(f"{args.n} passwords x {len(rules)} rules, best of {args.repeat}")

    t_py, h_py = bench(_kernel_py, rules, corpus, args.repeat)
    print(f"  python : {t_py:8.3f} s  {args.n / t_py:12,.0f} pw/s")
    if _kernel_c is None:
        print("  cython : not built")
        return
    t_c, h_c = bench(_kernel_c, rules, corpus, args.repeat)
    print(f"  cython : {t_c:8.3f} s  {args.n / t_c:12,.0f} pw/s")
    if h_c != h_py:
        raise SystemExit("kernels disagree")
    print(f"  speedup: {t_py / t_c:.1f}x, histograms identical")


if __name__ == "__main__":
    main()
