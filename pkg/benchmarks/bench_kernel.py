"""Compare the compiled associativity kernel against the numpy fallback.

Runs the full associativity sweep from category validation on a few
standard tables, once per kernel implementation.  Each measurement runs
in a subprocess so the implementation is chosen by the same import-time
selection the package uses (PATCALC_NO_EXT=1 forces the fallback).

    python3 benchmarks/bench_kernel.py [--repeat N] [--big]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = ["f_star:3", "f_star:4", "ass:3"]
BIG_CASES = ["ass:4"]


def build(case):
    from patcalc import stdlib

    fam, _, level = case.partition(":")
    return stdlib.build_pattern(stdlib.BuilderSpec(fam, int(level))).cat


def worker(case, repeat):
    from patcalc import _kernel, fincat

    C = build(case)
    fincat._assoc_violation(C)  # warm caches
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        assert fincat._assoc_violation(C) is None
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    triples = 0
    for (a, b, c), blk in C.comp.items():
        for (c2, d) in C.block_bounds:
            if c2 == c and C.hom_size(c, d):
                triples += _kernel.count_assoc_triples(
                    blk, C.comp[(b, c, d)], C.comp[(a, c, d)],
                    C.comp[(a, b, d)], 0, 0,
                )
    print(json.dumps({
        "impl": _kernel.IMPL,
        "case": case,
        "mor": C.n_mor,
        "triples": triples,
        "seconds": best,
    }))


def measure(case, repeat, force_fallback):
    env = dict(os.environ)
    env.pop("PATCALC_NO_EXT", None)
    if force_fallback:
        env["PATCALC_NO_EXT"] = "1"
    out = subprocess.run(
        [sys.executable, __file__, "--case", case, "--repeat", str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--big", action="store_true", help="include ass:4")
    ap.add_argument("--case", help="internal: run one case in-process")
    args = ap.parse_args()
    if args.case:
        worker(args.case, args.repeat)
        return

    cases = CASES + (BIG_CASES if args.big else [])
    print("%-10s %8s %12s %12s %12s %8s" % (
        "case", "mor", "triples", "compiled", "fallback", "ratio"))
    for case in cases:
        fast = measure(case, args.repeat, force_fallback=False)
        slow = measure(case, args.repeat, force_fallback=True)
        if fast["impl"] == slow["impl"]:
            print("%-10s  (extension not built; single impl %s: %.4fs)" % (
                case, fast["impl"], fast["seconds"]))
            continue
        print("%-10s %8d %12d %11.4fs %11.4fs %7.1fx" % (
            case, fast["mor"], fast["triples"],
            fast["seconds"], slow["seconds"],
            slow["seconds"] / max(fast["seconds"], 1e-9)))


if __name__ == "__main__":
    main()
