"""Compiled vs pure-Python timing of the multidegree enumeration kernel.

Each mode runs in a fresh interpreter because the fallback is chosen at
import time through OSCULATE_NO_NUMBA.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--big]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = {
    "twisted cubic k=1": ([(0,), (1,), (2,), (3,)], 1),
    "hexagon k=1": ([(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2)], 1),
    "O(2,2) k=1": ([(a, b) for a in range(3) for b in range(3)], 1),
}
BIG = {"O(1,1,2) k=2": ([(a, b, c) for a in range(2) for b in range(2) for c in range(3)], 2)}


def worker(names, repeat):
    from osculate import ToricEmbedding, multidegrees
    from osculate._kernels import HAVE_NUMBA

    table = {**CASES, **BIG}
    res = {}
    for name in names:
        pts, k = table[name]
        E = ToricEmbedding.from_exponents(pts)
        t0 = time.perf_counter()
        delta = multidegrees(E, k)  # first call includes jit compilation or cache load
        first = time.perf_counter() - t0
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            multidegrees(E, k)
            best = min(best, time.perf_counter() - t0)
        res[name] = {"delta": delta, "first": first, "best": best}
    print(json.dumps({"numba": HAVE_NUMBA, "results": res}))


def run_mode(no_numba, names, repeat):
    env = dict(os.environ, OSCULATE_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run(
        [sys.executable, __file__, "--worker", "--repeat", str(repeat), *names],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--big", action="store_true", help="include O(1,1,2), k=2 (minutes without numba)")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    ap.add_argument("names", nargs="*")
    args = ap.parse_args()
    if args.worker:
        worker(args.names, args.repeat)
        return
    names = list(CASES) + (list(BIG) if args.big else [])
    fast = run_mode(False, names, args.repeat)
    slow = run_mode(True, names, args.repeat)
    print(f"{'case':<20}{'numba (s)':>12}{'python (s)':>12}{'speedup':>10}  delta")
    for name in names:
        a, b = fast["results"][name], slow["results"][name]
        assert a["delta"] == b["delta"], (name, a["delta"], b["delta"])
        print(f"{name:<20}{a['best']:>12.4f}{b['best']:>12.4f}{b['best'] / a['best']:>9.1f}x  {a['delta']}")
    if not fast["numba"]:
        print("note: numba not importable, both columns ran the fallback")


if __name__ == "__main__":
    main()
