"""Numba kernels vs the plain numpy fallback.

Each backend runs in its own interpreter because the choice is made at import
time (LATPACK_DISABLE_NUMBA). Workloads:

  lp      S0 feasibility LPs of real selections (tetrahedron, case I)
  affine  affine solution sets of the selection plane systems
  search  the full case I search on the octahedron

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from latpack import _jit
from latpack.catalog import make_solid
from latpack.search import (_normalized_P0, build_triple_set, enumerate_selections, selection_lp, sigma_of,
                            _plane_rows, densest_packing, CASE_KIND)
from latpack.smallsolve import Inconsistent, lp_feasible, solve_affine

repeat = int(sys.argv[1])
P0, Q, s = _normalized_P0(make_solid("tetrahedron"))
ts = build_triple_set(Q, 1).with_sigma(sigma_of(1))
sels = []
for sel in enumerate_selections("I", ts, Q):
    sels.append(sel)
    if len(sels) == 400:
        break
lps = [selection_lp(Q, sel, "I") for sel in sels]
systems = [_plane_rows(Q, sel, CASE_KIND["I"]) for sel in sels]

def affine(A, b):
    try:
        return solve_affine(A, b)
    except Inconsistent:
        return None

# warm-up compiles the kernels (and fills the numba cache)
lp_feasible(lps[0]); affine(*systems[0])

def best_of(fn):
    out = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); out.append(time.perf_counter() - t)
    return min(out)

res = {
    "numba": _jit.USING_NUMBA,
    "lp": best_of(lambda: [lp_feasible(p) for p in lps]),
    "affine": best_of(lambda: [affine(A, b) for A, b in systems]),
    "search": best_of(lambda: densest_packing(make_solid("octahedron"), cases=("I",), verify=False)),
    "n_lp": len(lps),
}
print(json.dumps(res))
"""


def run_backend(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env["LATPACK_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True)
    if out.returncode:
        sys.exit(out.stderr)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    if not fast["numba"]:
        print("numba is not installed: both runs use the numpy fallback")
    print(f"{'workload':10s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for key in ("lp", "affine", "search"):
        print(f"{key:10s} {fast[key]:10.3f} {slow[key]:10.3f} {slow[key] / fast[key]:8.1f}x")
    print(f"({fast['n_lp']} selection LPs per run, best of {args.repeat}; "
          f"total {time.perf_counter() - t0:.0f}s)")


if __name__ == "__main__":
    main()
