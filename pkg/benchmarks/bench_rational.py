"""Compare the gmpy2 and Fraction rational backends on a fixed workload.

Run: ``python benchmarks/bench_rational.py [--repeat N]``.  Each backend runs in
a fresh interpreter because the backend is fixed at import time.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from gorlab._rational import BACKEND, to_q
from gorlab.linalg import span_rank
from gorlab.modules import dual_module, regular_module, tor
from gorlab.presets import preset
from gorlab.invariants import t_invariant

timings = {}

t = time.perf_counter()
rng = random.Random(0)
for _ in range(20):
    cols = [{i: to_q(rng.randint(-9, 9)) / rng.randint(1, 5) for i in range(40) if rng.random() < 0.3} for _ in range(40)]
    span_rank(cols)
timings["dense_rank_40x40"] = time.perf_counter() - t

t = time.perf_counter()
t_invariant(preset("example"))
timings["t_example"] = time.perf_counter() - t

t = time.perf_counter()
tor(dual_module(regular_module(preset("wedge").truncate())), 13)
timings["tor_wedge"] = time.perf_counter() - t

print(json.dumps({"backend": BACKEND, "timings": timings}))
"""


def run(backend: str) -> dict:
    env = dict(os.environ, GORLAB_RATIONAL=backend)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    best: dict = {}
    for backend in ("gmpy2", "fraction"):
        for _ in range(args.repeat):
            r = run(backend)
            for k, v in r["timings"].items():
                best.setdefault(backend, {})[k] = min(v, best.get(backend, {}).get(k, float("inf")))
    print(f"{'workload':<20}{'gmpy2 (s)':>12}{'fraction (s)':>14}{'ratio':>8}")
    for k in best["gmpy2"]:
        g, f = best["gmpy2"][k], best["fraction"][k]
        print(f"{k:<20}{g:>12.3f}{f:>14.3f}{f / g:>8.1f}")


if __name__ == "__main__":
    main()
