"""Compiled vs pure-Python reduction kernel on jet-ideal workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs in a fresh interpreter because the choice is made at import.
"""

import argparse
import json
import os
import statistics
import subprocess
import sys

WORKLOADS = {
    "node jets m=5": "dim:x*y - z^2|x y z|5",
    "node jets m=6": "dim:x*y - z^2|x y z|6",
    "cusp jets m=4": "dim:x^2 - y^3|x y|4",
    "ODP jets m=3": "dim:x^2 + y^2 + z^2 + w^2|x y z w|3",
    "elliptic cone jets m=3": "dim:x^3 + y^3 + z^3|x y z|3",
    "cone cylinder e=2 m=4": "cyl:x^3 + y^3 + z^3|x y z|2|4",
}

CHILD = r"""
import json, sys, time
from jetspace.groebner import _kernel, ideal_dimension
from jetspace.jets import jet_ideal, SubschemeSpec
from jetspace.poly import Polynomial
from jetspace.classify import singular_fiber_generators
from jetspace.mld import PairSpec, cylinder_codim

kind, rest = sys.argv[1].split(":", 1)
parts = rest.split("|")
ring = tuple(parts[1].split())
F = [Polynomial.parse(parts[0], ring)]
t = time.perf_counter()
if kind == "dim":
    I = jet_ideal(F, len(ring), int(parts[2]))
    out = ideal_dimension(I.generators, ring=I.jet_ring)
elif kind == "fiber":
    gens, jr = singular_fiber_generators(F, len(ring), int(parts[2]))
    out = ideal_dimension(gens, ring=jr)
else:
    pair = PairSpec(ring, tuple(F), (), SubschemeSpec(tuple(Polynomial.gens(ring)), "0"))
    out = cylinder_codim(pair, int(parts[2]), (), int(parts[3]))
print(json.dumps({"kernel": _kernel.IMPLEMENTATION, "seconds": time.perf_counter() - t, "result": str(out)}))
"""


def run(spec, pure):
    env = dict(os.environ, JETSPACE_PURE="1" if pure else "0")
    proc = subprocess.run([sys.executable, "-c", CHILD, spec], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'workload':<28}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, spec in WORKLOADS.items():
        fast = [run(spec, False) for _ in range(args.repeat)]
        slow = [run(spec, True) for _ in range(args.repeat)]
        if fast[0]["kernel"] == slow[0]["kernel"]:
            print(f"{name:<28} compiled kernel not built; only {fast[0]['kernel']} available")
            continue
        assert fast[0]["result"] == slow[0]["result"], name
        tf = statistics.median(r["seconds"] for r in fast)
        ts = statistics.median(r["seconds"] for r in slow)
        print(f"{name:<28}{tf:>12.3f}{ts:>12.3f}{ts / tf:>9.2f}x")


if __name__ == "__main__":
    main()
