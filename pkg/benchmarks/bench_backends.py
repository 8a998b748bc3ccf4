"""Compare rational-arithmetic backends on a representative certification load.

Runs the same symbolic workload in a fresh interpreter per backend (the
choice is frozen at import time), so results are honest end-to-end timings:

    python benchmarks/bench_backends.py
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOAD = """
import json, time
from bitension import (
    BACKEND_NAME, RAT, bitension_residual, c_bitension_residual, cone,
    make_cubic_eigenmap, make_mu, make_nu,
    solve_cone_biharmonic, solve_cone_cbiharmonic,
)

start = time.perf_counter()
for v in (make_mu(5), make_nu(4)):
    sol, _ = solve_cone_biharmonic(v, certify=False)
    assert bitension_residual(cone(v, sol.t)).is_zero()
v = make_cubic_eigenmap(4)
assert c_bitension_residual(cone(v, solve_cone_cbiharmonic(v, certify=False).t)).is_zero()
print(json.dumps({"backend": BACKEND_NAME, "seconds": time.perf_counter() - start}))
"""


def run_backend(name: str, repeat: int):
    env = dict(os.environ, BITENSION_BACKEND=name)
    times = []
    for _ in range(repeat):
        proc = subprocess.run(
            [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True
        )
        if proc.returncode != 0:
            return None, proc.stderr.strip().splitlines()[-1] if proc.stderr else "failed"
        result = json.loads(proc.stdout)
        assert result["backend"] == name, f"backend override ignored: {result}"
        times.append(result["seconds"])
    return min(times), None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=3, help="runs per backend, best kept")
    args = parser.parse_args()

    results = {}
    for name in ("fraction", "gmpy2"):
        best, error = run_backend(name, args.repeat)
        if best is None:
            print(f"{name:>9}: skipped ({error})")
        else:
            results[name] = best
            print(f"{name:>9}: {best:8.2f} s")
    if len(results) == 2:
        print(f"{'speedup':>9}: {results['fraction'] / results['gmpy2']:8.2f} x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
