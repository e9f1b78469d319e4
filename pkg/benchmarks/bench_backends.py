"""Compare the numba kernels against the pure-numpy fallback.

Runs the same optimizer workload in two subprocesses, one with
``EOA_BACKEND=numpy`` and one with the default backend, and reports wall
times plus a value cross-check.  The pre-drawn-noise design means both
backends consume the same proposal sequence, so the optima must agree to
round-off (compiled reductions can round differently in the last ulp);
the benchmark fails loudly if they drift beyond that.

Usage::

    python benchmarks/bench_backends.py [--states 12] [--restarts 8] [--iters 300]
"""
import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json
import sys
import time

import eoa.kernels as kernels
from eoa.assistance import OptimizerConfig, coa_convex_max, eoa_lower_bound
from eoa.linalg import instance_seed
from eoa.states import random_pure

n_states, restarts, iters = (int(x) for x in sys.argv[1:4])
cfg = OptimizerConfig(restarts=restarts, max_iters=iters, seed=0)

# warmup: trigger compilation outside the timed region
eoa_lower_bound(random_pure((2, 2, 2), 0), OptimizerConfig(restarts=1, max_iters=20, seed=0))

t0 = time.perf_counter()
povm_vals = [
    eoa_lower_bound(random_pure((2, 2, 2), instance_seed(1, i)), cfg)
    for i in range(n_states)
]
t_povm = time.perf_counter() - t0

t0 = time.perf_counter()
mix_vals = []
for i in range(n_states):
    a = random_pure((2, 2), instance_seed(2, 2 * i)).density()
    b = random_pure((2, 2), instance_seed(2, 2 * i + 1)).density()
    mix_vals.append(coa_convex_max(0.5 * a + 0.5 * b, cfg))
t_mix = time.perf_counter() - t0

print(json.dumps({
    "backend": kernels.BACKEND,
    "povm_seconds": t_povm,
    "mix_seconds": t_mix,
    "values": [repr(v) for v in povm_vals + mix_vals],
}))
"""


def run_backend(backend: str, n_states: int, restarts: int, iters: int) -> dict:
    env = dict(os.environ)
    if backend:
        env["EOA_BACKEND"] = backend
    else:
        env.pop("EOA_BACKEND", None)
    out = subprocess.run(
        [sys.executable, "-c", _WORKER, str(n_states), str(restarts), str(iters)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=12)
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--iters", type=int, default=300)
    args = parser.parse_args()

    plain = run_backend("numpy", args.states, args.restarts, args.iters)
    fast = run_backend("", args.states, args.restarts, args.iters)

    if fast["backend"] == "numpy":
        print("numba unavailable: both runs used the numpy fallback")
    gap = max(
        abs(float(a) - float(b))
        for a, b in zip(plain["values"], fast["values"], strict=True)
    )
    if gap > 1e-9:
        print(f"BACKENDS DIVERGED: max value gap {gap:.3e} exceeds 1e-9")
        return 1

    print(f"{'workload':<26}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for key, label in (("povm_seconds", "povm search (measure C)"),
                       ("mix_seconds", "ensemble search (coa)")):
        a, b = plain[key], fast[key]
        print(f"{label:<26}{a:>9.2f}s{b:>9.2f}s{a / b:>8.1f}x")
    print(f"values agree across backends ({len(plain['values'])} optima, "
          f"max gap {gap:.1e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
