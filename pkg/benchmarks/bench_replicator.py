"""Benchmark the compiled trajectory kernel against the NumPy fallback.

Runs the basin-sampling workload (batched fixed-step integration) at a few
batch sizes and prints steps/second per backend plus the speedup.

    python benchmarks/bench_replicator.py [--samples 30] [--t-end 500]
"""

import argparse
import time

import numpy as np

import normgame.replicator as rep
from normgame.payoff import chicken_gamma_closed_form


def time_backend(backend: str, gamma, n_samples: int, t_end: float, dt: float) -> float:
    start = time.perf_counter()
    rep.basin_sample(gamma, n_samples, seed=12345, t_end=t_end, dt=dt, backend=backend)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=30)
    parser.add_argument("--t-end", type=float, default=500.0)
    parser.add_argument("--dt", type=float, default=0.01)
    args = parser.parse_args()

    gamma = chicken_gamma_closed_form(0.5, 0.5)
    backends = rep.available_backends()
    print(f"available backends: {', '.join(backends)} (default: {rep.backend()})")
    n_steps = int(round(args.t_end / args.dt))
    results = {}
    for backend in backends:
        time_backend(backend, gamma, 2, 10.0, args.dt)  # warm up
        elapsed = time_backend(backend, gamma, args.samples, args.t_end, args.dt)
        rate = args.samples * n_steps / elapsed
        results[backend] = elapsed
        print(
            f"{backend:>9}: {elapsed:7.3f} s for {args.samples} trajectories x "
            f"{n_steps} steps ({rate / 1e6:.2f} M steps/s)"
        )
    if len(results) == 2:
        print(f"  speedup: {results['pure'] / results['compiled']:.1f}x")

    # parity: identical trajectories within roundoff accumulation
    if len(backends) == 2:
        rng = np.random.default_rng(0)
        x0 = rng.dirichlet(np.ones(4))
        paths = {
            b: rep.integrate(x0, gamma, t_end=50.0, record_every=100, backend=b).states
            for b in backends
        }
        gap = np.abs(paths["pure"] - paths["compiled"]).max()
        print(f"  backend parity: max state difference {gap:.2e}")


if __name__ == "__main__":
    main()
