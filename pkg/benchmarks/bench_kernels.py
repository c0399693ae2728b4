"""Time the numba kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from spinberry import _kernels
from spinberry.berry import diagonalize_loop
from spinberry.operators import step_propagator
from spinberry.systems import SystemSpec, hamiltonian, loop_samples


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    spec = SystemSpec(j1=1.5, j2=1.5, G=0.5, g1=2.0, g2=-1.0, B0=1.0)
    frames = diagonalize_loop(spec, loop_samples(1.0, 4096)).vectors[:, :, :4].copy()
    unitaries = step_propagator(hamiltonian(spec, 1.0, np.linspace(0, 2 * np.pi, 8192)), 0.01)
    psi = np.eye(spec.dim, dtype=complex)[0]

    cases = {
        "transport (4097 x 16 x 4)": (_kernels.transport_numpy, _kernels.transport_numba, (frames,)),
        "propagate (8192 x 16 x 16)": (_kernels.propagate_numpy, _kernels.propagate_numba, (unitaries, psi)),
    }
    print(f"{'kernel':<28}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}{'max diff':>11}")
    for name, (slow, fast, inputs) in cases.items():
        fast(*inputs)  # compile or load from cache
        t_np = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat))
        diff = max(np.max(np.abs(np.asarray(a) - np.asarray(b))) for a, b in zip(slow(*inputs), fast(*inputs)))
        print(f"{name:<28}{1e3 * t_np:>10.2f}{1e3 * t_nb:>10.2f}{t_np / t_nb:>9.2f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
