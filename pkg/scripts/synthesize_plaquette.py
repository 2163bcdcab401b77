"""Synthesize a plaquette-evolution circuit and verify it against the target.

Example: python scripts/synthesize_plaquette.py --weight 2 --angle 0.37
"""
import argparse

import numpy as np

from ftl.circuit import circuit_unitary
from ftl.linalg import unitary_distance
from ftl.pauli import PauliString, evolution_matrix
from ftl.synth import BlockGraph, SynthOptions, neuroevolution_search, simplify


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--weight", type=int, choices=(2, 4), default=2)
    ap.add_argument("--angle", type=float, default=0.37)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--population", type=int, default=None)
    ap.add_argument("--generations", type=int, default=None)
    args = ap.parse_args()

    n = args.weight
    target = evolution_matrix(PauliString.z_string(n, range(n)), args.angle)
    if n == 2:
        opts = SynthOptions(
            population=args.population or 12,
            generations=args.generations or 10,
            seed=args.seed,
        )
    else:
        opts = SynthOptions(
            population=args.population or 16,
            initial_depth=13,
            depth_step=2,
            generations=args.generations or 5,
            max_iters=600,
            seed=args.seed,
        )
    result = neuroevolution_search(target, BlockGraph.line(n), opts)
    circuit, params = simplify(result.circuit, result.params)
    final = unitary_distance(target, circuit_unitary(circuit))
    counts = circuit.gate_counts()
    print(f"search loss      : {result.loss:.3e}")
    print(f"post-cleanup dist: {final:.3e}")
    print(f"gate counts      : {counts}")
    print(f"entanglers       : {counts.get('crz', 0)}")
    print(f"free parameters  : {len(params)}")
    with np.printoptions(precision=6, suppress=True):
        print(f"angles           : {params}")


if __name__ == "__main__":
    main()
