"""
Shot-scaling sweep: reconstruction error of the prepared two-qubit state
against the number of shots per setting

Run: python scripts/shot_scaling.py [--seeds 10]
"""

import argparse
import json
import os
import sys

import numpy as np

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from backend.circuits.gates import prep_experiment_state  # noqa: E402
from backend.tomography.counts import simulate_all  # noqa: E402
from backend.tomography.reconstruct import reconstruct  # noqa: E402

SHOT_COUNTS = (2 ** 10, 2 ** 13, 2 ** 16)


def sweep(seeds: int = 10, shot_counts=SHOT_COUNTS) -> dict:
    """
    Mean trace distance per shot count and the fitted log-log slope
    (about -1/2 for shot-noise-limited reconstruction)
    """
    rho = prep_experiment_state().density()
    rows = []
    for shots in shot_counts:
        distances = [reconstruct(simulate_all(rho, shots, seed)).trace_distance(rho) for seed in range(seeds)]
        rows.append({"shots": shots, "mean_trace_distance": float(np.mean(distances)), "std": float(np.std(distances))})

    slope, _ = np.polyfit(np.log([r["shots"] for r in rows]), np.log([r["mean_trace_distance"] for r in rows]), 1)
    return {"seeds": seeds, "rows": rows, "slope": float(slope)}


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seeds", type=int, default=10, help="Seeds averaged per shot count")
    args = parser.parse_args()

    print("\n" + "=" * 50)
    print("SHOT SCALING")
    print("=" * 50 + "\n")

    result = sweep(args.seeds)
    for row in result["rows"]:
        print(f"[OK] {row['shots']:>6} shots: {row['mean_trace_distance']:.5f} +/- {row['std']:.5f}")
    print(f"\nlog-log slope: {result['slope']:.3f}\n")
    print(json.dumps(result, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
