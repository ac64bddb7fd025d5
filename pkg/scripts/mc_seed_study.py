"""Monte-Carlo ML variance relative to the CRLB across seeds.

Usage: python3 scripts/mc_seed_study.py [--seeds 20] [--trials 10000]
"""

import argparse

import numpy as np

from rydsense.eit import AtomSystem, OpticalMedium
from rydsense.estimation import PhotonBudget, mc_estimator_validation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--n0", type=float, default=1e6)
    ap.add_argument("--delta", type=float, default=2.184)
    args = ap.parse_args()
    ratios = []
    for seed in range(args.seeds):
        res = mc_estimator_validation(AtomSystem(), OpticalMedium(), PhotonBudget(args.n0), args.delta, 0.0,
                                      args.trials, seed)
        ratios.append(res.sample_variance / res.crlb)
        print(f"seed {seed:3d}: variance/CRLB = {ratios[-1]:.4f}")
    r = np.array(ratios)
    print(f"mean {r.mean():.4f}, std {r.std(ddof=1):.4f}, expected sampling std {np.sqrt(2 / args.trials):.4f}")
    print(f"fraction inside [1.0, 1.3]: {np.mean((r >= 1.0) & (r <= 1.3)):.2f}")


if __name__ == "__main__":
    main()
