"""Spread of the demodulated AC amplitude under the reference noise model across seeds.

Usage: python3 scripts/ac_pilot.py [--seeds 20]
"""

import argparse
import dataclasses
from pathlib import Path

import numpy as np

from rydsense.config import load_scenario
from rydsense.readout import demodulate, sense_timeseries, synthesize_field

ROOT = Path(__file__).resolve().parents[1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--config", type=Path, default=ROOT / "configs" / "fig9.toml")
    args = ap.parse_args()
    sc = load_scenario(args.config)
    field = synthesize_field(sc.field_spec, sc.ac.duration, sc.ac.sample_rate, sc.sensor.e_bias)
    errs = []
    for seed in range(args.seeds):
        noise = dataclasses.replace(sc.noise, seed=seed)
        a_hat, _ = demodulate(sense_timeseries(sc.sensor, field, noise)[2], sc.field_spec.f_ac, sc.sensor)
        errs.append(a_hat / sc.field_spec.a - 1)
        print(f"seed {seed:3d}: A_hat = {a_hat:.5f} V/m ({errs[-1]:+.2%})")
    errs = np.array(errs)
    print(f"mean {errs.mean():+.2%}, std {errs.std(ddof=1):.2%}, worst {np.abs(errs).max():.2%}")


if __name__ == "__main__":
    main()
