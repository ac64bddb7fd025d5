"""Regenerate every figure dataset from the shipped scenario files.

Usage: python3 scripts/reproduce_figures.py [--out OUT_DIR]
"""

import argparse
import sys
import time
from pathlib import Path

from rydsense.cli import main as cli_main

ROOT = Path(__file__).resolve().parents[1]
RUNS = [
    ("spectrum", "fig3"),
    ("fisher", "fig4"),
    ("spectrum", "fig5b"),
    ("dc", "fig7"),
    ("dc", "fig8"),
    ("ac", "fig9"),
    ("cavity", "fig10"),
    ("cavity", "fig11"),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "out")
    args = ap.parse_args()
    worst = 0
    for command, name in RUNS:
        t0 = time.perf_counter()
        print(f"== {name} ({command})")
        code = cli_main([command, "--config", str(ROOT / "configs" / f"{name}.toml"), "--out", str(args.out / name)])
        print(f"   exit {code} in {time.perf_counter() - t0:.1f} s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
