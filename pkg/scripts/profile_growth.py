"""Isoperimetric profiles on Z, Z^2 and a free-group ball, written as CSV.

Amenable windows show ratios shrinking with N; the free group stays above 1.
"""
import argparse
from pathlib import Path

from folnerlab.folner import profile
from folnerlab.space import FreeGroupBall, Grid, build_window

CASES = {
    "z": (Grid((2200,), (-100,)), [10, 100, 1000, 2000]),
    "z2": (Grid((84, 84)), [16, 100, 900, 4900]),
    "f2": (FreeGroupBall(2, 8), [10, 100, 1000]),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--R", type=int, default=1)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--out", default="out/profiles")
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (desc, sizes) in CASES.items():
        prof = profile(build_window(desc), args.R, sizes, args.budget)
        prof.to_csv(out / f"{name}.csv")
        row = ", ".join(f"{e.N}:{float(e.ratio):.4f}" for e in prof.entries if e.ratio is not None)
        print(f"{name}: {row}")


if __name__ == "__main__":
    main()
