"""Run and verify every scenario under scenarios/, printing one line each."""
import argparse
import sys
from pathlib import Path

from folnerlab.cli import main

ROOT = Path(__file__).resolve().parents[1]


def run(out_root: Path) -> int:
    worst = 0
    for sc in sorted((ROOT / "scenarios").glob("*.json")):
        out = out_root / sc.stem
        code = main(["run", str(sc), "--out", str(out)])
        if code == 0:
            code = main(["verify", str(out / "report.json")])
        print(f"{sc.stem}: exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="out")
    sys.exit(run(Path(p.parse_args().out)))
