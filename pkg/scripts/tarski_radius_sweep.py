"""Minimal doubling radius of free-group balls B_k, k = 1..K, inside B_{k+4}."""
import argparse
import time

from folnerlab.space import FreeGroupBall, build_window
from folnerlab.translations import minimal_doubling_radius


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--K", type=int, default=5)
    p.add_argument("--R-max", type=int, default=4)
    args = p.parse_args()
    print("k,carrier,R_star,seconds")
    for k in range(1, args.K + 1):
        w = build_window(FreeGroupBall(2, k + args.R_max))
        C = [i for i, x in enumerate(w.labels) if len(x) <= k]
        t0 = time.perf_counter()
        R, res = minimal_doubling_radius(w, C, args.R_max)
        assert res.certificate is None or res.certificate.verify(w)
        print(f"{k},{len(C)},{R},{time.perf_counter() - t0:.3f}")


if __name__ == "__main__":
    main()
