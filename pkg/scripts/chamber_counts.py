"""Chamber counts of the bundled foundations against the Poincare series sum_w prod q."""

import argparse
import time

from moufang.chambers import ChamberSystem
from moufang.foundation import bundled

NAMES = ["a2_f2", "a2_f5", "b2_f2", "a3_f2", "a3_f3", "b3_f2", "d4tilde_f2"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=4, help="truncation for infinite types")
    args = ap.parse_args()
    print(f"{'foundation':12} {'max_len':>7} {'chambers':>9} {'expected':>9} {'seconds':>8}")
    for name in NAMES:
        t0 = time.perf_counter()
        cs = ChamberSystem(bundled(name), max_len=args.max_len)
        L = cs.W.longest_element().length if cs.W.is_spherical() else args.max_len
        n = len(cs.enumerate(L))
        print(f"{name:12} {L:7d} {n:9d} {cs.count(L):9d} {time.perf_counter() - t0:8.2f}")


if __name__ == "__main__":
    main()
