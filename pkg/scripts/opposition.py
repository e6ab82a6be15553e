"""Conditions (co) and (sco): opposition graphs of rank-2 buildings and a rank-3 residue."""

import argparse

from moufang.chambers import ChamberSystem, sco_check
from moufang.foundation import bundled
from moufang.rank2 import Rank2Descriptor, opposition_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sco", default="a3_f2", help="bundled rank-3 foundation for the (sco) attempt")
    ap.add_argument("--bound", type=int, default=10 ** 6)
    args = ap.parse_args()
    for kind in ("A1xA1", "A2", "B2"):
        for q in (2, 3, 4, 5):
            n, conn = opposition_graph(Rank2Descriptor(kind, q, ("s", "t"), "s" if kind == "B2" else None))
            print(f"{kind:6} q={q}: {n:5d} opposite chambers, connected={conn}")
    cs = ChamberSystem(bundled(args.sco))
    print(sco_check(cs, cs.W.generators[:3], bound=args.bound))


if __name__ == "__main__":
    main()
