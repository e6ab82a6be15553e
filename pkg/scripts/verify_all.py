"""Run every verifier suite on the bundled foundations and print a summary table."""

import argparse
import json
import time

from moufang import verify as V
from moufang.chambers import ChamberSystem
from moufang.foundation import bundled


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["a2_f2", "b2_f2", "a3_f2", "b3_f2", "a3_f3"])
    ap.add_argument("--max-len", type=int, default=None)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="dump full reports")
    args = ap.parse_args()
    full = {}
    print(f"{'foundation':12} {'suite':6} {'checked':>8} {'skipped':>8} {'unsupp.':>8} {'fail':>5} {'sec':>6}")
    for name in args.names:
        cs = ChamberSystem(bundled(name))
        L = args.max_len if args.max_len is not None or cs.W.is_spherical() else 4
        for suite, fn in V.SUITES.items():
            t0 = time.perf_counter()
            rep = fn(cs, L, threads=args.threads)
            full[f"{name}/{suite}"] = rep.to_dict()
            print(f"{name:12} {suite:6} {rep.checked:8d} {rep.skipped:8d} {rep.unsupported:8d} "
                  f"{len(rep.failures):5d} {time.perf_counter() - t0:6.1f}")
    if args.json:
        print(json.dumps(full, indent=2))


if __name__ == "__main__":
    main()
