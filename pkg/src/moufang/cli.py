"""Command line front end.

Exit codes: 0 success, 1 invalid input or failed validation, 2 a
counterexample was found, 3 the (sco) search was inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify as V
from .action import action, parse_word
from .chambers import INCONCLUSIVE, SIMPLY_CONNECTED, ChamberSystem, co_check, sco_check
from .errors import IOFailure, MoufangError
from .foundation import DATA, load, validate

OK, INVALID, COUNTEREXAMPLE, UNDECIDED = 0, 1, 2, 3


def _load(path):
    p = Path(path)
    if not p.exists():
        alt = DATA / (path if path.endswith(".json") else path + ".json")
        if alt.exists():
            p = alt
    try:
        return load(p)
    except OSError as e:
        raise IOFailure(f"cannot read {path}: {e.strerror}") from None


def _emit(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _pair(text, n):
    parts = tuple(x.strip() for x in text.split(","))
    if len(parts) != n:
        raise MoufangError(f"expected {n} comma-separated generators, got {text!r}")
    return parts


def cmd_check(args):
    spec = _load(args.file)
    rep = validate(spec)
    cs = ChamberSystem(spec, check=False)
    from .chambers import check_realisable

    real = check_realisable(spec, cs.blueprint)
    _emit({"valid": rep.ok, "checks": rep.checks, **real.to_dict()})
    return OK if real.realisable else INVALID


def cmd_realize(args):
    cs = ChamberSystem(_load(args.file), max_len=args.max_len)
    chambers = cs.enumerate(args.max_len)
    if args.out:
        with open(args.out, "w") as fh:
            cs.dump_jsonl(chambers, fh)
        _emit({"count": len(chambers), "out": args.out})
    else:
        cs.dump_jsonl(chambers, sys.stdout)
    return OK


def cmd_act(args):
    cs = ChamberSystem(_load(args.file), max_len=args.max_len)
    c = cs.parse_chamber(args.chamber) if args.chamber else cs.base()
    res = action(cs).omega(parse_word(args.word), c, args.max_len)
    _emit(res.to_dict())
    return OK


def cmd_verify(args):
    cs = ChamberSystem(_load(args.file), max_len=args.max_len)
    suites = list(V.SUITES) if args.suite == "all" else [args.suite]
    out = {}
    bad = False
    for name in suites:
        rep = V.SUITES[name](cs, args.max_len, threads=args.threads)
        out[name] = rep.to_dict()
        bad = bad or not rep.ok
    _emit(out if len(suites) > 1 else out[suites[0]])
    return COUNTEREXAMPLE if bad else OK


def cmd_co(args):
    cs = ChamberSystem(_load(args.file))
    rep = co_check(cs, _pair(args.edge, 2))
    _emit(rep)
    return OK if rep["connected"] else COUNTEREXAMPLE


def cmd_sco(args):
    cs = ChamberSystem(_load(args.file))
    rep = sco_check(cs, _pair(args.triple, 3), bound=args.bound)
    _emit(rep)
    if rep["verdict"] == SIMPLY_CONNECTED:
        return OK
    return UNDECIDED if rep["verdict"] == INCONCLUSIVE else COUNTEREXAMPLE


def build_parser():
    p = argparse.ArgumentParser(prog="moufang", description="Buildings from Moufang foundations.")
    p.add_argument("--threads", type=int, default=1, help="worker threads for verifiers")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="validate a foundation and test realisability")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("realize", help="dump chambers as JSON Lines")
    c.add_argument("file")
    c.add_argument("--max-len", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_realize)

    c = sub.add_parser("act", help="apply a generator word to a chamber")
    c.add_argument("file")
    c.add_argument("--word", required=True, help='e.g. "u:s:1 n:t ninv:s h:s:1:2"')
    c.add_argument("--chamber", help='e.g. \'{"type":["s"],"labels":[0]}\'; default: base chamber')
    c.add_argument("--max-len", type=int)
    c.set_defaults(func=cmd_act)

    c = sub.add_parser("verify", help="run relation and RGD verifiers")
    c.add_argument("file")
    c.add_argument("--max-len", type=int)
    c.add_argument("--suite", choices=[*V.SUITES, "all"], default="all")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("co", help="condition (co) on a rank-2 residue")
    c.add_argument("file")
    c.add_argument("--edge", required=True, help="s,t")
    c.set_defaults(func=cmd_co)

    c = sub.add_parser("sco", help="condition (sco) on a rank-3 residue (best effort)")
    c.add_argument("file")
    c.add_argument("--triple", required=True, help="r,s,t")
    c.add_argument("--bound", type=int, default=10 ** 6)
    c.set_defaults(func=cmd_sco)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MoufangError as e:
        _emit({"error": e.code, "message": str(e), **{k: v for k, v in e.details.items()
                                                       if isinstance(v, (str, int, list, dict))}},
              sys.stderr)
        return INVALID
    except json.JSONDecodeError as e:
        _emit({"error": "SCHEMA_ERROR", "message": f"line {e.lineno} column {e.colno}: {e.msg}"}, sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
