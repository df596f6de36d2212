"""Command-line front end.

    desco construct --b1 1 --t1 2 --alpha 2 [--kind desco|ccsco|iasco|expanded]
    desco sweep --code code.json --user 2 --out delays.csv
    desco capacity --b1 1 --t1 2 --b2 2 --t2 4
    desco converse --b 1 --t 2 --alpha 2 --t2 4

Every flag can also come from a JSON file given with ``--config`` (keys
are flag names, dashes or underscores). Command-line flags win.
Exit codes: 0 success or certified, 2 not certified, 3 parameter error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .desco import desco_construct
from .gf import DEFAULT_BITS
from .harness import converse_experiment, sweep
from .musco import (
    CertificationError,
    MulticastParams,
    ParameterError,
    capacity,
    ccsco_construct,
    code_from_dict,
    expanded_musco_construct,
    iasco_best_shift,
    iasco_construct,
)
from .sco import ConstructionError

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_PARAMETER = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage, which would read as "not certified"
    def error(self, message):
        raise UsageError(message)


def _dump(obj, out=None) -> None:
    out = out or sys.stdout
    json.dump(obj, out, indent=2)
    out.write("\n")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _contract_json(code) -> dict:
    return {f"user{u}": list(code.contract(u)) for u in (1, 2)}


def cmd_construct(args) -> int:
    m = args.field_bits
    kind = args.kind
    if kind == "expanded":
        given = (args.b1, args.t1, args.alpha)
        if any(v is not None for v in given) and given != (1, 2, 2):
            raise ParameterError("the expansion code exists for --b1 1 --t1 2 --alpha 2 only")
        code = expanded_musco_construct(m)
    else:
        _need(args, "b1", "t1", "alpha")
        if kind == "desco":
            code = desco_construct(args.b1, args.t1, args.alpha, m)
        elif kind == "ccsco":
            t2 = args.t2 if args.t2 is not None else args.alpha * args.t1
            code = ccsco_construct(MulticastParams(args.b1, args.t1, args.alpha * args.b1, t2), m)
        elif args.shift is None:
            code = iasco_best_shift(args.b1, args.t1, args.alpha, m)
        else:
            code = iasco_construct(args.b1, args.t1, args.alpha, args.shift, m)
    d = code.to_dict()
    d["rate"] = [code.rate.numerator, code.rate.denominator]
    d["contract"] = _contract_json(code)
    _dump(d)
    return EXIT_OK


def cmd_sweep(args) -> int:
    _need(args, "code", "user")
    try:
        code = code_from_dict(json.loads(Path(args.code).read_text()))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ParameterError(f"cannot load code from {args.code}: {exc}") from exc
    report = sweep(code, args.user, horizon=args.horizon, workers=args.workers)
    summary = {
        "user": args.user,
        "contract": list(report.contract),
        "certified": report.certified,
        "worst_delay": report.worst_delay,
        "oracle_worst_delay": report.oracle_worst_delay,
        "dominance_violations": report.dominance_violations,
        "scenarios": len(report.scenarios),
        "rate_num": report.rate.numerator,
        "rate_den": report.rate.denominator,
    }
    if args.out:
        Path(args.out).write_text(report.to_csv())
        _dump(summary)
    else:
        sys.stdout.write(report.to_csv())
        _dump(summary, sys.stderr)
    return EXIT_OK if report.certified else EXIT_NOT_CERTIFIED


def cmd_capacity(args) -> int:
    _need(args, "b1", "t1", "b2", "t2")
    ans = capacity(MulticastParams(args.b1, args.t1, args.b2, args.t2))
    _dump({
        "region": ans.region,
        "rate_num": None if ans.rate is None else ans.rate.numerator,
        "rate_den": None if ans.rate is None else ans.rate.denominator,
    })
    return EXIT_OK


def cmd_converse(args) -> int:
    _need(args, "b", "t", "alpha", "t2")
    if not 1 <= args.b <= args.t:
        raise ParameterError("need 1 <= b <= t")
    rep = converse_experiment(args.b, args.t, args.alpha, args.t2, horizon=args.horizon, m=args.field_bits)
    _dump({
        "bound_num": rep.bound.numerator,
        "bound_den": rep.bound.denominator,
        "rate_num": rep.rate.numerator,
        "rate_den": rep.rate.denominator,
        "feasible": rep.feasible,
        "unrecovered": len(rep.unrecovered),
        "checked": rep.checked,
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="desco", description="Diversity-embedded streaming erasure codes.")
    parser.add_argument("--config", help="JSON file of flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and print its JSON descriptor")
    p.add_argument("--b1", type=int)
    p.add_argument("--t1", type=int)
    p.add_argument("--alpha", type=int)
    p.add_argument("--field-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--kind", choices=["desco", "ccsco", "iasco", "expanded"], default="desco")
    p.add_argument("--t2", type=int, help="receiver-2 delay for ccsco (default alpha*t1)")
    p.add_argument("--shift", type=int, help="parity shift for iasco (default: best certified)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sweep", help="exhaustive burst sweep; per-symbol delays as CSV")
    p.add_argument("--code")
    p.add_argument("--user", type=int, choices=[1, 2])
    p.add_argument("--horizon", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("capacity", help="known optimal rate for two receivers")
    for name in ("--b1", "--t1", "--b2", "--t2"):
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("converse", help="rate bound and periodic-channel experiment")
    for name in ("--b", "--t", "--alpha", "--t2", "--horizon"):
        p.add_argument(name, type=int)
    p.add_argument("--field-bits", type=int, default=DEFAULT_BITS)
    p.set_defaults(func=cmd_converse)
    for p in sub.choices.values():
        p.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of flag values")
    return parser


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in config.items()}
    # flags given on the command line override the file
    explicit = vars(parser.parse_args(argv))
    baseline = vars(build_parser().parse_args([args.command]))
    for key, value in defaults.items():
        if key in explicit and explicit[key] == baseline.get(key):
            setattr(args, key, value)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except (UsageError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except (CertificationError, ConstructionError) as exc:
        print(f"not certified: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIED


if __name__ == "__main__":
    sys.exit(main())
