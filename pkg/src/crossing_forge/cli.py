"""Command-line front end: ``crossing-forge <command> ...``.

Exit status is 0 on success, 1 for invalid input and 2 when an internal
invariant fails.  Reports are JSON by default, with rationals as ``"p/q"``.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import bounds, configs, discharging, generators
from .errors import CrossingForgeError, InvariantFailure, MapError
from .planemap import CombinatorialMap, is_simple_graph, is_two_connected, validate
from .rational import fmt

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _read_map(path: str | None) -> CombinatorialMap:
    if path in (None, "-"):
        return validate(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return validate(fh.read())


def _cmd_validate(args) -> dict:
    m = _read_map(args.file)
    return {"valid": True, "V": len(m.node_ids), "E": m.segment_count, "F": len(m.faces),
            "n": m.n, "m": m.m}


def _cmd_analyze(args) -> dict:
    m = _read_map(args.file)
    stats = m.stats
    census = Counter(f.label for f in m.faces)
    return {
        "stats": stats.to_dict(),
        "faces": len(m.faces),
        "census": dict(sorted(census.items())),
        "twoConnected": is_two_connected(m),
        "simple": is_simple_graph(m),
        "skeletonConnected": m.skeleton.connected,
        "kPlanar": {str(k): stats.is_k_planar(k) for k in range(0, 5)},
        "minK": stats.max_crossings_per_edge,
    }


def _cmd_detect(args) -> dict:
    m = _read_map(args.file)
    found = configs.detect(m, args.kind)
    return {"kind": configs.ConfigKind.parse(args.kind).value, "count": len(found),
            "instances": [i.to_dict() for i in found]}


def _cmd_discharge(args) -> dict:
    m = _read_map(args.file)
    scheme = discharging.get_scheme(args.scheme)
    report, trace = discharging.discharge(m, scheme)
    out = report.to_dict()
    out["m"] = m.m
    if args.trace:
        out["trace"] = trace.to_dict()
    if args.audit:
        out["preconditions"] = discharging.precondition_audit(m).to_dict()
    return out


def _cmd_bounds(args) -> dict:
    report = bounds.bound_report(args.n, args.m, args.k)
    if args.cls:
        cap = bounds.density_cap(args.cls)
        report["densityCap"] = {**cap.to_dict(), "value": fmt(cap(args.n))}
    return report


def _cmd_peel(args) -> dict:
    return bounds.peel(_read_map(args.file)).to_dict()


def _cmd_generate(args) -> dict | None:
    m = generators.generate(args.family)
    text = m.dumps()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return {"written": args.output, "n": m.n, "m": m.m}
    sys.stdout.write(text + "\n")
    return None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crossing-forge", description="k-planar drawing analysis")
    p.add_argument("--format", choices=("json", "text"), default="json")
    # also accepted after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("file", nargs="?", default="-", help="drawing file, '-' for stdin")
        sp.set_defaults(func=func)
        return sp

    with_file("validate", _cmd_validate, "check a drawing file")
    with_file("analyze", _cmd_analyze, "statistics and face census")
    sp = with_file("detect", _cmd_detect, "find full configurations")
    sp.add_argument("--kind", required=True, type=str.lower, choices=("f25", "f26", "f36"))
    sp = with_file("discharge", _cmd_discharge, "run and verify a discharging scheme")
    sp.add_argument("--scheme", required=True, choices=sorted(discharging.SCHEMES))
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--audit", action="store_true", help="include the precondition audit")
    with_file("peel", _cmd_peel, "peel decomposition lower bound")

    sp = sub.add_parser("bounds", help="crossing-number lower bounds for n and m",
                        parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--class", dest="cls", help="also report this density cap")
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("generate", help="write a built-in drawing", parents=[common])
    sp.add_argument("--family", required=True,
                    help="full:KIND, doubled:KIND, augmented:BASE, optimal:BASE or cycle:P")
    sp.add_argument("-o", "--output")
    sp.add_argument("--seed", type=int, help="reserved; all constructions are deterministic")
    sp.set_defaults(func=_cmd_generate)
    return p


def _text(obj, prefix="") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines += _text(v, f"{prefix}{k}.")
        return lines
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        lines = []
        for i, v in enumerate(obj):
            lines += _text(v, f"{prefix}{i}.")
        return lines
    if isinstance(obj, list):
        obj = " ".join(map(str, obj))
    return [f"{prefix.rstrip('.')}: {obj}"]


def _emit(report: dict, style: str) -> None:
    if style == "text":
        sys.stdout.write("\n".join(_text(report)) + "\n")
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    try:
        report = args.func(args)
    except InvariantFailure as exc:
        _emit({"error": "InvariantFailure", "message": str(exc)}, args.format)
        return EXIT_INVARIANT
    except MapError as exc:
        _emit({"valid": False, **exc.to_dict()}, args.format)
        return EXIT_INPUT
    except (CrossingForgeError, ValueError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format)
        return EXIT_INPUT
    if report is not None:
        _emit(report, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
