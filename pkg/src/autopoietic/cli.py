"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad input.

Examples::

    autopoietic hochschild --group cyclic:2 --ring Z --variant ap --max-degree 4
    autopoietic simplicial --model nerve --input inputs/z2_chain.json --max-degree 3
    autopoietic amalgam --input inputs/z2_chain.json --ring Z --max-degree 3
    autopoietic check --group cyclic:3 --ring Z/3 --trials 100 --seed 42
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from .based_algebra import (AmalgamCategory, FiniteGroup, FinitePoset, InvalidStructure, amalgam_algebra,
                            amalgam_from_spec, group_from_spec, group_ring, poset_algebra, poset_from_spec)
from .coeff import CoefficientRing, CohomologyGroup
from .engine import (DEFAULT_COCHAIN_LIMIT, DegreeCapExceeded, construction_ring, hochschild_cohomology,
                     simplicial_cohomology, verify_amalgam_theorem, verify_einfty_identities,
                     verify_splitting)
from .hochschild import NotAmalgam, NotSplittable, NotSubcomplex, Variant
from .simplicial import bar, cyclic_bar, cyclic_bar_unit, nerve


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs

def parse_group_flag(text: str) -> FiniteGroup:
    """``cyclic:N`` or ``product:N,M,...`` (product of cyclic groups)."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "cyclic":
            return FiniteGroup.cyclic(int(arg))
        if kind == "product":
            return group_from_spec({"product": [{"cyclic": int(n)} for n in arg.split(",")]})
    except ValueError as exc:
        raise InputError(f"--group {text}: {exc}") from exc
    raise InputError(f"--group {text}: expected cyclic:N or product:N,M,...")


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def classify(spec) -> tuple[str, object]:
    """Turn a JSON document into ``("group", G)``, ``("poset", P)`` or ``("amalgam", C)``."""
    if not isinstance(spec, dict):
        raise InputError("input must be a JSON object")
    for key in ("group", "poset", "amalgam"):
        if key in spec and len(spec) == 1:
            return classify_as(key, spec[key])
    if "groups" in spec or ("poset" in spec and len(spec) <= 2):
        return classify_as("amalgam", spec)
    if "size" in spec:
        return classify_as("poset", spec)
    return classify_as("group", spec)


def classify_as(kind: str, spec):
    try:
        if kind == "group":
            return kind, group_from_spec(spec)
        if kind == "poset":
            return kind, poset_from_spec(spec)
        return kind, amalgam_from_spec(spec)
    except (InvalidStructure, TypeError, ValueError) as exc:
        raise InputError(f"invalid {kind}: {exc}") from exc


def read_structure(args) -> tuple[str, object]:
    if args.input and args.group:
        raise InputError("use either --input or --group, not both")
    if args.group:
        return "group", parse_group_flag(args.group)
    if args.input:
        return classify(load_json(args.input))
    raise InputError("an input is required: --input FILE or --group cyclic:N")


def as_amalgam(kind: str, obj) -> AmalgamCategory:
    if kind == "amalgam":
        return obj
    if kind == "poset":
        return AmalgamCategory(obj, tuple(FiniteGroup.trivial() for _ in range(obj.size)))
    return AmalgamCategory(FinitePoset.chain(1), (obj,))


def as_group(kind: str, obj) -> FiniteGroup:
    if kind != "group":
        raise InputError(f"this command needs a group, got a {kind}")
    return obj


def algebra_of(kind: str, obj, ring: CoefficientRing):
    k = construction_ring(ring)
    if kind == "group":
        return group_ring(obj, k)
    if kind == "poset":
        return poset_algebra(obj, k)
    return amalgam_algebra(obj, k)


# ---------------------------------------------------------------------------
# rendering

def render_table(title: str, groups: list[CohomologyGroup], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"table": title, "degrees": [dict(degree=n, **g.to_dict()) for n, g in enumerate(groups)]},
                          indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "free_rank", "torsion"])
        for n, g in enumerate(groups):
            w.writerow([n, g.free_rank, ";".join(map(str, g.torsion))])
        return buf.getvalue().rstrip("\n")
    lines = [title]
    lines += [f"H^{n} = {g}" for n, g in enumerate(groups)]
    return "\n".join(lines)


def _group_text(d: dict, ring: CoefficientRing) -> str:
    return str(CohomologyGroup(d["free"], tuple(d["torsion"]), ring))


def render_report(report: dict, fmt: str, ring: Optional[CoefficientRing] = None) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    ring = ring or CoefficientRing.integers()
    checks = report.get("checks")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if checks is not None:
            w.writerow(["name", "trials", "passed", "pass", "informational"])
            for c in checks:
                w.writerow([c["name"], c["trials"], c["passed"], c["pass"], c["informational"]])
        else:
            w.writerow(["degree", "lhs_free", "lhs_torsion", "rhs_free", "rhs_torsion", "match"])
            for r in report["per_degree"]:
                w.writerow([r["degree"], r["lhs"]["free"], ";".join(map(str, r["lhs"]["torsion"])),
                            r["rhs"]["free"], ";".join(map(str, r["rhs"]["torsion"])), r["match"]])
        return buf.getvalue().rstrip("\n")
    lines = [f"{report['check']}: {'PASS' if report['pass'] else 'FAIL'}"]
    if checks is not None:
        for c in checks:
            tag = " (informational)" if c["informational"] else ""
            lines.append(f"  {c['name']}: {c['passed']}/{c['trials']}{tag}")
    for r in report["per_degree"]:
        mark = "ok" if r["match"] else "MISMATCH"
        lines.append(f"  n={r['degree']}: {_group_text(r['lhs'], ring)} | {_group_text(r['rhs'], ring)}  {mark}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands

def cmd_hochschild(args) -> tuple[str, int]:
    kind, obj = read_structure(args)
    variant = Variant(args.variant)
    A = algebra_of(kind, obj, args.ring)
    groups = hochschild_cohomology(A, variant, args.max_degree, args.ring, args.degree_cap, args.max_cochains)
    return render_table(f"HH^* of the {kind} algebra over {args.ring} ({variant.value} complex)", groups,
                        args.format), 0


def cmd_simplicial(args) -> tuple[str, int]:
    kind, obj = read_structure(args)
    N = args.max_degree
    _guard_simplicial(args, kind, obj)
    if args.model == "nerve":
        X = nerve(as_amalgam(kind, obj), N)
    else:
        G = as_group(kind, obj)
        X = {"bar": bar, "cyclic": cyclic_bar, "cyclic-unit": cyclic_bar_unit}[args.model](G, N)
    groups = simplicial_cohomology(X, args.ring, N)
    return render_table(f"H^*({X.name}; {args.ring})", groups, args.format), 0


def _guard_simplicial(args, kind, obj):
    if args.model == "nerve":
        C = as_amalgam(kind, obj)
        width = C.num_morphisms
    else:
        width = as_group(kind, obj).order
    extra = 1 if args.model in ("cyclic", "cyclic-unit") else 0  # cyclic models use G^(n+1)
    size = width ** (args.max_degree + extra)
    if size > args.max_cochains:
        raise DegreeCapExceeded(f"{size} simplices in degree {args.max_degree} exceeds limit {args.max_cochains}")


def _report_exit(report) -> int:
    return 0 if report["pass"] else 1


def cmd_split(args) -> tuple[str, int]:
    kind, obj = read_structure(args)
    report = verify_splitting(as_group(kind, obj), args.ring, args.max_degree, args.degree_cap)
    return render_report(report, args.format, args.ring), _report_exit(report)


def cmd_amalgam(args) -> tuple[str, int]:
    kind, obj = read_structure(args)
    report = verify_amalgam_theorem(as_amalgam(kind, obj), args.ring, args.max_degree, args.degree_cap)
    return render_report(report, args.format, args.ring), _report_exit(report)


def cmd_check(args) -> tuple[str, int]:
    kind, obj = read_structure(args)
    A = {"group": group_ring, "poset": poset_algebra, "amalgam": amalgam_algebra}[kind](obj, args.ring)
    report = verify_einfty_identities(A, args.trials, args.seed, args.max_p)
    return render_report(report, args.format, args.ring), _report_exit(report)


def _ring(text: str) -> CoefficientRing:
    try:
        return CoefficientRing.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autopoietic", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file describing a group, poset or amalgam")
    common.add_argument("--group", help="cyclic:N or product:N,M,...")
    common.add_argument("--ring", type=_ring, default=CoefficientRing.integers(), help="Z, Z/m or Q")
    common.add_argument("--max-degree", type=_positive, default=4,
                        help="number of degrees to report (0 .. N-1)")
    common.add_argument("--degree-cap", type=int, default=None, help="override the default degree cap")
    common.add_argument("--max-cochains", type=_positive, default=DEFAULT_COCHAIN_LIMIT,
                        help="largest cochain group rank allowed")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("hochschild", parents=[common], help="Hochschild cohomology table")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="full")
    p.set_defaults(func=cmd_hochschild)

    p = sub.add_parser("simplicial", parents=[common], help="simplicial cohomology table")
    p.add_argument("--model", choices=["bar", "cyclic", "cyclic-unit", "nerve"], default="bar")
    p.set_defaults(func=cmd_simplicial)

    p = sub.add_parser("split", parents=[common], help="compare Full with AP + NP")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("amalgam", parents=[common], help="compare HH of an amalgam with nerve + NP parts")
    p.set_defaults(func=cmd_amalgam)

    p = sub.add_parser("check", parents=[common], help="randomized cochain identities")
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-p", type=int, default=3, help="largest cochain degree drawn")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        text, code = args.func(args)
    except (InputError, InvalidStructure, DegreeCapExceeded, NotAmalgam, NotSplittable, NotSubcomplex) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
