"""Batch command line front end.

Exit codes: 0 when a result was computed (whatever the verdict), 2 for input
errors, 3 when a budget or level cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from .cantor import LevelCapExceeded, Word, birkhoff_average, orbit_period
from .diagonal import DiagonalUnitary
from .extend import (
    Extendible,
    check_product_formula,
    decide_extendible,
    invert_check,
    Preimage,
    verify_structural_identity,
)
from .phases import PhaseError, phase_to_json
from .reptrunc import (
    default_window,
    parse_genword,
    verify_certificate,
    verify_identity,
    word_str,
)
from .serialize import (
    SpecError,
    certificate_from_json,
    certificate_to_json,
    load_json,
    obstruction_to_json,
    parse_unitary_spec,
    unitary_csv_rows,
    unitary_to_json,
)
from .sweep import BudgetExceeded, parse_grid, run_sweep

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


class UnsupportedFormat(ValueError):
    pass


# -- inputs --------------------------------------------------------------------


def _read_json(arg: str):
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    text = arg if arg.lstrip().startswith("{") else Path(arg).read_text()
    return load_json(text)


def _resolver(ref: str) -> DiagonalUnitary:
    path, _, name = ref.partition("#")
    obj = load_json(Path(path).read_text())
    if name:
        if name not in obj:
            raise SpecError(f"{path} has no entry {name!r}")
        obj = obj[name]
    return parse_unitary_spec(obj)


# -- commands ------------------------------------------------------------------


def _oracle_summary(cert, window=None) -> dict:
    rel = verify_certificate(cert, window)
    struct = verify_structural_identity(cert)
    return {
        "eq1": {"passed": rel["eq1"].passed, "checked": rel["eq1"].checked,
                "safe_window": list(rel["eq1"].safe_window)},
        "eq2": {"passed": rel["eq2"].passed, "checked": rel["eq2"].checked,
                "safe_window": list(rel["eq2"].safe_window)},
        "structural": {"passed": struct.passed, "checked": struct.checked,
                       "violations": [m for m, _, _ in struct.violations]},
    }


def cmd_decide(args) -> dict:
    d = parse_unitary_spec(_read_json(args.spec))
    res = decide_extendible(d)
    report = {"command": "decide", "input": unitary_to_json(d)}
    if isinstance(res, Extendible):
        report["verdict"] = "extendible"
        report["certificate"] = certificate_to_json(res.certificate)
        report["oracle"] = _oracle_summary(res.certificate, args.window)
    else:
        report["verdict"] = "not_extendible"
        report["obstruction"] = obstruction_to_json(res.obstruction)
    return report


def cmd_checkmap(args) -> dict:
    d = parse_unitary_spec(_read_json(args.spec))
    res = decide_extendible(d)
    report = {"command": "checkmap", "input": unitary_to_json(d)}
    if not isinstance(res, Extendible):
        report["verdict"] = "not_extendible"
        report["obstruction"] = obstruction_to_json(res.obstruction)
        return report
    cert = res.certificate
    product = check_product_formula(d, cert.check.eval_at(0))
    report["verdict"] = "extendible"
    report["check"] = unitary_to_json(cert.check)
    report["jcheck"] = unitary_to_json(cert.jcheck)
    report["check_by_product_formula"] = unitary_to_json(product)
    report["agree"] = product == cert.check
    return report


def cmd_invert(args) -> dict:
    c = parse_unitary_spec(_read_json(args.spec))
    res = invert_check(c)
    report = {"command": "invert", "input": unitary_to_json(c)}
    if isinstance(res, Preimage):
        back = decide_extendible(res.d)
        report["verdict"] = "in_image"
        report["preimage"] = unitary_to_json(res.d)
        report["root"] = phase_to_json(res.root)
        report["roundtrip"] = isinstance(back, Extendible) and back.certificate.check == c
    else:
        report["verdict"] = "not_in_image"
        report["reason"] = res.reason
        report["entry_product"] = phase_to_json(res.entry_product)
    return report


def cmd_verify(args) -> dict:
    cert = certificate_from_json(_read_json(args.cert))
    problems = cert.invariant_violations()
    report = {"command": "verify", "certificate": certificate_to_json(cert),
              "invariants": {"passed": not problems, "violations": problems}}
    report["oracle"] = _oracle_summary(cert, args.window)
    if args.lhs or args.rhs:
        if not (args.lhs and args.rhs):
            raise SpecError("--lhs and --rhs must be given together")
        lhs, rhs = parse_genword(args.lhs, _resolver), parse_genword(args.rhs, _resolver)
        n = args.window or default_window(cert.source.level)
        rep = verify_identity(lhs, rhs, n)
        report["identity"] = {
            "lhs": word_str(lhs), "rhs": word_str(rhs), "passed": rep.passed,
            "checked": rep.checked, "safe_window": list(rep.safe_window),
            "violations": [m for m, _, _ in rep.violations],
        }
    passed = report["invariants"]["passed"] and all(v["passed"] for v in report["oracle"].values())
    if "identity" in report:
        passed = passed and report["identity"]["passed"]
    report["verdict"] = "pass" if passed else "fail"
    return report


def dynamics_stats(level: int, cylinder: Word, steps: int | None = None) -> dict:
    period = orbit_period(level)
    avg = birkhoff_average(level, cylinder)
    out = {
        "command": "dynamics",
        "level": level,
        "cylinder": str(cylinder),
        "period": period,
        "average": [avg.numerator, avg.denominator],
    }
    if steps is not None:
        part = birkhoff_average(level, cylinder, steps)
        out["steps"] = steps
        out["average_over_steps"] = [part.numerator, part.denominator]
    return out


def cmd_dynamics(args) -> dict:
    try:
        cyl = Word.parse(args.cylinder)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return dynamics_stats(args.level, cyl, args.steps)


def cmd_sweep(args) -> dict:
    try:
        order = parse_grid(args.grid)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    try:
        res = run_sweep(args.level, order, args.predicate, args.coboundary,
                        budget=args.budget, workers=args.workers)
    except ValueError as exc:
        if isinstance(exc, (BudgetExceeded, LevelCapExceeded)):
            raise
        raise SpecError(str(exc)) from exc
    return {
        "command": "sweep",
        "level": res.level,
        "grid": f"roots:{res.order}",
        "predicate": res.predicate,
        "coboundary": res.coboundary,
        "candidates": res.candidates,
        "extendible": res.extendible,
        "survivors": [unitary_to_json(d) for d in res.survivors],
    }


# -- output --------------------------------------------------------------------


def _tables(obj, path=""):
    """Yield ``(path, unitary json)`` for every unitary spec nested in a report."""
    if isinstance(obj, dict):
        if set(obj) == {"level", "phases"}:
            yield path, obj
            return
        for key, val in obj.items():
            yield from _tables(val, f"{path}.{key}" if path else key)
    elif isinstance(obj, list):
        for i, val in enumerate(obj):
            yield from _tables(val, f"{path}[{i}]")


def _text_lines(obj, indent=0):
    pad = "  " * indent
    for key, val in obj.items():
        if isinstance(val, dict) and set(val) == {"level", "phases"}:
            d = parse_unitary_spec(val)
            yield f"{pad}{key}: level {d.level}: " + ", ".join(str(p) for p in d.table)
        elif isinstance(val, dict):
            yield f"{pad}{key}:"
            yield from _text_lines(val, indent + 1)
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            yield f"{pad}{key}: {len(val)} item(s)"
            for i, item in enumerate(val):
                yield from _text_lines({f"[{i}]": item}, indent + 1)
        else:
            yield f"{pad}{key}: {val}"


def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["table", "residue", "word", "phase_turn_numerator",
                         "phase_turn_denominator", "angle"])
        for path, spec in _tables(report):
            for row in unitary_csv_rows(parse_unitary_spec(spec)):
                writer.writerow([path, *row])
        return buf.getvalue().encode()
    if fmt == "text":
        return ("\n".join(_text_lines(report)) + "\n").encode()
    raise UnsupportedFormat(f"unsupported format {fmt!r}")


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # output options are accepted before or after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default=argparse.SUPPRESS, help="json (default), csv or text")
    common.add_argument("--output", "-o", default=argparse.SUPPRESS,
                        help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="add elapsed seconds to the report")
    p = argparse.ArgumentParser(prog="q2diag", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("decide", cmd_decide, "decide extendibility and emit a certificate or obstruction"),
        ("checkmap", cmd_checkmap, "compute the check map two ways"),
        ("invert", cmd_invert, "find d with a given check map"),
    ):
        sp = sub.add_parser(name, help=helptext, parents=[common])
        sp.add_argument("spec", help="unitary spec: JSON file or inline JSON")
        sp.add_argument("--window", type=int, default=None)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("verify", help="re-verify a certificate on a window", parents=[common])
    sp.add_argument("cert")
    sp.add_argument("--window", type=int, default=None)
    sp.add_argument("--lhs", help="extra identity to check, e.g. 'S2 U'")
    sp.add_argument("--rhs", help="right-hand side, e.g. 'U U S2'")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dynamics", help="odometer period and Birkhoff averages", parents=[common])
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--cylinder", required=True)
    sp.add_argument("--steps", type=int, default=None)
    sp.set_defaults(func=cmd_dynamics)

    sp = sub.add_parser("sweep", help="exhaustive search over a root-of-unity grid", parents=[common])
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--grid", required=True, help="roots:2^j")
    sp.add_argument("--predicate", required=True)
    sp.add_argument("--coboundary", action="store_true")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)
    return p


def _validate(args) -> None:
    if args.format not in ("json", "csv", "text"):
        raise UnsupportedFormat(f"unsupported format {args.format!r}")
    if getattr(args, "window", None) is not None and args.window < 1:
        raise SpecError("--window must be positive")
    if args.command == "dynamics":
        if args.level < 0 or (args.steps is not None and args.steps < 1):
            raise SpecError("--level must be >= 0 and --steps >= 1")
    if args.command == "sweep" and (args.level < 0 or args.workers < 1):
        raise SpecError("--level must be >= 0 and --workers >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    # the shared option actions carry SUPPRESS defaults, so fill them in here
    for name, default in (("format", "json"), ("output", None), ("timing", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    start = time.perf_counter()
    try:
        _validate(args)
        report = args.func(args)
        if args.timing:
            report["timing_s"] = round(time.perf_counter() - start, 6)
        out = emit_report(report, args.format)
    except (BudgetExceeded, LevelCapExceeded) as exc:
        print(f"q2diag: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpecError, PhaseError, UnsupportedFormat, OSError, ValueError) as exc:
        print(f"q2diag: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        Path(args.output).write_bytes(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
