"""Command-line interface.

Exit codes: 0 all checks passed / evaluation done; 1 an identity check
failed; 2 usage or configuration error; 3 coefficient extraction failed on
the supplied input (ResidueError).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, serialize
from .checks import CheckConfig, check_names, run_check
from .groupoid import bracket
from .forms import eval_form
from .operators import d_contour, d_plus, d_times, mc_defect
from .weil import GeneratorContext, ResidueError

OPS = ("dplus", "dtimes", "dcontour", "mcdefect", "bracket")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weilforms",
        description="Exact randomized verification of groupoid coboundary identities.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the named check suites")
    verify.add_argument("--suite", default="all", help="check name or 'all'")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--trials", type=int, default=None)
    verify.add_argument("--base-dim", type=int, default=None)
    verify.add_argument("--fiber-dim", type=int, default=None)
    verify.add_argument(
        "--rep", default=None, help="restrict to one representation kind"
    )
    verify.add_argument("--groupoid", default=None, help="restrict to one groupoid kind")
    verify.add_argument("--output", default=None, help="write the JSON report here")
    verify.add_argument("--config", default=None, help="TOML config file (flags win)")

    evaluate = sub.add_parser("eval", help="evaluate one operator on a stored instance")
    evaluate.add_argument("--op", required=True, choices=OPS)
    evaluate.add_argument("--input", required=True, help="JSON or TOML instance file")

    report = sub.add_parser("report", help="render a JSON report as a text table")
    report.add_argument("--input", required=True, help="JSON report file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "eval":
        return _cmd_eval(args)
    return _cmd_report(args)


def _cmd_verify(args) -> int:
    file_values = {}
    if args.config:
        try:
            doc = serialize.load_document(args.config)
        except Exception as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        file_values = doc.get("verify", doc)

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return file_values.get(key, default)

    suite = pick(None if args.suite == "all" else args.suite, "suite", "all")
    try:
        cfg = CheckConfig(
            seed=int(pick(args.seed, "seed", 42)),
            trials=int(pick(args.trials, "trials", 50)),
            base_dim=int(pick(args.base_dim, "base_dim", 2)),
            fiber_dim=int(pick(args.fiber_dim, "fiber_dim", 2)),
            representation=pick(args.rep, "rep", None),
            groupoid=pick(args.groupoid, "groupoid", None),
        )
        cfg.validate()
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    names = check_names()
    if suite != "all":
        if suite not in names:
            print(
                f"error: unknown suite {suite!r}; known: {', '.join(names)}",
                file=sys.stderr,
            )
            return 2
        names = (suite,)

    reports = []
    for name in names:
        try:
            report = run_check(name, cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        reports.append(report)
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{status} {report.name:<16} trials={report.trials:<5} "
            f"failures={len(report.failures):<3} millis={report.millis}"
        )

    document = serialize.report_to_document(__version__, cfg.to_payload(), reports)
    if args.output:
        Path(args.output).write_text(serialize.dump_json(document), encoding="utf-8")
        print(f"report written to {args.output}")
    passed = all(r.passed for r in reports)
    print("suite:", "PASS" if passed else "FAIL")
    return 0 if passed else 1


def _cmd_eval(args) -> int:
    try:
        doc = serialize.load_document(args.input)
    except Exception as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    ctx = GeneratorContext()
    try:
        if args.op == "bracket":
            tangents = doc["tangents"]
            t1 = serialize.tangent_from_payload(tangents[0], ctx)
            t2 = serialize.tangent_from_payload(tangents[1], ctx)
            result = bracket(t1, t2).matrix
        else:
            form = serialize.form_from_payload(doc["form"])
            rep = serialize.representation_from_payload(
                doc["representation"], form.base_dim
            )
            cube = serialize.microcube_from_payload(doc["microcube"], ctx)
            if args.op == "dplus":
                result = eval_form(d_plus(form, rep), cube)
            elif args.op == "dtimes":
                result = eval_form(d_times(form, rep), cube)
            elif args.op == "dcontour":
                result = eval_form(d_contour(form, rep), cube)
            else:
                result = mc_defect(form, rep, cube)
    except ResidueError as exc:
        print(f"residue error: {exc}", file=sys.stderr)
        return 3
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        print(f"error: invalid instance: {exc}", file=sys.stderr)
        return 2
    for row in result.rows:
        print("\t".join(str(entry) for entry in row))
    return 0


def _cmd_report(args) -> int:
    try:
        doc = serialize.load_document(args.input)
        checks = doc["checks"]
        rows = [
            (
                item["check"],
                str(item["trials"]),
                str(len(item["failures"])),
                str(item["millis"]),
                "PASS" if not item["failures"] else "FAIL",
            )
            for item in checks
        ]
    except Exception as exc:
        print(f"error: malformed report: {exc}", file=sys.stderr)
        return 2
    header = ("check", "trials", "failures", "millis", "status")
    widths = [
        max(len(header[c]), *(len(r[c]) for r in rows)) if rows else len(header[c])
        for c in range(5)
    ]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    print(
        f"version {doc.get('version', '?')}  overall:",
        "PASS" if doc.get("pass") else "FAIL",
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
