"""Command line front end: check | prove | render | serve.

Exit codes for `check`: 0 all cases proved, 2 some case unknown,
3 some case failed, 1 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .calculus import (
    CalculusParseError,
    CalculusSpec,
    parse_calculus,
    parse_goal,
)
from .engine import bounded_search
from .latex import RenderOptions, render_calculus, render_proof, wrap_document
from .meta import (
    check_cut_elimination,
    check_identity_expansion,
    check_invertibility,
    check_permutability,
    check_weakening_admissibility,
)
from .report import report_to_json, report_to_tex


def _load(path: str) -> CalculusSpec:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"{path}: no such calculus file")
    return parse_calculus(p.read_text(encoding="utf-8"))


def _run_check(args) -> int:
    spec = _load(args.calculus)
    prop = args.property
    kwargs = {}
    if args.depth is not None:
        kwargs["depth_bound"] = args.depth
    if prop == "identity":
        report = check_identity_expansion(spec, **kwargs)
    elif prop == "weakening":
        report = check_weakening_admissibility(spec)
    elif prop == "invert":
        if not args.rule:
            print("--rule is required for --property invert",
                  file=sys.stderr)
            return 1
        report = check_invertibility(spec, args.rule, **kwargs)
    elif prop == "permute":
        if not (args.rule_up and args.rule_down):
            print("--rule-up and --rule-down are required for"
                  " --property permute", file=sys.stderr)
            return 1
        report = check_permutability(spec, args.rule_up, args.rule_down,
                                     **kwargs)
    else:
        rule = args.rule or next(
            (r.name for r in spec.rules if r.kind == "cut"), None)
        if rule is None:
            print("no cut rule found; name one with --rule",
                  file=sys.stderr)
            return 1
        report = check_cut_elimination(spec, rule, **kwargs)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report_to_json(report, spec),
                                     encoding="utf-8")
    (out / "report.tex").write_text(
        report_to_tex(report, spec, full_document=args.full_doc),
        encoding="utf-8")
    s = report.summary
    print(f"{report.property} on {report.calculus}: {s['proved']} proved,"
          f" {s['unknown']} unknown, {s['failed']} failed"
          f" -> {out / 'report.json'}")
    for c in report.cases:
        print(f"  [{c.status:7s}] {c.case_id}")
    if s["failed"]:
        return 3
    if s["unknown"]:
        return 2
    return 0


def _run_prove(args) -> int:
    spec = _load(args.calculus)
    goal = parse_goal(args.goal, spec)
    tree = bounded_search(spec, goal, args.depth if args.depth else 6)
    if tree is None:
        print("no proof found within the depth bound")
        return 2
    latex = render_proof(tree, spec)
    if args.out:
        Path(args.out).write_text(
            wrap_document(f"\\[ {latex} \\]\n") if args.full_doc
            else latex + "\n", encoding="utf-8")
        print(f"proof written to {args.out}")
    else:
        print(latex)
    return 0


def _run_render(args) -> int:
    spec = _load(args.calculus)
    body = render_calculus(spec)
    text = wrap_document(body) if args.full_doc else body
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"rules written to {args.out}")
    else:
        print(text)
    return 0


def _run_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port or int(os.environ.get("SEQUITUR_PORT", "8037"))
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sequitur",
        description="sequent-calculus workbench: build proofs and check"
                    " meta-properties")
    sub = ap.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a meta-property checker")
    check.add_argument("calculus", help="path to a .cal file")
    check.add_argument("--property", required=True,
                       choices=["identity", "weakening", "invert",
                                "permute", "cut"])
    check.add_argument("--rule")
    check.add_argument("--rule-up", dest="rule_up")
    check.add_argument("--rule-down", dest="rule_down")
    check.add_argument("--depth", type=int)
    check.add_argument("--out", default="reports")
    check.add_argument("--full-doc", action="store_true")

    prove = sub.add_parser("prove", help="bounded proof search for a goal")
    prove.add_argument("calculus")
    prove.add_argument("--goal", required=True)
    prove.add_argument("--depth", type=int)
    prove.add_argument("--out")
    prove.add_argument("--full-doc", action="store_true")

    render = sub.add_parser("render", help="render the rules to LaTeX")
    render.add_argument("calculus")
    render.add_argument("--out")
    render.add_argument("--full-doc", action="store_true")

    serve = sub.add_parser("serve", help="run the JSON API server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _run_check(args)
        if args.command == "prove":
            return _run_prove(args)
        if args.command == "render":
            return _run_render(args)
        return _run_serve(args)
    except FileNotFoundError as e:
        print(str(e), file=sys.stderr)
        return 1
    except CalculusParseError as e:
        for d in e.diagnostics:
            print(str(d), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
