"""Report serialization: JSON wire shape and LaTeX documents."""

from __future__ import annotations

import json
from typing import Optional

from .calculus import CalculusSpec
from .engine import ProofTree
from .latex import (
    DEFAULT_OPTIONS,
    RenderOptions,
    render_proof,
    render_sequent,
    wrap_document,
)
from .meta import CaseResult, CheckReport, Witness
from .subst import Substitution
from .terms import ContextExpr, Sequent


def tree_to_dict(tree: ProofTree, spec: CalculusSpec,
                 opts: RenderOptions = DEFAULT_OPTIONS,
                 goal_ids: Optional[dict[tuple, str]] = None,
                 path: tuple = ()) -> dict:
    out = {
        "sequent": render_sequent(tree.sequent, spec, opts),
        "rule": tree.rule,
        "status": tree.status,
        "accepted": tree.accepted,
        "children": [tree_to_dict(c, spec, opts, goal_ids, path + (i,))
                     for i, c in enumerate(tree.children)],
    }
    if goal_ids is not None:
        out["goalId"] = goal_ids.get(path)
    return out


def _witness_to_dict(w: Witness, spec: CalculusSpec,
                     opts: RenderOptions) -> dict:
    out: dict = {"kind": w.kind}
    if w.tree is not None:
        out["tree"] = tree_to_dict(w.tree, spec, opts)
        out["latex"] = render_proof(w.tree, spec, opts)
    if w.before is not None:
        out["before"] = tree_to_dict(w.before, spec, opts)
        out["beforeLatex"] = render_proof(w.before, spec, opts)
    if w.after is not None:
        out["after"] = tree_to_dict(w.after, spec, opts)
        out["afterLatex"] = render_proof(w.after, spec, opts)
    return out


def report_to_dict(report: CheckReport, spec: CalculusSpec,
                   opts: RenderOptions = DEFAULT_OPTIONS) -> dict:
    """Lossless JSON mirror of a CheckReport with LaTeX attached."""
    return {
        "property": report.property,
        "calculus": report.calculus,
        "parameters": dict(report.parameters),
        "summary": report.summary,
        "notes": list(report.notes),
        "cases": [
            {
                "id": c.case_id,
                "description": c.description,
                "status": c.status,
                "notes": list(c.notes),
                "witnesses": [_witness_to_dict(w, spec, opts)
                              for w in c.witnesses],
            }
            for c in report.cases
        ],
    }


def report_to_json(report: CheckReport, spec: CalculusSpec,
                   opts: RenderOptions = DEFAULT_OPTIONS) -> str:
    return json.dumps(report_to_dict(report, spec, opts),
                      indent=2, ensure_ascii=False) + "\n"


def report_to_tex(report: CheckReport, spec: CalculusSpec,
                  opts: RenderOptions = DEFAULT_OPTIONS,
                  full_document: bool = False) -> str:
    lines = [f"\\section{{{report.property} check for"
             f" \\texttt{{{report.calculus}}}}}"]
    s = report.summary
    lines.append(f"proved {s['proved']}, unknown {s['unknown']},"
                 f" failed {s['failed']}.")
    for note in report.notes:
        lines.append(f"% {note}")
    for c in report.cases:
        lines.append(f"\\subsection{{{c.case_id} [{c.status}]}}")
        lines.append(f"% {c.description}")
        for note in c.notes:
            lines.append(f"% {note}")
        for w in c.witnesses:
            if w.tree is not None:
                lines.append(f"\\[ {render_proof(w.tree, spec, opts)} \\]")
            if w.before is not None:
                lines.append("before:")
                lines.append(f"\\[ {render_proof(w.before, spec, opts)} \\]")
            if w.after is not None:
                lines.append("after:")
                lines.append(f"\\[ {render_proof(w.after, spec, opts)} \\]")
    body = "\n".join(lines) + "\n"
    return wrap_document(body) if full_document else body
