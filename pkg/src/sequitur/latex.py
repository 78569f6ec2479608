"""Deterministic LaTeX rendering of formulas, sequents, rules, proofs.

Output is byte-stable for fixed input and options.  The default macro
style is `\\infer` (proof.sty); bussproofs is available as an option.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .calculus import CalculusSpec, RuleDecl
from .engine import ProofTree
from .terms import (
    App,
    Atom,
    AtomVar,
    ConnectiveTable,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    Sequent,
    ctx_token_guard,
    is_ctx_token,
    CTX_TOKEN_PREFIX,
)


@dataclass(frozen=True)
class RenderOptions:
    macro_style: str = "infer"  # "infer" | "bussproofs"
    zone_separator: str = ";"
    turnstile: str = "\\vdash"


DEFAULT_OPTIONS = RenderOptions()

_GREEK_BASE = {"G": "\\Gamma", "D": "\\Delta"}


def _var_name_latex(name: str) -> str:
    """Context-variable names: G -> Gamma, D2 -> Delta_2, _X1 -> Xi_1."""
    if name.startswith("_X"):
        digits = "".join(ch for ch in name[2:] if ch.isdigit())
        return f"\\Xi_{{{digits}}}" if digits else "\\Xi"
    base = _GREEK_BASE.get(name[0], None)
    if base is None:
        return f"\\mathit{{{name}}}"
    rest = name[1:]
    m = re.match(r"([A-Za-z0-9_]*)((?:')*)$", rest)
    sub, primes = (m.group(1), m.group(2)) if m else (rest, "")
    out = base
    if sub:
        out += f"_{{{sub}}}"
    return out + primes


def _leaf_name_latex(name: str) -> str:
    """Atom / frozen-variable names, with subscripted digits."""
    m = re.match(r"([A-Za-z]+)([0-9]*)((?:')*)$", name)
    if not m:
        return f"\\mathit{{{name}}}"
    base, digits, primes = m.groups()
    out = base if len(base) == 1 else f"\\mathit{{{base}}}"
    if digits:
        out += f"_{{{digits}}}"
    return out + primes


def _guard_display(guard: Optional[str], body: str,
                   table: Optional[ConnectiveTable]) -> str:
    if guard is None:
        return body
    if table is not None and guard in table:
        return table[guard].display.replace("#1", body)
    return f"\\mathsf{{{guard}}}\\, {body}"


def render_ctx_var(v: CtxVar, table: Optional[ConnectiveTable] = None) -> str:
    return _guard_display(v.guard, _var_name_latex(v.name), table)


def render_formula(f: Formula, opts: RenderOptions = DEFAULT_OPTIONS,
                   table: Optional[ConnectiveTable] = None,
                   parent_prec: int = 0) -> str:
    if isinstance(f, Atom):
        if is_ctx_token(f.name):
            guard = ctx_token_guard(f.name)
            var = f.name[len(CTX_TOKEN_PREFIX):].partition(":")[2]
            return _guard_display(guard, _var_name_latex(var), table)
        name = f.name[1:] if f.name.startswith("_") else f.name
        body = _leaf_name_latex(name)
        return f"{body}^\\bot" if f.neg else body
    if isinstance(f, AtomVar):
        body = _leaf_name_latex(f.name)
        return f"{body}^\\bot" if f.neg else body
    if isinstance(f, FormulaVar):
        body = _leaf_name_latex(f.name)
        return f"{body}^\\bot" if f.dual else body
    if isinstance(f, App):
        c = f.conn
        parts = [render_formula(a, opts, table, c.prec) for a in f.args]
        body = c.display
        for i, part in enumerate(parts, start=1):
            body = body.replace(f"#{i}", part)
        if c.arity >= 1 and c.prec < parent_prec:
            return f"({body})"
        return body
    raise TypeError(repr(f))


def render_context(c: ContextExpr, opts: RenderOptions = DEFAULT_OPTIONS,
                   table: Optional[ConnectiveTable] = None) -> str:
    """Canonical order: context variables first, then formulas by size
    then by rendered text, so multiset equality gives byte equality."""
    parts = [render_ctx_var(v, table) for v in c.vars]
    rendered = sorted(((f.size, render_formula(f, opts, table))
                       for f in c.formulas), key=lambda t: (t[0], t[1]))
    parts += [r for _, r in rendered]
    return ", ".join(parts) if parts else "\\cdot"


def render_sequent(s: Sequent, spec: CalculusSpec,
                   opts: RenderOptions = DEFAULT_OPTIONS) -> str:
    n_ante = len(spec.antecedent_zones)
    parts = [render_context(c, opts, spec.table) for _, c in s.zones]
    sep = f" {opts.zone_separator} " if opts.zone_separator else " "
    left = sep.join(parts[:n_ante])
    right = sep.join(parts[n_ante:])
    if left:
        return f"{left} {opts.turnstile} {right}"
    return f"{opts.turnstile} {right}"


def _rule_label(name: str) -> str:
    return f"\\mathsf{{{name}}}"


def render_proof(tree: ProofTree, spec: CalculusSpec,
                 opts: RenderOptions = DEFAULT_OPTIONS) -> str:
    if opts.macro_style == "bussproofs":
        return _render_bussproofs(tree, spec, opts)
    return _render_infer(tree, spec, opts)


def _render_infer(t: ProofTree, spec: CalculusSpec,
                  opts: RenderOptions) -> str:
    seq = render_sequent(t.sequent, spec, opts)
    if t.status == "open":
        return f"\\deduce{{{seq}}}{{\\vdots}}"
    premises = " & ".join(_render_infer(c, spec, opts) for c in t.children)
    return f"\\infer[{_rule_label(t.rule)}]{{{seq}}}{{{premises}}}"


_BUSS_ARITY = {0: None, 1: "\\UnaryInfC", 2: "\\BinaryInfC",
               3: "\\TrinaryInfC", 4: "\\QuaternaryInfC",
               5: "\\QuinaryInfC"}


def _render_bussproofs(tree: ProofTree, spec: CalculusSpec,
                       opts: RenderOptions) -> str:
    lines: list[str] = []

    def walk(t: ProofTree) -> None:
        seq = render_sequent(t.sequent, spec, opts)
        if t.status == "open":
            lines.append(f"\\AxiomC{{$\\vdots$}}")
            lines.append(f"\\noLine")
            lines.append(f"\\UnaryInfC{{${seq}$}}")
            return
        for c in t.children:
            walk(c)
        if not t.children:
            lines.append("\\AxiomC{}")
            lines.append(f"\\RightLabel{{${_rule_label(t.rule)}$}}")
            lines.append(f"\\UnaryInfC{{${seq}$}}")
            return
        cmd = _BUSS_ARITY.get(len(t.children))
        if cmd is None:
            raise ValueError("bussproofs supports at most 5 premises")
        lines.append(f"\\RightLabel{{${_rule_label(t.rule)}$}}")
        lines.append(f"{cmd}{{${seq}$}}")

    walk(tree)
    return "\\begin{prooftree}\n" + "\n".join(lines) + "\n\\end{prooftree}"


def render_rule(rule: RuleDecl, spec: CalculusSpec,
                opts: RenderOptions = DEFAULT_OPTIONS) -> str:
    concl = render_sequent(rule.conclusion, spec, opts)
    premises = " & ".join(render_sequent(p, spec, opts)
                          for p in rule.premises)
    return f"\\infer[{_rule_label(rule.name)}]{{{concl}}}{{{premises}}}"


def render_calculus(spec: CalculusSpec,
                    opts: RenderOptions = DEFAULT_OPTIONS) -> str:
    lines = [f"% calculus {spec.name}"]
    for r in spec.rules:
        lines.append(f"\\[ {render_rule(r, spec, opts)} \\]")
    return "\n".join(lines) + "\n"


PREAMBLE = """\\documentclass{article}
\\usepackage{proof}
\\usepackage{bussproofs}
\\usepackage{amsmath,amssymb}
\\usepackage{graphicx}
\\providecommand{\\bindnasrepma}{\\mathbin{\\rotatebox[origin=c]{180}{\\&}}}
\\providecommand{\\binampersand}{\\mathbin{\\&}}
"""


def wrap_document(body: str) -> str:
    return PREAMBLE + "\\begin{document}\n" + body + "\n\\end{document}\n"


def check_renderable(text: str, spec: CalculusSpec) -> list[str]:
    """Smoke check used by tests: balanced braces and no macros outside
    the known set plus the calculus's display macros."""
    problems = []
    depth = 0
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                problems.append("unbalanced closing brace")
                break
    if depth > 0:
        problems.append("unbalanced opening brace")
    known = {
        "infer", "deduce", "vdots", "vdash", "cdot", "mathsf", "mathit",
        "mathbf", "mathbin", "Gamma", "Delta", "Xi", "bot", "wedge", "vee",
        "neg", "rightarrow", "square", "otimes", "oplus", "top",
        "bindnasrepma", "binampersand", "begin", "end", "AxiomC",
        "UnaryInfC", "BinaryInfC", "TrinaryInfC", "QuaternaryInfC",
        "QuinaryInfC", "RightLabel", "noLine", "documentclass",
        "usepackage", "providecommand", "rotatebox", "section",
        "subsection", "textbf", "texttt", "item", "quad", "qquad",
    }
    for c in spec.connectives:
        known |= set(re.findall(r"\\([A-Za-z]+)", c.display))
    for m in re.findall(r"\\([A-Za-z]+)", text):
        if m not in known:
            problems.append(f"unknown macro \\{m}")
    return problems
