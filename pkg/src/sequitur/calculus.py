"""The rule-specification language: parsing, validation, printing.

A calculus file is line oriented.  Declarations:

    calculus NAME
    zone NAME antecedent|succedent [weakening] [contraction]
    conn NAME ARITY "LATEX TEMPLATE" [prec N]
    dual NAME NAME
    axiom NAME : (SEQUENT)
    rule NAME : (SEQUENT) ... => (SEQUENT)
    cut NAME : (SEQUENT) (SEQUENT) => (SEQUENT)
    identity NAME

Sequents are written ``(ctx ; ctx |- ctx ; ctx)`` with antecedent zones
left of ``|-`` in declaration order; one-sided calculi start at ``|-``.
Inside rule schemas, identifiers starting with G or D are context
variables, other single uppercase letters are formula variables,
single lowercase letters are atom variables; ``box G`` is a guarded
context variable and ``~x`` is the dual/negation marker.  In concrete
goals every identifier that is not a connective is an atom.
"""

from __future__ import annotations

import importlib.resources
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import (
    App,
    Atom,
    AtomVar,
    Connective,
    ConnectiveTable,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    MissingDualityTable,
    Sequent,
    SequiturError,
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.code}: {self.message}"


class CalculusParseError(SequiturError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


class NotACut(SequiturError):
    pass


@dataclass(frozen=True)
class ZoneDecl:
    name: str
    side: str  # "antecedent" | "succedent"
    weakening: bool = False
    contraction: bool = False


@dataclass(frozen=True)
class RuleDecl:
    name: str
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    kind: str  # "logical" | "structural" | "axiom" | "cut"

    @property
    def principal(self) -> Optional[tuple[str, Formula]]:
        """(zone name, formula) of the unique non-variable conclusion
        formula, if any."""
        found = None
        for zname, ctx in self.conclusion.zones:
            for f in ctx.formulas:
                if isinstance(f, App):
                    if found is not None:
                        return None
                    found = (zname, f)
        return found


@dataclass(frozen=True)
class CutDescriptor:
    rule: str
    cut_var: str
    # one entry per premise: (premise index, zone name, dual occurrence?)
    occurrences: tuple[tuple[int, str, bool], ...]


class CalculusSpec:
    def __init__(self, name: str, zones: tuple[ZoneDecl, ...],
                 connectives: tuple[Connective, ...],
                 rules: tuple[RuleDecl, ...],
                 identity_rule: str, identity_var: str):
        self.name = name
        self.zones = zones
        self.connectives = connectives
        self.table = ConnectiveTable(connectives)
        self.rules = rules
        self._rule_map = {r.name: r for r in rules}
        self.identity_rule = identity_rule
        self.identity_var = identity_var

    def rule(self, name: str) -> RuleDecl:
        return self._rule_map[name]

    def has_rule(self, name: str) -> bool:
        return name in self._rule_map

    @property
    def zone_names(self) -> tuple[str, ...]:
        return tuple(z.name for z in self.zones)

    @property
    def antecedent_zones(self) -> tuple[str, ...]:
        return tuple(z.name for z in self.zones if z.side == "antecedent")

    @property
    def is_one_sided(self) -> bool:
        return not self.antecedent_zones

    def empty_sequent(self) -> Sequent:
        return Sequent(tuple((z.name, ContextExpr()) for z in self.zones))

    def __repr__(self) -> str:
        return (f"CalculusSpec({self.name}: {len(self.zones)} zones,"
                f" {len(self.connectives)} connectives,"
                f" {len(self.rules)} rules)")


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<turnstile>\|-)
  | (?P<arrow>=>)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<punct>[():;,~.·])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _tokenize_line(text: str, line_no: int,
                   diags: list[Diagnostic]) -> list[_Tok]:
    out: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            diags.append(Diagnostic(line_no, pos + 1, "ParseError",
                                    f"unexpected character {text[pos]!r}"))
            return out
        pos = m.end()
        kind = m.lastgroup or ""
        if kind in ("ws", "comment"):
            continue
        value = m.group()
        if kind == "punct":
            kind = {"(": "lparen", ")": "rparen", ":": "colon",
                    ";": "semi", ",": "comma", "~": "tilde",
                    ".": "dot", "·": "dot"}[value]
        out.append(_Tok(kind, value, line_no, m.start() + 1))
    return out


# ---------------------------------------------------------------------------
# formula / sequent parsing
# ---------------------------------------------------------------------------

_CTXVAR_RE = re.compile(r"[GD][A-Za-z0-9_']*$")
_FORMULAVAR_RE = re.compile(r"[A-Z][0-9']*$")
_ATOMVAR_RE = re.compile(r"[a-z][0-9']*$")


class _P:
    """Cursor over a token list with shared diagnostics."""

    def __init__(self, toks: list[_Tok], diags: list[Diagnostic],
                 line: int):
        self.toks = toks
        self.i = 0
        self.diags = diags
        self.line = line

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> Optional[_Tok]:
        t = self.peek()
        if t is not None:
            self.i += 1
        return t

    def expect(self, kind: str) -> Optional[_Tok]:
        t = self.peek()
        if t is None or t.kind != kind:
            where = t.col if t else (self.toks[-1].col + 1 if self.toks else 1)
            got = t.value if t else "end of line"
            self.error(where, "ParseError", f"expected {kind}, got {got}")
            return None
        return self.next()

    def error(self, col: int, code: str, message: str) -> None:
        self.diags.append(Diagnostic(self.line, col, code, message))


class _SequentParser:
    def __init__(self, table: ConnectiveTable, zones: tuple[ZoneDecl, ...],
                 mode: str):
        self.table = table
        self.zones = zones
        self.mode = mode  # "schema" | "ground"

    def parse_sequent(self, p: _P) -> Optional[Sequent]:
        if p.expect("lparen") is None:
            return None
        ante: list[ContextExpr] = []
        succ: list[ContextExpr] = []
        target = ante
        t = p.peek()
        if t is not None and t.kind == "turnstile":
            p.next()
            target = succ
            t = p.peek()
        while t is not None and t.kind != "rparen":
            ctx = self.parse_context(p)
            if ctx is None:
                return None
            target.append(ctx)
            t = p.peek()
            if t is None:
                break
            if t.kind == "semi":
                p.next()
                t = p.peek()
            elif t.kind == "turnstile":
                if target is succ:
                    p.error(t.col, "ParseError", "second turnstile")
                    return None
                p.next()
                target = succ
                t = p.peek()
            elif t.kind != "rparen":
                p.error(t.col, "ParseError",
                        f"unexpected {t.value!r} in sequent")
                return None
        if p.expect("rparen") is None:
            return None
        n_ante = sum(1 for z in self.zones if z.side == "antecedent")
        n_succ = len(self.zones) - n_ante
        # a fully omitted side stands for all-empty zones on that side
        if not ante and n_ante:
            ante = [ContextExpr()] * n_ante
        if not succ and n_succ:
            succ = [ContextExpr()] * n_succ
        if len(ante) != n_ante or len(succ) != n_succ:
            p.error(1, "ParseError",
                    f"expected {n_ante} antecedent and {n_succ} succedent"
                    f" zones, got {len(ante)} and {len(succ)}")
            return None
        contents = ante + succ
        return Sequent(tuple((z.name, c)
                             for z, c in zip(self.zones, contents)))

    def parse_context(self, p: _P) -> Optional[ContextExpr]:
        vars_out: list[CtxVar] = []
        formulas: list[Formula] = []
        t = p.peek()
        if t is not None and t.kind in ("semi", "turnstile", "rparen"):
            return ContextExpr()
        if t is not None and t.kind == "dot":
            p.next()
            return ContextExpr()
        while True:
            item = self.parse_item(p)
            if item is None:
                return None
            if isinstance(item, CtxVar):
                vars_out.append(item)
            else:
                formulas.append(item)
            t = p.peek()
            if t is not None and t.kind == "comma":
                p.next()
                continue
            break
        return ContextExpr(vars_out, formulas)

    def parse_item(self, p: _P):
        # guarded context variable: unary connective followed by a
        # context-variable name
        t = p.peek()
        if self.mode == "schema" and t is not None and t.kind == "ident" \
                and t.value in self.table:
            conn = self.table[t.value]
            nxt = self.toks_ahead(p, 1)
            if conn.arity == 1 and nxt is not None and nxt.kind == "ident" \
                    and self.classify(nxt.value) == "ctx":
                p.next()
                p.next()
                return CtxVar(nxt.value, conn.name)
        if self.mode == "schema" and t is not None and t.kind == "ident" \
                and t.value not in self.table \
                and self.classify(t.value) == "ctx":
            p.next()
            return CtxVar(t.value)
        return self.parse_formula(p, 0)

    @staticmethod
    def toks_ahead(p: _P, k: int) -> Optional[_Tok]:
        j = p.i + k
        return p.toks[j] if j < len(p.toks) else None

    def classify(self, name: str) -> str:
        if name in self.table:
            return "conn"
        if self.mode == "ground":
            return "atom"
        if _CTXVAR_RE.match(name):
            return "ctx"
        if _FORMULAVAR_RE.match(name):
            return "fvar"
        if _ATOMVAR_RE.match(name):
            return "avar"
        return "unknown"

    def parse_formula(self, p: _P, min_prec: int) -> Optional[Formula]:
        left = self.parse_unary(p)
        if left is None:
            return None
        while True:
            t = p.peek()
            if t is None or t.kind != "ident" or t.value not in self.table:
                return left
            conn = self.table[t.value]
            if conn.arity != 2 or conn.prec < min_prec:
                return left
            p.next()
            right = self.parse_formula(p, conn.prec + 1)
            if right is None:
                return None
            left = App(conn, (left, right))

    def parse_unary(self, p: _P) -> Optional[Formula]:
        t = p.next()
        if t is None:
            p.error(1, "ParseError", "expected a formula")
            return None
        if t.kind == "tilde":
            body = self.parse_unary(p)
            if body is None:
                return None
            return self.negate(body, p, t.col)
        if t.kind == "lparen":
            f = self.parse_formula(p, 0)
            if f is None:
                return None
            if p.expect("rparen") is None:
                return None
            return f
        if t.kind != "ident":
            p.error(t.col, "ParseError", f"unexpected {t.value!r}")
            return None
        kind = self.classify(t.value)
        if kind == "conn":
            conn = self.table[t.value]
            if conn.arity == 0:
                return App(conn, ())
            if conn.arity == 1:
                arg = self.parse_unary(p)
                if arg is None:
                    return None
                return App(conn, (arg,))
            p.error(t.col, "ArityMismatch",
                    f"binary connective {t.value} used without arguments")
            return None
        if kind == "atom":
            if not t.value[0].islower():
                p.error(t.col, "ParseError",
                        f"{t.value}: concrete goals use lowercase atoms")
                return None
            return Atom(t.value)
        if kind == "fvar":
            return FormulaVar(t.value)
        if kind == "avar":
            return AtomVar(t.value)
        if kind == "ctx":
            p.error(t.col, "ParseError",
                    f"context variable {t.value} not allowed inside"
                    " a formula")
            return None
        p.error(t.col, "UnknownConnective",
                f"unknown identifier {t.value!r}")
        return None

    def negate(self, f: Formula, p: _P, col: int) -> Optional[Formula]:
        if isinstance(f, Atom):
            return Atom(f.name, not f.neg)
        if isinstance(f, AtomVar):
            return AtomVar(f.name, not f.neg)
        if isinstance(f, FormulaVar):
            return FormulaVar(f.name, not f.dual)
        if isinstance(f, App):
            try:
                return self.table.dual_of(f)
            except MissingDualityTable as e:
                p.error(col, "UnknownConnective", str(e))
                return None
        p.error(col, "ParseError", f"cannot negate {f!r}")
        return None


# ---------------------------------------------------------------------------
# declaration-level parsing
# ---------------------------------------------------------------------------

def parse_calculus(text: str) -> CalculusSpec:
    """Parse and validate a calculus; raises CalculusParseError carrying
    positioned diagnostics on any failure."""
    diags: list[Diagnostic] = []
    name = None
    zones: list[ZoneDecl] = []
    conns: list[Connective] = []
    duals: list[tuple[str, str, int]] = []
    pending_rules: list[tuple[str, str, list[_Tok], int]] = []
    identity_name: Optional[str] = None

    lines = text.splitlines()
    if not text.strip():
        raise CalculusParseError(
            [Diagnostic(1, 1, "ParseError", "empty calculus source")])

    for ln, raw in enumerate(lines, start=1):
        toks = _tokenize_line(raw, ln, diags)
        if not toks:
            continue
        head = toks[0]
        if head.kind != "ident":
            diags.append(Diagnostic(ln, head.col, "ParseError",
                                    f"unexpected {head.value!r}"))
            continue
        kw = head.value
        rest = toks[1:]
        if kw == "calculus":
            if len(rest) == 1 and rest[0].kind == "ident":
                name = rest[0].value
            else:
                diags.append(Diagnostic(ln, head.col, "ParseError",
                                        "calculus NAME"))
        elif kw == "zone":
            _parse_zone(rest, ln, zones, diags)
        elif kw == "conn":
            _parse_conn(rest, ln, conns, diags)
        elif kw == "dual":
            if len(rest) == 2 and all(t.kind == "ident" for t in rest):
                duals.append((rest[0].value, rest[1].value, ln))
            else:
                diags.append(Diagnostic(ln, head.col, "ParseError",
                                        "dual NAME NAME"))
        elif kw in ("rule", "axiom", "cut"):
            if len(rest) >= 2 and rest[0].kind == "ident" \
                    and rest[1].kind == "colon":
                pending_rules.append((kw, rest[0].value, rest[2:], ln))
            else:
                diags.append(Diagnostic(ln, head.col, "ParseError",
                                        f"{kw} NAME : ..."))
        elif kw == "identity":
            if len(rest) == 1 and rest[0].kind == "ident":
                identity_name = rest[0].value
            else:
                diags.append(Diagnostic(ln, head.col, "ParseError",
                                        "identity NAME"))
        else:
            diags.append(Diagnostic(ln, head.col, "ParseError",
                                    f"unknown declaration {kw!r}"))

    if not zones:
        diags.append(Diagnostic(1, 1, "ParseError", "no zones declared"))
    seen_zone = set()
    for z in zones:
        if z.name in seen_zone:
            diags.append(Diagnostic(1, 1, "ParseError",
                                    f"duplicate zone {z.name}"))
        seen_zone.add(z.name)
    succ_seen = False
    for z in zones:
        if z.side == "succedent":
            succ_seen = True
        elif succ_seen:
            diags.append(Diagnostic(1, 1, "ParseError",
                                    "antecedent zones must precede"
                                    " succedent zones"))
            break

    # resolve duals into the connective table
    dual_map: dict[str, str] = {}
    by_name = {c.name: c for c in conns}
    for a, b, ln in duals:
        for x in (a, b):
            if x not in by_name:
                diags.append(Diagnostic(ln, 1, "UnknownConnective",
                                        f"dual declares unknown {x}"))
        if a in by_name and b in by_name:
            dual_map[a] = b
            dual_map[b] = a
    conns = [Connective(c.name, c.arity, c.display, c.prec,
                        dual_map.get(c.name)) for c in conns]

    if diags:
        raise CalculusParseError(diags)

    table = ConnectiveTable(conns)
    zone_tuple = tuple(zones)
    schema_parser = _SequentParser(table, zone_tuple, "schema")

    rules: list[RuleDecl] = []
    seen_rules: set[str] = set()
    for kw, rname, toks, ln in pending_rules:
        if rname in seen_rules:
            diags.append(Diagnostic(ln, 1, "DuplicateRuleName",
                                    f"rule {rname} declared twice"))
            continue
        seen_rules.add(rname)
        p = _P(toks, diags, ln)
        seqs: list[Sequent] = []
        conclusion: Optional[Sequent] = None
        bad = False
        while p.peek() is not None:
            t = p.peek()
            if t.kind == "arrow":
                p.next()
                conclusion = schema_parser.parse_sequent(p)
                if conclusion is None or p.peek() is not None:
                    if conclusion is not None and p.peek() is not None:
                        p.error(p.peek().col, "ParseError",
                                "trailing tokens after conclusion")
                    bad = True
                break
            s = schema_parser.parse_sequent(p)
            if s is None:
                bad = True
                break
            seqs.append(s)
        if bad:
            continue
        if conclusion is None:
            if kw == "axiom" and len(seqs) == 1:
                conclusion, seqs = seqs[0], []
            else:
                diags.append(Diagnostic(ln, 1, "ParseError",
                                        f"{kw} {rname}: missing => conclusion"))
                continue
        if kw == "axiom" and seqs:
            diags.append(Diagnostic(ln, 1, "ParseError",
                                    "axioms take no premises"))
            continue
        if kw == "rule" and not seqs:
            diags.append(Diagnostic(ln, 1, "ParseError",
                                    f"rule {rname} has no premises;"
                                    " declare it as an axiom"))
            continue
        kind = {"axiom": "axiom", "cut": "cut"}.get(kw, "")
        decl = RuleDecl(rname, tuple(seqs), conclusion, kind or "logical")
        if kw == "rule":
            napps = sum(1 for _, c in conclusion.zones
                        for f in c.formulas if isinstance(f, App))
            if napps > 1:
                diags.append(Diagnostic(ln, 1, "ParseError",
                                        f"rule {rname}: more than one"
                                        " candidate principal formula"))
                continue
            kind = "logical" if napps == 1 else "structural"
            decl = RuleDecl(rname, tuple(seqs), conclusion, kind)
        _check_containment(decl, ln, diags)
        rules.append(decl)

    if diags:
        raise CalculusParseError(diags)

    identity_name, identity_var = _resolve_identity(
        identity_name, rules, tuple(zones), diags)
    if diags:
        raise CalculusParseError(diags)

    spec = CalculusSpec(name or "calculus", zone_tuple, tuple(conns),
                        tuple(rules), identity_name, identity_var)
    for r in rules:
        if r.kind == "cut":
            try:
                validate_cut(spec, r.name)
            except NotACut as e:
                diags.append(Diagnostic(1, 1, "ParseError",
                                        f"cut {r.name}: {e}"))
    if diags:
        raise CalculusParseError(diags)
    return spec


def _parse_zone(rest: list[_Tok], ln: int, zones: list[ZoneDecl],
                diags: list[Diagnostic]) -> None:
    if len(rest) < 2 or rest[0].kind != "ident" or rest[1].kind != "ident" \
            or rest[1].value not in ("antecedent", "succedent"):
        diags.append(Diagnostic(ln, 1, "ParseError",
                                "zone NAME antecedent|succedent"
                                " [weakening] [contraction]"))
        return
    flags = {t.value for t in rest[2:]}
    extra = flags - {"weakening", "contraction"}
    if extra:
        diags.append(Diagnostic(ln, 1, "ParseError",
                                f"unknown zone flags {sorted(extra)}"))
        return
    zones.append(ZoneDecl(rest[0].value, rest[1].value,
                          "weakening" in flags, "contraction" in flags))


def _parse_conn(rest: list[_Tok], ln: int, conns: list[Connective],
                diags: list[Diagnostic]) -> None:
    if len(rest) < 3 or rest[0].kind != "ident" or rest[1].kind != "num" \
            or rest[2].kind != "string":
        diags.append(Diagnostic(ln, 1, "ParseError",
                                'conn NAME ARITY "TEMPLATE" [prec N]'))
        return
    prec = 50
    if len(rest) > 3:
        if len(rest) == 5 and rest[3].kind == "ident" \
                and rest[3].value == "prec" and rest[4].kind == "num":
            prec = int(rest[4].value)
        else:
            diags.append(Diagnostic(ln, rest[3].col, "ParseError",
                                    "expected: prec N"))
            return
    display = rest[2].value[1:-1].replace('\\"', '"')
    try:
        conns.append(Connective(rest[0].value, int(rest[1].value),
                                display, prec))
    except ValueError as e:
        diags.append(Diagnostic(ln, rest[0].col, "ArityMismatch", str(e)))


def _var_kinds(s: Sequent) -> dict[str, str]:
    kinds: dict[str, str] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, AtomVar):
            kinds[f.name] = "atom"
        elif isinstance(f, FormulaVar):
            kinds[f.name] = "formula"
        elif isinstance(f, App):
            for a in f.args:
                walk(a)

    for _, c in s.zones:
        for v in c.vars:
            kinds[v.name] = "ctx"
        for f in c.formulas:
            walk(f)
    return kinds


def _check_containment(decl: RuleDecl, ln: int,
                       diags: list[Diagnostic]) -> None:
    concl_vars = decl.conclusion.var_names()
    extra: set[str] = set()
    for p in decl.premises:
        extra |= p.var_names() - concl_vars
    if decl.kind == "cut":
        return  # cut's extra variable is validated by validate_cut
    for v in sorted(extra):
        diags.append(Diagnostic(ln, 1, "UnboundPremiseVariable",
                                f"rule {decl.name}: premise variable {v}"
                                " does not occur in the conclusion"))


def _identity_shape(rule: RuleDecl,
                    zones: tuple[ZoneDecl, ...]) -> Optional[str]:
    """If the axiom has identity shape, return the atom variable name."""
    if rule.kind != "axiom":
        return None
    side_of = {z.name: z.side for z in zones}
    pos: dict[str, set[str]] = {}
    neg: dict[str, set[str]] = {}
    for zname, ctx in rule.conclusion.zones:
        for f in ctx.formulas:
            if isinstance(f, AtomVar):
                (neg if f.neg else pos).setdefault(f.name, set()).add(zname)
    two_sided = any(z.side == "antecedent" for z in zones)
    for v, zs in sorted(pos.items()):
        if two_sided:
            sides = {side_of[z] for z in zs}
            if {"antecedent", "succedent"} <= sides:
                return v
        if v in neg:
            return v
    return None


def _resolve_identity(designated: Optional[str], rules: list[RuleDecl],
                      zones: tuple[ZoneDecl, ...],
                      diags: list[Diagnostic]) -> tuple[str, str]:
    by_name = {r.name: r for r in rules}
    if designated is not None:
        r = by_name.get(designated)
        if r is None:
            diags.append(Diagnostic(1, 1, "MissingIdentityRule",
                                    f"identity rule {designated} not found"))
            return "", ""
        v = _identity_shape(r, zones)
        if v is None:
            diags.append(Diagnostic(1, 1, "MissingIdentityRule",
                                    f"{designated} is not an identity-shaped"
                                    " axiom"))
            return "", ""
        return designated, v
    candidates = [(r.name, _identity_shape(r, zones)) for r in rules]
    candidates = [(n, v) for n, v in candidates if v is not None]
    if not candidates:
        diags.append(Diagnostic(1, 1, "MissingIdentityRule",
                                "no identity-shaped axiom found"))
        return "", ""
    if len(candidates) > 1:
        names = ", ".join(n for n, _ in candidates)
        diags.append(Diagnostic(1, 1, "MissingIdentityRule",
                                f"several identity candidates ({names});"
                                " add an explicit `identity NAME` line"))
        return "", ""
    return candidates[0]


def validate_cut(spec: CalculusSpec, rule_name: str) -> CutDescriptor:
    """Check the structural cut shape and locate the cut variable."""
    if not spec.has_rule(rule_name):
        raise NotACut(f"no rule named {rule_name}")
    rule = spec.rule(rule_name)
    if len(rule.premises) != 2:
        raise NotACut(f"{rule_name} has {len(rule.premises)} premises,"
                      " a cut needs exactly 2")
    concl_vars = rule.conclusion.var_names()
    extra = set()
    for p in rule.premises:
        extra |= p.var_names() - concl_vars
    if not extra:
        raise NotACut("cut variable absent: premises introduce no variable"
                      " missing from the conclusion")
    if len(extra) > 1:
        raise NotACut(f"several premise-only variables: {sorted(extra)}")
    (cv,) = extra
    kinds = {}
    for p in rule.premises:
        kinds.update({k: v for k, v in _var_kinds(p).items() if k == cv})
    if kinds.get(cv) != "formula":
        raise NotACut(f"premise-only variable {cv} is not a formula variable")
    occurrences = []
    for i, prem in enumerate(rule.premises):
        occ = []
        for zname, ctx in prem.zones:
            for f in ctx.formulas:
                if isinstance(f, FormulaVar) and f.name == cv:
                    occ.append((i, zname, f.dual))
        if len(occ) != 1:
            raise NotACut(f"cut variable {cv} must occur exactly once in"
                          f" premise {i + 1}, found {len(occ)}")
        occurrences.extend(occ)
    return CutDescriptor(rule_name, cv, tuple(occurrences))


def parse_goal(text: str, spec: CalculusSpec, mode: str = "ground") -> Sequent:
    """Parse a standalone sequent (a proof goal) in the given calculus."""
    diags: list[Diagnostic] = []
    stripped = text.strip()
    if not stripped.startswith("("):
        stripped = f"({stripped})"
    toks = _tokenize_line(stripped, 1, diags)
    p = _P(toks, diags, 1)
    parser = _SequentParser(spec.table, spec.zones, mode)
    s = parser.parse_sequent(p)
    if s is not None and p.peek() is not None:
        p.error(p.peek().col, "ParseError", "trailing tokens after sequent")
        s = None
    if diags or s is None:
        raise CalculusParseError(
            diags or [Diagnostic(1, 1, "ParseError", "invalid sequent")])
    if mode == "ground" and not s.is_ground():
        raise CalculusParseError(
            [Diagnostic(1, 1, "ParseError", "goal must be concrete")])
    return s


# ---------------------------------------------------------------------------
# canonical printer
# ---------------------------------------------------------------------------

def print_formula(f: Formula, parent_prec: int = 0) -> str:
    if isinstance(f, Atom):
        return ("~" if f.neg else "") + f.name
    if isinstance(f, AtomVar):
        return ("~" if f.neg else "") + f.name
    if isinstance(f, FormulaVar):
        return ("~" if f.dual else "") + f.name
    if isinstance(f, App):
        c = f.conn
        if c.arity == 0:
            return c.name
        if c.arity == 1:
            return f"{c.name} {print_formula(f.args[0], c.prec + 1)}"
        body = (f"{print_formula(f.args[0], c.prec)} {c.name}"
                f" {print_formula(f.args[1], c.prec + 1)}")
        return f"({body})" if c.prec < parent_prec else body
    raise TypeError(repr(f))


def print_context(c: ContextExpr) -> str:
    items = [(f"{v.guard} {v.name}" if v.guard else v.name)
             for v in c.vars]
    items += [print_formula(f) for f in c.formulas]
    return ", ".join(items)


def print_sequent(s: Sequent, spec: CalculusSpec) -> str:
    n_ante = len(spec.antecedent_zones)
    parts = [print_context(c) for _, c in s.zones]
    left = " ; ".join(parts[:n_ante])
    right = " ; ".join(parts[n_ante:])
    inner = f"{left} |- {right}" if left else f"|- {right}"
    return f"({inner})"


def print_calculus(spec: CalculusSpec) -> str:
    """Bit-exact canonical form: single spaces, declaration order."""
    out = [f"calculus {spec.name}"]
    for z in spec.zones:
        flags = (" weakening" if z.weakening else "") + \
                (" contraction" if z.contraction else "")
        out.append(f"zone {z.name} {z.side}{flags}")
    for c in spec.connectives:
        out.append(f'conn {c.name} {c.arity} "{c.display}" prec {c.prec}')
    printed = set()
    for c in spec.connectives:
        if c.dual and c.name not in printed:
            out.append(f"dual {c.name} {c.dual}")
            printed.add(c.name)
            printed.add(c.dual)
    for r in spec.rules:
        seqs = " ".join(print_sequent(p, spec) for p in r.premises)
        concl = print_sequent(r.conclusion, spec)
        kw = {"axiom": "axiom", "cut": "cut"}.get(r.kind, "rule")
        if r.kind == "axiom":
            out.append(f"axiom {r.name} : {concl}")
        else:
            out.append(f"{kw} {r.name} : {seqs} => {concl}")
    out.append(f"identity {spec.identity_rule}")
    return "\n".join(out) + "\n"


def load_builtin(name: str) -> CalculusSpec:
    """Load one of the shipped calculi: lk, ll, lkbox."""
    text = (importlib.resources.files("sequitur") / "calculi"
            / f"{name}.cal").read_text(encoding="utf-8")
    return parse_calculus(text)
