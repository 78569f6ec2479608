"""Substitutions over formula/atom variables and context variables."""

from __future__ import annotations

from typing import Mapping, Optional, Union

from .terms import (
    App,
    Atom,
    AtomVar,
    ConnectiveTable,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    GuardViolation,
    Sequent,
    SequiturError,
    Termlike,
    is_ctx_token,
    ctx_token_guard,
)


class ConflictingBinding(SequiturError):
    """Composition found the same variable bound to different values."""


class Substitution:
    """Finite map: formula/atom variable names -> formulas, context
    variable names -> context expressions.  Immutable; equality and hash
    are extensional."""

    __slots__ = ("fmap", "cmap", "_key", "domain")

    def __init__(self, fmap: Mapping[str, Formula] = {},
                 cmap: Mapping[str, ContextExpr] = {}):
        fm = dict(sorted(fmap.items()))
        cm = dict(sorted(cmap.items()))
        for name, c in cm.items():
            if not isinstance(c, ContextExpr):
                raise TypeError(f"{name}: not a context: {c!r}")
        object.__setattr__(self, "fmap", fm)
        object.__setattr__(self, "cmap", cm)
        object.__setattr__(self, "_key", (
            tuple((n, f.key()) for n, f in fm.items()),
            tuple((n, c._key) for n, c in cm.items())))
        object.__setattr__(self, "domain",
                           frozenset(fm) | frozenset(cm))

    def __setattr__(self, *a):
        raise AttributeError("Substitution is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        parts = [f"{n} -> {f!r}" for n, f in self.fmap.items()]
        parts += [f"{n} -> {c!r}" for n, c in self.cmap.items()]
        return "{" + ", ".join(parts) + "}"

    @property
    def is_empty(self) -> bool:
        return not self.fmap and not self.cmap

    def bind_formula(self, name: str, f: Formula) -> "Substitution":
        fm = dict(self.fmap)
        fm[name] = f
        return Substitution(fm, self.cmap)

    def bind_context(self, name: str, c: ContextExpr) -> "Substitution":
        cm = dict(self.cmap)
        cm[name] = c
        return Substitution(self.fmap, cm)

    def restrict(self, names: set[str]) -> "Substitution":
        return Substitution(
            {n: f for n, f in self.fmap.items() if n in names},
            {n: c for n, c in self.cmap.items() if n in names})


EMPTY_SUBST = Substitution()


def _negate(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.name, not f.neg)
    if isinstance(f, AtomVar):
        return AtomVar(f.name, not f.neg)
    raise GuardViolation(f"cannot negate non-atom {f!r}")


def _apply_formula(s: Substitution, f: Formula,
                   table: Optional[ConnectiveTable]) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, AtomVar):
        b = s.fmap.get(f.name)
        if b is None:
            return f
        if not isinstance(b, (Atom, AtomVar)):
            raise GuardViolation(
                f"atom variable {f.name} bound to non-atom {b!r}")
        return _negate(b) if f.neg else b
    if isinstance(f, FormulaVar):
        b = s.fmap.get(f.name)
        if b is None:
            return f
        if f.dual:
            if table is None:
                from .terms import MissingDualityTable
                raise MissingDualityTable(
                    f"dual occurrence of {f.name} needs a connective table")
            return table.dual_of(b)
        return b
    if isinstance(f, App):
        return App(f.conn, tuple(_apply_formula(s, a, table) for a in f.args))
    raise TypeError(f"not a formula: {f!r}")


def _guard_ok(f: Formula, guard: str) -> bool:
    """May formula f sit inside a context variable guarded by `guard`?"""
    if isinstance(f, App):
        return f.conn.name == guard
    if isinstance(f, Atom) and is_ctx_token(f.name):
        return ctx_token_guard(f.name) == guard
    return False


def _apply_context(s: Substitution, c: ContextExpr,
                   table: Optional[ConnectiveTable]) -> ContextExpr:
    if not (c.var_names() & s.domain):
        return c
    vars_out: list[CtxVar] = []
    formulas_out: list[Formula] = []
    for v in c.vars:
        b = s.cmap.get(v.name)
        if b is None:
            vars_out.append(v)
            continue
        if v.guard is not None:
            for bf in b.formulas:
                if not _guard_ok(bf, v.guard):
                    raise GuardViolation(
                        f"{v.guard} {v.name} cannot contain {bf!r}")
            for bv in b.vars:
                if bv.guard != v.guard:
                    raise GuardViolation(
                        f"{v.guard} {v.name} cannot contain variable {bv!r}")
        vars_out.extend(b.vars)
        formulas_out.extend(b.formulas)
    for f in c.formulas:
        formulas_out.append(_apply_formula(s, f, table))
    return ContextExpr(vars_out, formulas_out)


def subst_apply(s: Substitution, x: Termlike,
                table: Optional[ConnectiveTable] = None) -> Termlike:
    """Replace every bound variable occurrence in x.

    Multiset semantics: splicing a context binding adds occurrence
    counts.  Raises GuardViolation when a guarded variable would receive
    non-conforming material.
    """
    if isinstance(x, Formula):
        return _apply_formula(s, x, table)
    if isinstance(x, ContextExpr):
        return _apply_context(s, x, table)
    if isinstance(x, Sequent):
        zones = tuple((n, _apply_context(s, c, table)) for n, c in x.zones)
        if all(z2 is z1 for (_, z1), (_, z2) in zip(x.zones, zones)):
            return x
        return Sequent(zones)
    raise TypeError(f"cannot substitute into {x!r}")


def subst_compose(s1: Substitution, s2: Substitution,
                  table: Optional[ConnectiveTable] = None) -> Substitution:
    """Composition: applying the result equals applying s1 then s2.

    Domains may overlap only on identical bindings.
    """
    for n in s1.fmap.keys() & s2.fmap.keys():
        if s1.fmap[n] != s2.fmap[n]:
            raise ConflictingBinding(
                f"{n}: {s1.fmap[n]!r} vs {s2.fmap[n]!r}")
    for n in s1.cmap.keys() & s2.cmap.keys():
        if s1.cmap[n] != s2.cmap[n]:
            raise ConflictingBinding(
                f"{n}: {s1.cmap[n]!r} vs {s2.cmap[n]!r}")
    fmap = {n: _apply_formula(s2, f, table) for n, f in s1.fmap.items()}
    cmap = {n: _apply_context(s2, c, table) for n, c in s1.cmap.items()}
    for n, f in s2.fmap.items():
        fmap.setdefault(n, f)
    for n, c in s2.cmap.items():
        cmap.setdefault(n, c)
    return Substitution(fmap, cmap)
