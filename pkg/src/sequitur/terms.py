"""Symbolic core: connectives, formulas, multiset contexts, sequents.

Everything here is immutable and hashable.  Contexts are multisets: the
constructors sort their contents into a canonical order, so two contexts
built from the same occurrences in different insertion orders compare
equal.  Exchange is therefore never an explicit step anywhere in the
system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union


class SequiturError(Exception):
    """Base class for all library errors."""


class GuardViolation(SequiturError):
    """A guarded context variable received non-conforming material."""


class MissingDualityTable(SequiturError):
    """A dual was requested but the calculus declares no dual for it."""


# Reserved name prefix for schematic-mode tokens.  A name like
# "_ctx:box:G" stands for the (inert) contents of the guarded context
# variable `box G`; "_A" stands for the formula variable A frozen as an
# opaque atom.  User identifiers can never start with an underscore, so
# these never collide.
CTX_TOKEN_PREFIX = "_ctx:"


def ctx_token_name(var: str, guard: Optional[str]) -> str:
    return f"{CTX_TOKEN_PREFIX}{guard or ''}:{var}"


def ctx_token_guard(name: str) -> Optional[str]:
    """Guard carried by a context token name, or None if unguarded."""
    body = name[len(CTX_TOKEN_PREFIX):]
    guard, _, _ = body.partition(":")
    return guard or None


def is_ctx_token(name: str) -> bool:
    return name.startswith(CTX_TOKEN_PREFIX)


@dataclass(frozen=True)
class Connective:
    """A connective symbol: arity, LaTeX display template, precedence.

    The template uses ``#1`` .. ``#n`` as argument slots.  ``dual`` names
    the dual connective for one-sided calculi; duality lookups go through
    the calculus's connective table.
    """

    name: str
    arity: int
    display: str
    prec: int = 50
    dual: Optional[str] = None

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError(f"connective {self.name}: negative arity")
        for i in range(1, self.arity + 1):
            if f"#{i}" not in self.display:
                raise ValueError(
                    f"connective {self.name}: display template lacks slot #{i}")
        if f"#{self.arity + 1}" in self.display:
            raise ValueError(
                f"connective {self.name}: display template has too many slots")


class Formula:
    """Base class; concrete nodes are Atom, AtomVar, FormulaVar, App."""

    __slots__ = ()

    def key(self) -> tuple:
        raise NotImplementedError

    @property
    def size(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    neg: bool = False

    def key(self) -> tuple:
        cached = self.__dict__.get("_key")
        if cached is None:
            cached = (0, self.name, self.neg)
            object.__setattr__(self, "_key", cached)
        return cached

    @property
    def size(self) -> int:
        return 1

    def __repr__(self) -> str:
        return f"~{self.name}" if self.neg else self.name


@dataclass(frozen=True)
class AtomVar(Formula):
    """Schematic variable ranging over atoms only."""

    name: str
    neg: bool = False

    def key(self) -> tuple:
        return (1, self.name, self.neg)

    @property
    def size(self) -> int:
        return 1

    def __repr__(self) -> str:
        return f"~?{self.name}" if self.neg else f"?{self.name}"


@dataclass(frozen=True)
class FormulaVar(Formula):
    """Schematic variable ranging over arbitrary formulas.

    With ``dual=True`` the occurrence denotes the dual of whatever the
    variable is bound to (used by one-sided cut rules: A paired with ~A).
    """

    name: str
    dual: bool = False

    def key(self) -> tuple:
        return (2, self.name, self.dual)

    @property
    def size(self) -> int:
        return 1

    def __repr__(self) -> str:
        return f"~?{self.name}!" if self.dual else f"?{self.name}!"


@dataclass(frozen=True)
class App(Formula):
    conn: Connective
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.conn.arity:
            raise ValueError(
                f"{self.conn.name} expects {self.conn.arity} args,"
                f" got {len(self.args)}")

    def key(self) -> tuple:
        cached = self.__dict__.get("_key")
        if cached is None:
            cached = (3, self.conn.name) + tuple(a.key() for a in self.args)
            object.__setattr__(self, "_key", cached)
        return cached

    @property
    def size(self) -> int:
        cached = self.__dict__.get("_size")
        if cached is None:
            cached = 1 + sum(a.size for a in self.args)
            object.__setattr__(self, "_size", cached)
        return cached

    def __repr__(self) -> str:
        if not self.args:
            return self.conn.name
        return f"{self.conn.name}({', '.join(map(repr, self.args))})"


def formula_size(f: Formula) -> int:
    """Well-founded measure: leaves count 1, App is 1 + sum of arguments."""
    return f.size


def is_ground(f: Formula) -> bool:
    if isinstance(f, (AtomVar, FormulaVar)):
        return False
    if isinstance(f, App):
        return all(is_ground(a) for a in f.args)
    return True


def formula_vars(f: Formula) -> set[str]:
    """Names of all AtomVars/FormulaVars occurring in f."""
    if isinstance(f, (AtomVar, FormulaVar)):
        return {f.name}
    if isinstance(f, App):
        out: set[str] = set()
        for a in f.args:
            out |= formula_vars(a)
        return out
    return set()


class ConnectiveTable:
    """Immutable name -> Connective mapping with duality lookups."""

    def __init__(self, connectives: Iterable[Connective]):
        table = {}
        for c in connectives:
            if c.name in table:
                raise ValueError(f"duplicate connective {c.name}")
            table[c.name] = c
        for c in table.values():
            if c.dual is not None:
                if c.dual not in table:
                    raise ValueError(
                        f"{c.name}: dual {c.dual} is not declared")
                back = table[c.dual].dual
                if back != c.name:
                    raise ValueError(
                        f"duality is not an involution: {c.name} -> {c.dual}"
                        f" -> {back}")
        self._table = dict(sorted(table.items()))

    def __getitem__(self, name: str) -> Connective:
        return self._table[name]

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def __iter__(self):
        return iter(self._table.values())

    def get(self, name: str) -> Optional[Connective]:
        return self._table.get(name)

    def dual_of(self, f: Formula) -> Formula:
        """Negation-normal-form dual: flips literals, dualizes connectives."""
        if isinstance(f, Atom):
            return Atom(f.name, not f.neg)
        if isinstance(f, AtomVar):
            return AtomVar(f.name, not f.neg)
        if isinstance(f, FormulaVar):
            return FormulaVar(f.name, not f.dual)
        if isinstance(f, App):
            if f.conn.dual is None:
                raise MissingDualityTable(
                    f"connective {f.conn.name} has no declared dual")
            dc = self._table[f.conn.dual]
            return App(dc, tuple(self.dual_of(a) for a in f.args))
        raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class CtxVar:
    """A context-variable occurrence; guard names a unary connective."""

    name: str
    guard: Optional[str] = None

    def key(self) -> tuple:
        return (self.name, self.guard or "")

    def __repr__(self) -> str:
        return f"{self.guard} {self.name}" if self.guard else self.name


class ContextExpr:
    """A multiset of context variables and formulas (one sequent zone)."""

    __slots__ = ("vars", "formulas", "_key", "_names")

    def __init__(self, vars: Iterable[CtxVar] = (),
                 formulas: Iterable[Formula] = ()):
        vs = tuple(sorted(vars, key=lambda v: v.key()))
        fs = tuple(sorted(formulas, key=lambda f: f.key()))
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "formulas", fs)
        object.__setattr__(self, "_key",
                           (tuple(v.key() for v in vs),
                            tuple(f.key() for f in fs)))
        object.__setattr__(self, "_names", None)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("ContextExpr is immutable")

    @classmethod
    def _presorted(cls, formulas: tuple) -> "ContextExpr":
        """Internal fast path: formulas already in canonical order."""
        self = object.__new__(cls)
        object.__setattr__(self, "vars", ())
        object.__setattr__(self, "formulas", formulas)
        object.__setattr__(self, "_key",
                           ((), tuple(f.key() for f in formulas)))
        object.__setattr__(self, "_names", None)
        return self

    def __eq__(self, other) -> bool:
        return isinstance(other, ContextExpr) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        items = [repr(v) for v in self.vars] + [repr(f) for f in self.formulas]
        return "{" + ", ".join(items) + "}"

    @property
    def is_empty(self) -> bool:
        return not self.vars and not self.formulas

    def merge(self, other: "ContextExpr") -> "ContextExpr":
        """Multiset union; occurrence counts add."""
        return ContextExpr(self.vars + other.vars,
                           self.formulas + other.formulas)

    def with_formulas(self, extra: Iterable[Formula]) -> "ContextExpr":
        return ContextExpr(self.vars, self.formulas + tuple(extra))

    def without_formula(self, f: Formula) -> "ContextExpr":
        """Remove one occurrence of f; raises if absent."""
        fs = list(self.formulas)
        fs.remove(f)
        return ContextExpr(self.vars, fs)

    def is_ground(self) -> bool:
        return not self.vars and all(is_ground(f) for f in self.formulas)

    def var_names(self) -> frozenset[str]:
        cached = self._names
        if cached is None:
            out = {v.name for v in self.vars}
            for f in self.formulas:
                out |= formula_vars(f)
            cached = frozenset(out)
            object.__setattr__(self, "_names", cached)
        return cached


EMPTY_CONTEXT = ContextExpr()


class Sequent:
    """Ordered, named zones, each a ContextExpr."""

    __slots__ = ("zones", "_key")

    def __init__(self, zones: Iterable[tuple[str, ContextExpr]]):
        zs = tuple(zones)
        object.__setattr__(self, "zones", zs)
        object.__setattr__(self, "_key",
                           tuple((n, c._key) for n, c in zs))

    def __setattr__(self, *a):
        raise AttributeError("Sequent is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Sequent) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "Sequent(" + "; ".join(
            f"{n}={c!r}" for n, c in self.zones) + ")"

    def zone(self, name: str) -> ContextExpr:
        for n, c in self.zones:
            if n == name:
                return c
        raise KeyError(name)

    def replace_zone(self, name: str, content: ContextExpr) -> "Sequent":
        return Sequent(tuple(
            (n, content if n == name else c) for n, c in self.zones))

    def map_zones(self, fn) -> "Sequent":
        return Sequent(tuple((n, fn(n, c)) for n, c in self.zones))

    def is_ground(self) -> bool:
        return all(c.is_ground() for _, c in self.zones)

    def var_names(self) -> set[str]:
        out: set[str] = set()
        for _, c in self.zones:
            out |= c.var_names()
        return out

    def formula_count(self) -> int:
        return sum(len(c.formulas) for _, c in self.zones)


Termlike = Union[Formula, ContextExpr, Sequent]
