"""Schematic matching and unification over multiset sequents.

`match_sequent` enumerates every substitution that instantiates a rule
schema to a concrete (variable-free) sequent; `unify_sequent` enumerates
every way two schemas overlap, which is the case generator behind all
meta-property checkers.  Both are deterministic: choice points are
iterated in a canonical order (principal formulas first, target
occurrences in canonical multiset order, context splits in counter
order) and duplicate answers are collapsed keeping first occurrence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .subst import Substitution
from .terms import (
    App,
    Atom,
    AtomVar,
    ConnectiveTable,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    MissingDualityTable,
    Sequent,
    is_ctx_token,
    ctx_token_guard,
)


def _negate_atomlike(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.name, not f.neg)
    if isinstance(f, AtomVar):
        return AtomVar(f.name, not f.neg)
    raise TypeError(f"not atom-like: {f!r}")


def _token_absorbable(f: Formula, guard: Optional[str]) -> bool:
    """May ground/semi-ground formula f live inside a context variable
    with this guard?  Context tokens carry their own guard in the name."""
    if isinstance(f, Atom) and is_ctx_token(f.name):
        return guard is None or ctx_token_guard(f.name) == guard
    if guard is None:
        return True
    return isinstance(f, App) and f.conn.name == guard


# ---------------------------------------------------------------------------
# match: schema pattern against a concrete target
# ---------------------------------------------------------------------------

def _match_formula(pat: Formula, tgt: Formula, fmap: dict,
                   table: Optional[ConnectiveTable]) -> Optional[dict]:
    """Extends fmap (copy-on-bind); returns None on clash."""
    if isinstance(pat, Atom):
        return fmap if pat == tgt else None
    if isinstance(pat, AtomVar):
        if not isinstance(tgt, Atom):
            return None
        val = _negate_atomlike(tgt) if pat.neg else tgt
        # atom variables range over positive atoms; context tokens are
        # multiset stand-ins and never bind at the formula level
        if val.neg or is_ctx_token(val.name):
            return None
        prev = fmap.get(pat.name)
        if prev is not None:
            return fmap if prev == val else None
        fmap = dict(fmap)
        fmap[pat.name] = val
        return fmap
    if isinstance(pat, FormulaVar):
        if isinstance(tgt, Atom) and is_ctx_token(tgt.name):
            return None
        if pat.dual:
            if table is None:
                raise MissingDualityTable(
                    f"pattern uses dual of {pat.name}; no table given")
            try:
                val = table.dual_of(tgt)
            except MissingDualityTable:
                return None
        else:
            val = tgt
        prev = fmap.get(pat.name)
        if prev is not None:
            return fmap if prev == val else None
        fmap = dict(fmap)
        fmap[pat.name] = val
        return fmap
    if isinstance(pat, App):
        if not isinstance(tgt, App) or tgt.conn.name != pat.conn.name:
            return None
        for p, t in zip(pat.args, tgt.args):
            nxt = _match_formula(p, t, fmap, table)
            if nxt is None:
                return None
            fmap = nxt
        return fmap
    raise TypeError(f"not a formula: {pat!r}")


def _pattern_order(formulas: tuple[Formula, ...]) -> list[Formula]:
    """Match non-variable (principal) formulas first, larger first."""
    return sorted(formulas,
                  key=lambda f: (0 if isinstance(f, App) else 1,
                                 -f.size, f.key()))


def _compositions(total: int, k: int):
    """Count vectors of length k summing to total, lexicographically."""
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _match_zone(pvars: tuple[CtxVar, ...], pformulas: tuple[Formula, ...],
                tformulas: tuple[Formula, ...], fmap: dict, cmap: dict,
                table: Optional[ConnectiveTable]
                ) -> Iterator[tuple[dict, dict]]:
    pf = _pattern_order(pformulas)
    n = len(tformulas)

    def assign(i: int, used: frozenset, fm: dict):
        if i == len(pf):
            yield from distribute(used, fm)
            return
        for j in range(n):
            if j in used:
                continue
            fm2 = _match_formula(pf[i], tformulas[j], fm, table)
            if fm2 is not None:
                yield from assign(i + 1, used | {j}, fm2)

    def distribute(used: frozenset, fm: dict):
        # context bindings are threaded as plain formula tuples and only
        # wrapped into ContextExpr at the very end of a full match
        leftover = [tformulas[j] for j in range(n) if j not in used]
        bound: list[CtxVar] = []
        unbound: list[CtxVar] = []
        for v in sorted(pvars, key=lambda v: v.key()):
            (bound if v.name in cmap else unbound).append(v)
        pool = list(leftover)
        for v in bound:
            ok = True
            for f in cmap[v.name]:
                if not _token_absorbable(f, v.guard):
                    ok = False
                    break
                try:
                    pool.remove(f)
                except ValueError:
                    ok = False
                    break
            if not ok:
                return
        if not unbound:
            if pool:
                return
            yield fm, cmap
            return
        k = len(unbound)
        # split the leftover multiset: one count vector per distinct
        # formula (the pool is canonically sorted, duplicates adjacent)
        groups: list[tuple[Formula, int]] = []
        for f in pool:
            if groups and groups[-1][0] == f:
                groups[-1] = (f, groups[-1][1] + 1)
            else:
                groups.append((f, 1))
        per_group: list[list[tuple[int, ...]]] = []
        for f, count in groups:
            allowed = [_token_absorbable(f, v.guard) for v in unbound]
            vecs = [vec for vec in _compositions(count, k)
                    if all(allowed[j] or vec[j] == 0 for j in range(k))]
            if not vecs:
                return
            per_group.append(vecs)
        for assignment in itertools.product(*per_group):
            parts: list[list[Formula]] = [[] for _ in range(k)]
            for (f, _), vec in zip(groups, assignment):
                for j, nj in enumerate(vec):
                    if nj:
                        parts[j].extend([f] * nj)
            # occurrences sharing a name must receive equal content
            binding: dict[str, tuple[Formula, ...]] = {}
            ok = True
            for v, part in zip(unbound, parts):
                fs = tuple(part)
                if v.name in binding:
                    if binding[v.name] != fs:
                        ok = False
                        break
                else:
                    binding[v.name] = fs
            if not ok:
                continue
            cm2 = dict(cmap)
            cm2.update(binding)
            yield fm, cm2

    yield from assign(0, frozenset(), fmap)


# Per-zone enumeration cache.  A zone's matches depend only on the zone
# patterns, the target zone, and the incoming bindings of names the
# pattern zone mentions, so results are shared across targets (and
# across repeated searches over the same goals).
_ZONE_CACHE: dict = {}
_ZONE_CACHE_LIMIT = 200_000


def _binding_key(fm: dict, cm: dict, relevant: frozenset) -> tuple:
    fk = tuple(sorted((n, fm[n].key()) for n in fm if n in relevant))
    ck = tuple(sorted((n, tuple(f.key() for f in cm[n]))
                      for n in cm if n in relevant))
    return fk, ck


def _zone_deltas(pc: ContextExpr, tc: ContextExpr, fm: dict, cm: dict,
                 relevant: frozenset,
                 table: Optional[ConnectiveTable]) -> list[tuple[dict, dict]]:
    key = (pc._key, tc._key, _binding_key(fm, cm, relevant), table)
    hit = _ZONE_CACHE.get(key)
    if hit is not None:
        return hit
    deltas = []
    for fm2, cm2 in _match_zone(pc.vars, pc.formulas, tc.formulas,
                                fm, cm, table):
        fd = {n: v for n, v in fm2.items() if n not in fm}
        cd = {n: v for n, v in cm2.items() if n not in cm}
        deltas.append((fd, cd))
    if len(_ZONE_CACHE) >= _ZONE_CACHE_LIMIT:
        _ZONE_CACHE.clear()
    _ZONE_CACHE[key] = deltas
    return deltas


def match_sequent(pattern: Sequent, target: Sequent,
                  table: Optional[ConnectiveTable] = None
                  ) -> list[Substitution]:
    """All substitutions s with subst_apply(s, pattern) == target.

    The target must be concrete: no schematic variables in any zone
    (schematic-mode context tokens, which are ordinary atoms, are fine).
    Deduplicated, deterministic order.
    """
    if len(pattern.zones) != len(target.zones):
        return []
    for (pn, _), (tn, tc) in zip(pattern.zones, target.zones):
        if pn != tn:
            return []
        if tc.vars:
            raise ValueError("target sequent must be concrete")
    relevant = [c.var_names() for _, c in pattern.zones]

    def per_zone(i: int, fm: dict, cm: dict) -> Iterator[tuple[dict, dict]]:
        if i == len(pattern.zones):
            yield fm, cm
            return
        _, pc = pattern.zones[i]
        _, tc = target.zones[i]
        for fd, cd in _zone_deltas(pc, tc, fm, cm, relevant[i], table):
            yield from per_zone(i + 1,
                                {**fm, **fd} if fd else fm,
                                {**cm, **cd} if cd else cm)

    seen: dict[Substitution, None] = {}
    for fm, cm in per_zone(0, {}, {}):
        s = Substitution(fm, {name: ContextExpr._presorted(fs)
                              for name, fs in cm.items()})
        if s not in seen:
            seen[s] = None
    return list(seen.keys())


# ---------------------------------------------------------------------------
# unify: schema against schema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnifyCase:
    """One overlap case: substitutions for each schema plus the record of
    which formula occurrences were identified with each other.

    `pairs` holds ((zone_index, left_formula_index), (zone_index,
    right_formula_index)) entries, indices into the canonical formula
    tuples of the respective zone.
    """

    sub1: Substitution
    sub2: Substitution
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]


class _FreshNames:
    def __init__(self) -> None:
        self.ctx = 0
        self.form = 0

    def ctx_var(self) -> str:
        self.ctx += 1
        return f"_X{self.ctx}"

    def formula_var(self) -> str:
        self.form += 1
        return f"_F{self.form}"


def _resolve(f: Formula, fmap: dict[str, Formula],
             table: Optional[ConnectiveTable]) -> Formula:
    for _ in range(1000):
        if isinstance(f, AtomVar) and f.name in fmap:
            b = fmap[f.name]
            f = _negate_atomlike(b) if f.neg else b
        elif isinstance(f, FormulaVar) and f.name in fmap:
            b = fmap[f.name]
            if f.dual:
                if table is None:
                    raise MissingDualityTable("dual variable needs a table")
                f = table.dual_of(b)
            else:
                f = b
        else:
            return f
    raise RuntimeError("cyclic substitution")


def _unify_formula(f1: Formula, f2: Formula, fmap: dict[str, Formula],
                   table: Optional[ConnectiveTable]) -> bool:
    """Destructively extends fmap; caller copies before branching."""
    try:
        f1 = _resolve(f1, fmap, table)
        f2 = _resolve(f2, fmap, table)
    except MissingDualityTable:
        return False
    if f1 == f2:
        return True
    for a, b in ((f1, f2), (f2, f1)):
        if isinstance(a, FormulaVar):
            try:
                val = table.dual_of(b) if a.dual and table else b
                if a.dual and table is None:
                    return False
            except MissingDualityTable:
                return False
            from .terms import formula_vars
            if a.name in formula_vars(val):
                return False
            fmap[a.name] = val
            return True
    for a, b in ((f1, f2), (f2, f1)):
        if isinstance(a, AtomVar):
            if not isinstance(b, (Atom, AtomVar)):
                return False
            val = _negate_atomlike(b) if a.neg else b
            if isinstance(val, Atom) and is_ctx_token(val.name):
                return False
            fmap[a.name] = val
            return True
    if isinstance(f1, App) and isinstance(f2, App) \
            and f1.conn.name == f2.conn.name:
        return all(_unify_formula(a, b, fmap, table)
                   for a, b in zip(f1.args, f2.args))
    return False


def _guard_compatible(f: Formula, guard: Optional[str],
                      fmap: dict[str, Formula], fresh: _FreshNames,
                      table: Optional[ConnectiveTable],
                      calculus_table: Optional[ConnectiveTable]) -> bool:
    """Can formula f be placed inside a context variable with `guard`?
    An unbound formula variable is specialised to a guarded shape."""
    if guard is None:
        return True
    f = _resolve(f, fmap, table)
    if isinstance(f, App):
        return f.conn.name == guard
    if isinstance(f, FormulaVar) and not f.dual:
        conn = (calculus_table or table)
        g = conn.get(guard) if conn else None
        if g is None or g.arity != 1:
            return False
        fmap[f.name] = App(g, (FormulaVar(fresh.formula_var()),))
        return True
    return False


@dataclass
class _ZoneChoice:
    pairs: list[tuple[int, int]]
    into2: list[tuple[int, int]]   # (f1 index, v2 occurrence index)
    into1: list[tuple[int, int]]   # (f2 index, v1 occurrence index)


def _unify_zone(F1: tuple[Formula, ...], V1: tuple[CtxVar, ...],
                F2: tuple[Formula, ...], V2: tuple[CtxVar, ...],
                fmap: dict[str, Formula], fresh: _FreshNames,
                table: Optional[ConnectiveTable]
                ) -> Iterator[tuple[dict[str, Formula], _ZoneChoice]]:
    def step(i: int, used2: frozenset, fm: dict[str, Formula],
             choice: _ZoneChoice):
        if i == len(F1):
            # leftover right formulas must go into some left variable
            rest = [j for j in range(len(F2)) if j not in used2]

            def place(r: int, fm2: dict, ch: _ZoneChoice):
                if r == len(rest):
                    yield fm2, ch
                    return
                j = rest[r]
                for vi, v in enumerate(V1):
                    fm3 = dict(fm2)
                    if _guard_compatible(F2[j], v.guard, fm3, fresh,
                                         table, table):
                        yield from place(r + 1, fm3, _ZoneChoice(
                            ch.pairs, ch.into2, ch.into1 + [(j, vi)]))

            yield from place(0, fm, choice)
            return
        # pair F1[i] with an unused right formula
        for j in range(len(F2)):
            if j in used2:
                continue
            fm2 = dict(fm)
            if _unify_formula(F1[i], F2[j], fm2, table):
                yield from step(i + 1, used2 | {j}, fm2, _ZoneChoice(
                    choice.pairs + [(i, j)], choice.into2, choice.into1))
        # or place it inside a right context variable
        for vi, v in enumerate(V2):
            fm2 = dict(fm)
            if _guard_compatible(F1[i], v.guard, fm2, fresh, table, table):
                yield from step(i + 1, used2, fm2, _ZoneChoice(
                    choice.pairs, choice.into2 + [(i, vi)], choice.into1))

    yield from step(0, frozenset(), fmap, _ZoneChoice([], [], []))


def unify_cases(s1: Sequent, s2: Sequent,
                table: Optional[ConnectiveTable] = None) -> list[UnifyCase]:
    """Complete finite set of schematic overlap cases between two
    sequent schemas with disjoint variable names."""
    if len(s1.zones) != len(s2.zones):
        return []
    if {n for n, _ in s1.zones} != {n for n, _ in s2.zones}:
        return []
    shared = s1.var_names() & s2.var_names()
    if shared:
        raise ValueError(f"schemas share variables: {sorted(shared)}")

    results: list[UnifyCase] = []
    seen: set = set()
    fresh = _FreshNames()

    def per_zone(i: int, fm: dict[str, Formula],
                 choices: list[_ZoneChoice]):
        if i == len(s1.zones):
            case = _finish_case(s1, s2, fm, choices, fresh, table)
            if case is not None:
                key = (case.sub1, case.sub2, case.pairs)
                if key not in seen:
                    seen.add(key)
                    results.append(case)
            return
        _, c1 = s1.zones[i]
        _, c2 = s2.zones[i]
        for fm2, choice in _unify_zone(c1.formulas, c1.vars,
                                       c2.formulas, c2.vars,
                                       dict(fm), fresh, table):
            per_zone(i + 1, fm2, choices + [choice])

    per_zone(0, {}, [])
    return results


def _finish_case(s1: Sequent, s2: Sequent, fmap: dict[str, Formula],
                 choices: list[_ZoneChoice], fresh: _FreshNames,
                 table: Optional[ConnectiveTable]) -> Optional[UnifyCase]:
    cmap1: dict[str, ContextExpr] = {}
    cmap2: dict[str, ContextExpr] = {}
    pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []

    def resolve_full(f: Formula) -> Formula:
        f = _resolve(f, fmap, table)
        if isinstance(f, App):
            return App(f.conn, tuple(resolve_full(a) for a in f.args))
        return f

    for zi, choice in enumerate(choices):
        _, c1 = s1.zones[zi]
        _, c2 = s2.zones[zi]
        for (i, j) in choice.pairs:
            pairs.append(((zi, i), (zi, j)))
        got1: dict[int, list[Formula]] = {k: [] for k in range(len(c1.vars))}
        got2: dict[int, list[Formula]] = {k: [] for k in range(len(c2.vars))}
        for (j, vi) in choice.into1:
            got1[vi].append(resolve_full(c2.formulas[j]))
        for (i, vi) in choice.into2:
            got2[vi].append(resolve_full(c1.formulas[i]))
        # shared remainder between every (left var, right var) pair
        shared_vars: dict[tuple[int, int], Optional[CtxVar]] = {}
        for a, v1 in enumerate(c1.vars):
            for b, v2 in enumerate(c2.vars):
                if v1.guard is not None and v2.guard is not None \
                        and v1.guard != v2.guard:
                    shared_vars[(a, b)] = None
                else:
                    guard = v1.guard or v2.guard
                    shared_vars[(a, b)] = CtxVar(fresh.ctx_var(), guard)
        for a, v1 in enumerate(c1.vars):
            xs = [shared_vars[(a, b)] for b in range(len(c2.vars))
                  if shared_vars[(a, b)] is not None]
            content = ContextExpr(xs, got1[a])
            if v1.name in cmap1:
                if cmap1[v1.name] != content:
                    return None
            else:
                cmap1[v1.name] = content
        for b, v2 in enumerate(c2.vars):
            xs = [shared_vars[(a, b)] for a in range(len(c1.vars))
                  if shared_vars[(a, b)] is not None]
            content = ContextExpr(xs, got2[b])
            if v2.name in cmap2:
                if cmap2[v2.name] != content:
                    return None
            else:
                cmap2[v2.name] = content

    vars1 = s1.var_names()
    vars2 = s2.var_names()
    fm1: dict[str, Formula] = {}
    fm2: dict[str, Formula] = {}
    for n in sorted(fmap):
        val = resolve_full(fmap[n])
        if n in vars1:
            fm1[n] = val
        elif n in vars2:
            fm2[n] = val
        # bindings of fresh helper variables are inlined by resolve_full
    sub1 = Substitution(fm1, {n: c for n, c in cmap1.items()})
    sub2 = Substitution(fm2, {n: c for n, c in cmap2.items()})
    sub1, sub2 = _canonicalize_fresh(sub1, sub2)
    return UnifyCase(sub1, sub2, tuple(sorted(pairs)))


def _canonicalize_fresh(sub1: Substitution, sub2: Substitution
                        ) -> tuple[Substitution, Substitution]:
    """Rename fresh variables (_X*, _F*) in order of first appearance so
    that structurally identical cases deduplicate."""
    mapping: dict[str, str] = {}
    counters = {"_X": 0, "_F": 0}

    def fresh_name(old: str) -> str:
        if old not in mapping:
            prefix = old[:2]
            counters[prefix] += 1
            mapping[old] = f"{prefix}{counters[prefix]}·"
        return mapping[old]

    def walk_formula(f: Formula) -> Formula:
        if isinstance(f, FormulaVar) and f.name.startswith("_F"):
            return FormulaVar(fresh_name(f.name), f.dual)
        if isinstance(f, App):
            return App(f.conn, tuple(walk_formula(a) for a in f.args))
        return f

    def walk_context(c: ContextExpr) -> ContextExpr:
        vs = [CtxVar(fresh_name(v.name), v.guard)
              if v.name.startswith("_X") else v for v in c.vars]
        return ContextExpr(vs, [walk_formula(f) for f in c.formulas])

    def walk_sub(s: Substitution) -> Substitution:
        return Substitution({n: walk_formula(f) for n, f in s.fmap.items()},
                            {n: walk_context(c) for n, c in s.cmap.items()})

    return walk_sub(sub1), walk_sub(sub2)


def unify_sequent(s1: Sequent, s2: Sequent,
                  table: Optional[ConnectiveTable] = None
                  ) -> list[tuple[Substitution, Substitution]]:
    """Public overlap enumeration: pairs (sub1, sub2) such that applying
    them to s1/s2 yields a common sequent schema."""
    return [(c.sub1, c.sub2) for c in unify_cases(s1, s2, table)]


def rename_apart(s: Sequent, suffix: str) -> Sequent:
    """Append suffix to every schematic variable name in the sequent."""

    def walk_formula(f: Formula) -> Formula:
        if isinstance(f, AtomVar):
            return AtomVar(f.name + suffix, f.neg)
        if isinstance(f, FormulaVar):
            return FormulaVar(f.name + suffix, f.dual)
        if isinstance(f, App):
            return App(f.conn, tuple(walk_formula(a) for a in f.args))
        return f

    def walk(name: str, c: ContextExpr) -> ContextExpr:
        return ContextExpr(
            [CtxVar(v.name + suffix, v.guard) for v in c.vars],
            [walk_formula(f) for f in c.formulas])

    return s.map_zones(walk)
