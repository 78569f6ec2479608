"""Meta-property checkers: identity expansion, weakening admissibility,
invertibility, permutability, cut-elimination case analysis.

Every checker produces a CheckReport whose cases carry machine-checkable
witnesses.  The checks are sound but deliberately incomplete: a case the
automated strategy cannot close is reported `unknown`, never `failed`,
except where the whole decision space is finite and fully enumerated
(the atomic cut family).

Case analysis happens at the schematic level.  Schematic configurations
are frozen with `tokenize_sequent`: formula variables become opaque
atoms and context variables become inert marker atoms, so any derivation
found by bounded search is uniform in the frozen material and therefore
valid for every concrete instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .calculus import (
    CalculusSpec,
    CutDescriptor,
    NotACut,
    RuleDecl,
    print_sequent,
    validate_cut,
)
from .engine import (
    Application,
    ProofTree,
    _cut_applications,
    bounded_search,
    check_proof,
    enumerate_applications,
    tokenize_context,
    tokenize_formula,
    tokenize_sequent,
)
from .matching import match_sequent, rename_apart, unify_cases, UnifyCase
from .subst import Substitution, subst_apply
from .terms import (
    App,
    Atom,
    AtomVar,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    MissingDualityTable,
    Sequent,
    SequiturError,
    ctx_token_name,
)


class NoPrincipal(SequiturError):
    pass


@dataclass(frozen=True)
class Witness:
    kind: str  # "tree" | "pair"
    tree: Optional[ProofTree] = None
    before: Optional[ProofTree] = None
    after: Optional[ProofTree] = None


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    description: str
    status: str  # "proved" | "failed" | "unknown"
    witnesses: tuple[Witness, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class CheckReport:
    property: str
    calculus: str
    parameters: tuple[tuple[str, str], ...]
    cases: tuple[CaseResult, ...]
    notes: tuple[str, ...] = ()

    @property
    def summary(self) -> dict[str, int]:
        out = {"proved": 0, "failed": 0, "unknown": 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    @property
    def all_proved(self) -> bool:
        return all(c.status == "proved" for c in self.cases)


# ---------------------------------------------------------------------------
# shared machinery
# ---------------------------------------------------------------------------

def _rule_var_guards(rule: RuleDecl) -> dict[str, Optional[str]]:
    guards: dict[str, Optional[str]] = {}
    for s in (rule.conclusion,) + rule.premises:
        for _, c in s.zones:
            for v in c.vars:
                guards.setdefault(v.name, v.guard)
    return guards


def _full_instantiation(rule: RuleDecl, sub: Substitution,
                        strip: str = "") -> Substitution:
    """Every variable of the rule bound to frozen (token) material, so a
    witness node carries a substitution that re-instantiates exactly.
    `strip` removes a rename suffix from the substitution's domain."""
    guards = _rule_var_guards(rule)
    fmap: dict[str, Formula] = {}
    cmap: dict[str, ContextExpr] = {}
    names = rule.conclusion.var_names()
    for p in rule.premises:
        names |= p.var_names()
    kinds: dict[str, str] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, AtomVar):
            kinds[f.name] = "formula"
        elif isinstance(f, FormulaVar):
            kinds[f.name] = "formula"
        elif isinstance(f, App):
            for a in f.args:
                walk(a)

    for s in (rule.conclusion,) + rule.premises:
        for _, c in s.zones:
            for f in c.formulas:
                walk(f)
    lookup_f = dict(sub.fmap)
    lookup_c = dict(sub.cmap)
    for name in sorted(names):
        key = name + strip if strip else name
        if name in guards and kinds.get(name) != "formula":
            bound = lookup_c.get(key)
            if bound is None:
                cmap[name] = ContextExpr(
                    (), (Atom(ctx_token_name(key, guards[name])),))
            else:
                cmap[name] = tokenize_context(bound)
        else:
            bound = lookup_f.get(key)
            if bound is None:
                fmap[name] = Atom("_" + key)
            else:
                fmap[name] = tokenize_formula(bound)
    return Substitution(fmap, cmap)


def _search_from(spec: CalculusSpec, goal: Sequent,
                 assumptions: Iterable[Sequent], depth: int,
                 cut_candidates: Iterable[Formula] = ()
                 ) -> Optional[ProofTree]:
    pool = set(assumptions)
    return bounded_search(spec, goal, depth,
                          leaf_accept=lambda s: s in pool,
                          cut_candidates=cut_candidates,
                          leaf_first=True)


def _describe(spec: CalculusSpec, s: Sequent) -> str:
    return print_sequent(s, spec)


# ---------------------------------------------------------------------------
# identity expansion
# ---------------------------------------------------------------------------

def _identity_goal(spec: CalculusSpec, phi: Formula) -> Sequent:
    """Instantiate the identity axiom's shape with phi: strip context
    variables, map positive occurrences of the identity atom to phi and
    negated ones to its dual."""
    rule = spec.rule(spec.identity_rule)
    v = spec.identity_var

    def conv(_zone: str, c: ContextExpr) -> ContextExpr:
        out = []
        for f in c.formulas:
            if isinstance(f, AtomVar) and f.name == v:
                out.append(spec.table.dual_of(phi) if f.neg else phi)
            else:
                out.append(f)
        return ContextExpr((), out)

    return rule.conclusion.map_zones(conv)


def check_identity_expansion(spec: CalculusSpec,
                             depth_bound: int = 2) -> CheckReport:
    """One case per connective: can c(x1..xn) be proved equal to itself
    using identities on strictly smaller formulas only?"""
    ident = spec.identity_rule
    v = spec.identity_var
    cases = []
    for conn in spec.connectives:
        args = tuple(Atom(f"_x{i}") for i in range(1, conn.arity + 1))
        phi = App(conn, args)
        goal = _identity_goal(spec, phi)
        bound = phi.size

        def small_identity(s: Sequent) -> bool:
            pattern = spec.rule(ident).conclusion
            for m in match_sequent(pattern, s, spec.table):
                b = m.fmap.get(v)
                if b is not None and b.size < bound:
                    return True
            return False

        def axiom_ok(rule_name: str, sub: Substitution) -> bool:
            if rule_name != ident:
                return True
            b = sub.fmap.get(v)
            return b is not None and b.size < bound

        found = bounded_search(spec, goal, depth_bound,
                               leaf_accept=small_identity,
                               axiom_filter=axiom_ok)
        desc = (f"identity expansion for {conn.name}:"
                f" goal {_describe(spec, goal)}")
        if found is None:
            cases.append(CaseResult(
                f"identity/{conn.name}", desc, "unknown", (),
                (f"no derivation within depth {depth_bound}",)))
            continue
        notes = ()
        if any(leaf.accepted for leaf in found.open_leaves()):
            notes = ("leaves close by identities on smaller formulas",)
        cases.append(CaseResult(
            f"identity/{conn.name}", desc, "proved",
            (Witness("tree", tree=found),), notes))
    return CheckReport("identity", spec.name,
                       (("depth", str(depth_bound)),), tuple(cases))


# ---------------------------------------------------------------------------
# weakening admissibility
# ---------------------------------------------------------------------------

def _weakening_witness_var(rule: RuleDecl, zone: str) -> tuple[
        Optional[str], str]:
    """A context variable through which an extra zone-`zone` formula can
    be routed: unguarded, occurring once in that conclusion zone and
    nowhere else in the conclusion, and in each premise either absent or
    occurring once in the same zone."""
    concl_occ: dict[str, list[tuple[str, Optional[str]]]] = {}
    for zn, c in rule.conclusion.zones:
        for v in c.vars:
            concl_occ.setdefault(v.name, []).append((zn, v.guard))
    blockers: list[str] = []
    for name in sorted(concl_occ):
        occ = concl_occ[name]
        if len(occ) != 1 or occ[0][0] != zone or occ[0][1] is not None:
            continue
        ok = True
        for i, prem in enumerate(rule.premises):
            spots = [(zn, v.guard) for zn, c in prem.zones
                     for v in c.vars if v.name == name]
            if not spots:
                continue
            if len(spots) > 1 or spots[0][0] != zone or spots[0][1]:
                blockers.append(
                    f"variable {name} blocked at premise {i + 1}")
                ok = False
                break
        if ok:
            return name, ""
    if not any(occ[0][0] == zone for occ in concl_occ.values()
               if len(occ) == 1):
        return None, f"no context variable in conclusion zone {zone}"
    return None, "; ".join(blockers) or \
        f"no unguarded variable threads zone {zone}"


def check_weakening_admissibility(spec: CalculusSpec) -> CheckReport:
    """Syntactic height-preserving criterion, one case per (rule, zone).

    Proved when some context variable can carry an extra formula through
    the rule: premises containing the variable absorb it (induction
    hypothesis), premises without it are untouched.
    """
    cases = []
    for rule in spec.rules:
        for z in spec.zones:
            flag = "declared" if z.weakening else "not declared"
            desc = (f"weakening in zone {z.name} ({flag}) across"
                    f" rule {rule.name}")
            var, reason = _weakening_witness_var(rule, z.name)
            cid = f"weakening/{rule.name}/{z.name}"
            if var is None:
                cases.append(CaseResult(cid, desc, "unknown", (),
                                        (reason,)))
                continue
            witness = _weakening_witness(spec, rule, z.name, var)
            note = (f"extra formula routed through {var}"
                    + ("" if rule.premises else " (axiom, vacuous)"),)
            cases.append(CaseResult(cid, desc, "proved", (witness,), note))
    return CheckReport("weakening", spec.name, (), tuple(cases))


def _weakening_witness(spec: CalculusSpec, rule: RuleDecl, zone: str,
                       var: str) -> Witness:
    base = _full_instantiation(rule, Substitution())
    extra = Atom("_wk")
    enlarged_cmap = dict(base.cmap)
    enlarged_cmap[var] = base.cmap[var].with_formulas((extra,))
    enlarged = Substitution(base.fmap, enlarged_cmap)

    def instance(sub: Substitution) -> ProofTree:
        kids = tuple(ProofTree(subst_apply(sub, p, spec.table))
                     for p in rule.premises)
        return ProofTree(subst_apply(sub, rule.conclusion, spec.table),
                         rule.name, sub, kids, "closed")

    return Witness("pair", before=instance(base), after=instance(enlarged))


# ---------------------------------------------------------------------------
# invertibility
# ---------------------------------------------------------------------------

def _principal_index(s: Sequent, principal: tuple[str, Formula]
                     ) -> Optional[tuple[int, int]]:
    zname, phi = principal
    for zi, (zn, c) in enumerate(s.zones):
        if zn == zname:
            for fi, f in enumerate(c.formulas):
                if f == phi:
                    return (zi, fi)
    return None


_SUFFIX = "′"  # prime, appended when renaming schemas apart


def _renamed(rule: RuleDecl) -> RuleDecl:
    return RuleDecl(rule.name,
                    tuple(rename_apart(p, _SUFFIX) for p in rule.premises),
                    rename_apart(rule.conclusion, _SUFFIX), rule.kind)


def check_invertibility(spec: CalculusSpec, rule_name: str,
                        depth_bound: int = 3) -> CheckReport:
    """Case analysis over the last rule of a derivation of the rule's
    conclusion: in each overlap case, try to recover every premise from
    the last rule's premises (inductive hypothesis plus re-application)."""
    rule = spec.rule(rule_name)
    if rule.kind != "logical" or rule.principal is None:
        raise NoPrincipal(f"{rule_name} is not a logical rule with a"
                          " principal formula")
    principal_idx = _principal_index(rule.conclusion, rule.principal)
    cases = []
    for pi, premise in enumerate(rule.premises):
        for other in spec.rules:
            other_r = _renamed(other)
            other_principal_idx = (
                _principal_index(other_r.conclusion,
                                 (other.principal[0],
                                  rename_apart_formula(other.principal[1])))
                if other.principal else None)
            ucs = unify_cases(other_r.conclusion, rule.conclusion,
                              spec.table)
            for k, case in enumerate(ucs):
                cid = f"invert/{rule_name}/p{pi + 1}/{other.name}/{k}"
                overlap = (other_principal_idx is not None
                           and (other_principal_idx, principal_idx)
                           in case.pairs)
                end = tokenize_sequent(
                    subst_apply(case.sub2, rule.conclusion, spec.table))
                target = tokenize_sequent(
                    subst_apply(case.sub2, premise, spec.table))
                other_prems = [
                    tokenize_sequent(subst_apply(case.sub1, q, spec.table))
                    for q in other_r.premises]
                assumptions = list(other_prems)
                if not overlap:
                    for q in other_prems:
                        for m in match_sequent(rule.conclusion, q,
                                               spec.table):
                            assumptions.append(tokenize_sequent(
                                subst_apply(m, premise, spec.table)))
                cands: list[Formula] = []
                if other.kind == "cut":
                    desc_cut = validate_cut(spec, other.name)
                    cands = [Atom("_" + desc_cut.cut_var + _SUFFIX)]
                found = _search_from(spec, target, assumptions,
                                     depth_bound, cands)
                shape = "principal overlap" if overlap else "independent"
                desc = (f"premise {pi + 1} of {rule_name} when the last"
                        f" rule is {other.name} ({shape});"
                        f" end-sequent {_describe(spec, end)}")
                if found is None:
                    cases.append(CaseResult(
                        cid, desc, "unknown", (),
                        ("premise not recovered within depth"
                         f" {depth_bound}",)))
                else:
                    cases.append(CaseResult(
                        cid, desc, "proved", (Witness("tree", tree=found),)))
    return CheckReport("invertibility", spec.name,
                       (("rule", rule_name), ("depth", str(depth_bound))),
                       tuple(cases))


def rename_apart_formula(f: Formula, suffix: str = _SUFFIX) -> Formula:
    if isinstance(f, AtomVar):
        return AtomVar(f.name + suffix, f.neg)
    if isinstance(f, FormulaVar):
        return FormulaVar(f.name + suffix, f.dual)
    if isinstance(f, App):
        return App(f.conn, tuple(rename_apart_formula(a, suffix)
                                 for a in f.args))
    return f


def rename_apart_formula_with(f: Formula, suffix: str) -> Formula:
    return rename_apart_formula(f, suffix)


# ---------------------------------------------------------------------------
# permutability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _PermuteCase:
    end: Sequent
    mid: Sequent
    assumptions: tuple[Sequent, ...]
    before: ProofTree
    description: str


def _permute_configurations(spec: CalculusSpec, up: RuleDecl,
                            down: RuleDecl) -> list[tuple[int, _PermuteCase]]:
    """Configurations: `up` applied at the root, `down` immediately above
    deriving one of up's premises, with down's principal surviving as a
    side formula (it lands inside a context variable of the premise).
    Pairings of down's principal with a premise formula are
    producer-consumer configurations, not permutation cases."""
    down_r = _renamed(down)
    down_principal_idx = (
        _principal_index(down_r.conclusion,
                         (down.principal[0],
                          rename_apart_formula(down.principal[1])))
        if down.principal else None)
    out = []
    for j, prem in enumerate(up.premises):
        for case in unify_cases(down_r.conclusion, prem, spec.table):
            if down_principal_idx is not None and any(
                    a == down_principal_idx for a, _ in case.pairs):
                continue
            out.append((j, _build_permute_case(
                spec, up, down, down_r, j, case)))
    return out


def _build_permute_case(spec: CalculusSpec, up: RuleDecl, down: RuleDecl,
                        down_r: RuleDecl, j: int,
                        case: UnifyCase) -> _PermuteCase:
    end = tokenize_sequent(
        subst_apply(case.sub2, up.conclusion, spec.table))
    mid = tokenize_sequent(
        subst_apply(case.sub2, up.premises[j], spec.table))
    down_prems = [tokenize_sequent(subst_apply(case.sub1, q, spec.table))
                  for q in down_r.premises]
    side_prems = [tokenize_sequent(subst_apply(case.sub2, q, spec.table))
                  for k, q in enumerate(up.premises) if k != j]
    up_sub = _full_instantiation(up, case.sub2)
    down_sub = _full_instantiation(down, case.sub1, strip=_SUFFIX)
    mid_node = ProofTree(mid, down.name, down_sub,
                         tuple(ProofTree(q) for q in down_prems), "closed")
    kids: list[ProofTree] = []
    it = iter(side_prems)
    for k in range(len(up.premises)):
        kids.append(mid_node if k == j else ProofTree(next(it)))
    before = ProofTree(end, up.name, up_sub, tuple(kids), "closed")
    desc = (f"{down.name} above premise {j + 1} of {up.name};"
            f" end-sequent {_describe(spec, end)}")
    return _PermuteCase(end, mid, tuple(down_prems + side_prems),
                        before, desc)


def _cut_var_tokens(spec: CalculusSpec, *rules: RuleDecl) -> list[Formula]:
    toks = []
    for r in rules:
        if r.kind == "cut":
            d = validate_cut(spec, r.name)
            toks.append(Atom("_" + d.cut_var))
            toks.append(Atom("_" + d.cut_var + _SUFFIX))
    return toks


def _search_reordered(spec: CalculusSpec, pc: _PermuteCase, down: RuleDecl,
                      depth_bound: int,
                      cut_candidates: Iterable[Formula]
                      ) -> Optional[ProofTree]:
    """Witness with `down` applied at the root and everything else found
    by bounded search from the configuration's open premises."""
    cands = tuple(cut_candidates)
    if down.kind == "cut":
        apps = _cut_applications(spec, down, pc.end, cands)
    else:
        apps = enumerate_applications(spec, down.name, pc.end)
    for app in apps:
        kids = []
        for prem in app.premises:
            sub = _search_from(spec, prem, pc.assumptions,
                               depth_bound - 1, cands)
            if sub is None:
                break
            kids.append(sub)
        else:
            return ProofTree(pc.end, down.name, app.substitution,
                             tuple(kids), "closed")
    return None


def check_permutability(spec: CalculusSpec, rule_up: str, rule_down: str,
                        depth_bound: int = 2) -> CheckReport:
    """Can `rule_up` move above `rule_down`?  Enumerates configurations
    with rule_up at the root and rule_down immediately above it, then
    searches for a derivation of the same end-sequent from the same open
    premises with rule_down at the root."""
    up = spec.rule(rule_up)
    down = spec.rule(rule_down)
    configs = _permute_configurations(spec, up, down)
    cands = _cut_var_tokens(spec, up, down)
    cases = []
    for k, (j, pc) in enumerate(configs):
        cid = f"permute/{rule_up}-over-{rule_down}/p{j + 1}/{k}"
        found = _search_reordered(spec, pc, down, depth_bound, cands)
        if found is None:
            cases.append(CaseResult(
                cid, pc.description, "unknown",
                (Witness("pair", before=pc.before, after=None),),
                (f"no reordering within depth {depth_bound}",)))
        else:
            cases.append(CaseResult(
                cid, pc.description, "proved",
                (Witness("pair", before=pc.before, after=found),)))
    notes = ()
    if not configs:
        notes = (f"no interaction: {rule_down} never occurs immediately"
                 f" above {rule_up} with an independent principal",)
    return CheckReport("permutability", spec.name,
                       (("rule_up", rule_up), ("rule_down", rule_down),
                        ("depth", str(depth_bound))),
                       tuple(cases), notes)


# ---------------------------------------------------------------------------
# cut elimination
# ---------------------------------------------------------------------------

def _subformulas(f: Formula) -> list[Formula]:
    out = []
    if isinstance(f, App):
        for a in f.args:
            out.append(a)
            out.extend(_subformulas(a))
    return out


def _blocked_zone(spec: CalculusSpec, other: RuleDecl,
                  cut_premise: Sequent) -> Optional[str]:
    """Zone where `other`'s conclusion leaves no room for the residue a
    cut premise carries there (promotion-style emptiness constraint)."""
    for (zn, c_other), (_, c_cut) in zip(other.conclusion.zones,
                                         cut_premise.zones):
        if c_other.formulas and not c_other.vars and c_cut.vars:
            return zn
    return None


def check_cut_elimination(spec: CalculusSpec, cut_rule: str,
                          depth_bound: int = 4) -> CheckReport:
    """Three case families: commutative (push the cut above the last
    rule of a premise), principal (replace a doubly-principal cut by
    cuts on strictly smaller formulas), atomic (cuts against the
    identity axiom disappear)."""
    desc = validate_cut(spec, cut_rule)
    cut = spec.rule(cut_rule)
    cases: list[CaseResult] = []
    notes: list[str] = []

    commutative = _commutative_family(spec, cut, desc, depth_bound)
    principal = _principal_family(spec, cut, desc, depth_bound)
    atomic = _atomic_family(spec, cut, desc)
    for name, fam in (("commutative", commutative),
                      ("principal", principal), ("atomic", atomic)):
        proved = sum(1 for c in fam if c.status == "proved")
        notes.append(f"{name}: {proved}/{len(fam)} proved")
        cases.extend(fam)
    return CheckReport("cut", spec.name,
                       (("rule", cut_rule), ("depth", str(depth_bound))),
                       tuple(cases), tuple(notes))


def _commutative_family(spec: CalculusSpec, cut: RuleDecl,
                        desc: CutDescriptor,
                        depth_bound: int) -> list[CaseResult]:
    cases = []
    for other in spec.rules:
        if other.kind == "axiom":
            continue
        other_r = _renamed(other)
        other_principal_idx = (
            _principal_index(other_r.conclusion,
                             (other.principal[0],
                              rename_apart_formula(other.principal[1])))
            if other.principal else None)
        for j, prem in enumerate(cut.premises):
            genuine = []
            for case in unify_cases(other_r.conclusion, prem, spec.table):
                if other_principal_idx is not None and any(
                        a == other_principal_idx for a, _ in case.pairs):
                    continue  # cut formula principal in `other`
                genuine.append(case)
            if not genuine:
                bz = _blocked_zone(spec, other, prem)
                if bz is not None:
                    cases.append(CaseResult(
                        f"cut/commutative/p{j + 1}/{other.name}",
                        f"cut premise {j + 1} derived by {other.name}",
                        "unknown", (),
                        (f"zone {bz} of {other.name} admits no residue"
                         " beside its principal; the cut cannot permute"
                         " above it, manual argument required",)))
                continue
            cands = _cut_var_tokens(spec, cut)
            for k, case in enumerate(genuine):
                pc = _build_permute_case(spec, cut, other, other_r, j, case)
                cid = f"cut/commutative/p{j + 1}/{other.name}/{k}"
                # one cut per branch covers the plain reduct; a second
                # is allowed for contraction-style duplication
                found = _search_reordered(spec, pc, other, 2, cands)
                if found is None and depth_bound >= 3:
                    found = _search_reordered(spec, pc, other, 3, cands)
                if found is None:
                    cases.append(CaseResult(
                        cid, pc.description, "unknown",
                        (Witness("pair", before=pc.before, after=None),),
                        (f"no reordering within depth {depth_bound}",)))
                else:
                    cases.append(CaseResult(
                        cid, pc.description, "proved",
                        (Witness("pair", before=pc.before, after=found),)))
    return cases


def _intro_rules(spec: CalculusSpec, zone: str) -> list[RuleDecl]:
    out = []
    for r in spec.rules:
        if r.kind in ("logical", "axiom") and r.principal is not None \
                and r.principal[0] == zone:
            out.append(r)
    return out


def _principal_family(spec: CalculusSpec, cut: RuleDecl,
                      desc: CutDescriptor,
                      depth_bound: int) -> list[CaseResult]:
    (_, zone0, dual0), (_, zone1, dual1) = desc.occurrences
    cases = []
    left_suffix, right_suffix = "ₗ", "ᵣ"
    for rule_a in _intro_rules(spec, zone0):
        for rule_b in _intro_rules(spec, zone1):
            ca = rule_a.principal[1].conn
            cb = rule_b.principal[1].conn
            if dual0 == dual1:
                if ca.name != cb.name:
                    continue
            else:
                if ca.dual != cb.name:
                    continue
            case = _build_principal_case(spec, cut, desc, rule_a, rule_b,
                                         left_suffix, right_suffix)
            if case is None:
                continue
            end, assumptions, before, phi = case
            cands = sorted({g for f in (phi,) for g in _subformulas(f)},
                           key=lambda f: f.key())
            duals = []
            for c in cands:
                try:
                    duals.append(spec.table.dual_of(c))
                except MissingDualityTable:
                    pass
            cands = sorted(set(cands) | set(duals), key=lambda f: f.key())
            cid = f"cut/principal/{ca.name}/{rule_a.name}-{rule_b.name}"
            found = _search_from(spec, end, assumptions, depth_bound,
                                 cands)
            d = (f"doubly principal cut on {ca.name}: {rule_a.name}"
                 f" meets {rule_b.name}; end-sequent"
                 f" {_describe(spec, end)}")
            if found is None:
                cases.append(CaseResult(
                    cid, d, "unknown",
                    (Witness("pair", before=before, after=None),),
                    ("no reduction to smaller cuts within depth"
                     f" {depth_bound}",)))
            else:
                cases.append(CaseResult(
                    cid, d, "proved",
                    (Witness("pair", before=before, after=found),)))
    return cases


def _rename_rule(rule: RuleDecl, suffix: str) -> RuleDecl:
    return RuleDecl(rule.name,
                    tuple(rename_apart(p, suffix) for p in rule.premises),
                    rename_apart(rule.conclusion, suffix), rule.kind)


def _build_principal_case(spec: CalculusSpec, cut: RuleDecl,
                          desc: CutDescriptor, rule_a: RuleDecl,
                          rule_b: RuleDecl, sa: str, sb: str):
    """Assemble the doubly-principal configuration by unifying each cut
    premise with the corresponding introduction rule's conclusion, the
    cut formula against the principal."""
    a_r = _rename_rule(rule_a, sa)
    b_r = _rename_rule(rule_b, sb)
    cut_r = _rename_rule(cut, "ᶜ")
    cv = desc.cut_var + "ᶜ"
    occ_a = desc.occurrences[0]
    occ_b = desc.occurrences[1]

    prem0 = cut_r.premises[0]
    a_principal_idx = _principal_index(
        a_r.conclusion, (rule_a.principal[0],
                         rename_apart_formula_with(rule_a.principal[1], sa)))
    cv_idx0 = _formula_var_index(prem0, cv)
    chosen = None
    for case in unify_cases(prem0, a_r.conclusion, spec.table):
        if (cv_idx0, a_principal_idx) in case.pairs:
            chosen = case
            break
    if chosen is None:
        return None
    phi_binding = chosen.sub1.fmap.get(cv)
    if phi_binding is None:
        return None
    prem1 = subst_apply(chosen.sub1, cut_r.premises[1], spec.table)
    b_principal_idx = _principal_index(
        b_r.conclusion, (rule_b.principal[0],
                         rename_apart_formula_with(rule_b.principal[1], sb)))
    phi1 = _nonvar_formula_index(prem1)
    chosen2 = None
    for case in unify_cases(prem1, b_r.conclusion, spec.table):
        if phi1 is not None and (phi1, b_principal_idx) in case.pairs:
            chosen2 = case
            break
    if chosen2 is None:
        return None

    def inst(s: Sequent) -> Sequent:
        s = subst_apply(chosen.sub1, s, spec.table)
        s = subst_apply(chosen2.sub1, s, spec.table)
        return tokenize_sequent(s)

    def inst_a(s: Sequent) -> Sequent:
        s = subst_apply(chosen.sub2, s, spec.table)
        s = subst_apply(chosen2.sub1, s, spec.table)
        return tokenize_sequent(s)

    def inst_b(s: Sequent) -> Sequent:
        return tokenize_sequent(subst_apply(chosen2.sub2, s, spec.table))

    end = inst(cut_r.conclusion)
    a_prems = [inst_a(p) for p in a_r.premises]
    b_prems = [inst_b(p) for p in b_r.premises]
    phi = tokenize_formula(
        subst_apply(chosen2.sub1, phi_binding, spec.table))
    # witness for the "before" configuration
    left_node = ProofTree(inst(cut_r.premises[0]), rule_a.name,
                          _make_witness_sub(spec, rule_a, a_r, inst_a),
                          tuple(ProofTree(p) for p in a_prems), "closed")
    right_node = ProofTree(inst(prem1), rule_b.name,
                           _make_witness_sub(spec, rule_b, b_r, inst_b),
                           tuple(ProofTree(p) for p in b_prems), "closed")
    cut_sub = _cut_witness_sub(spec, cut, cut_r, inst, phi)
    before = ProofTree(end, cut.name, cut_sub,
                       (left_node, right_node), "closed")
    return end, a_prems + b_prems, before, phi


def _make_witness_sub(spec: CalculusSpec, rule: RuleDecl,
                      renamed: RuleDecl, inst) -> Substitution:
    """Substitution over the rule's original variable names matching the
    instantiated configuration, for check_proof on witness nodes."""
    fmap: dict[str, Formula] = {}
    cmap: dict[str, ContextExpr] = {}
    target = inst(renamed.conclusion)
    for m in match_sequent(rule.conclusion, target, spec.table):
        candidate = m
        prems = [subst_apply(m, p, spec.table) for p in rule.premises]
        if prems == [inst(q) for q in renamed.premises]:
            return candidate
    return Substitution(fmap, cmap)


def _cut_witness_sub(spec: CalculusSpec, cut: RuleDecl, cut_r: RuleDecl,
                     inst, phi: Formula) -> Substitution:
    target = inst(cut_r.conclusion)
    prems = [inst(p) for p in cut_r.premises]
    d = validate_cut(spec, cut.name)
    for m in match_sequent(cut.conclusion, target, spec.table):
        m2 = m.bind_formula(d.cut_var, phi)
        if [subst_apply(m2, p, spec.table) for p in cut.premises] == prems:
            return m2
    return Substitution()


def _formula_var_index(s: Sequent, name: str) -> Optional[tuple[int, int]]:
    for zi, (_, c) in enumerate(s.zones):
        for fi, f in enumerate(c.formulas):
            if isinstance(f, FormulaVar) and f.name == name:
                return (zi, fi)
    return None


def _nonvar_formula_index(s: Sequent) -> Optional[tuple[int, int]]:
    for zi, (_, c) in enumerate(s.zones):
        for fi, f in enumerate(c.formulas):
            if isinstance(f, App):
                return (zi, fi)
    return None


def _sequent_includes(big: Sequent, small: Sequent) -> bool:
    """Zone-wise multiset inclusion (big may add side formulas)."""
    for (zn, bc), (_, sc) in zip(big.zones, small.zones):
        pool = list(bc.formulas)
        for f in sc.formulas:
            try:
                pool.remove(f)
            except ValueError:
                return False
    return True


def _atomic_family(spec: CalculusSpec, cut: RuleDecl,
                   desc: CutDescriptor) -> list[CaseResult]:
    """Cut against the identity axiom on an atomic cut formula: decided
    exactly, so failures here are real failures."""
    ident = spec.rule(spec.identity_rule)
    cases = []
    for j in (0, 1):
        prem = cut.premises[j]
        ident_r = _renamed(ident)
        k = 0
        for case in unify_cases(prem, ident_r.conclusion, spec.table):
            binding = case.sub1.fmap.get(desc.cut_var)
            if isinstance(binding, App):
                continue  # compound cut formula: principal family's job
            k += 1
            cid = f"cut/atomic/p{j + 1}/{k}"
            end = tokenize_sequent(
                subst_apply(case.sub1, cut.conclusion, spec.table))
            other = tokenize_sequent(
                subst_apply(case.sub1, cut.premises[1 - j], spec.table))
            ident_inst = tokenize_sequent(
                subst_apply(case.sub1, prem, spec.table))
            cut_f = binding if binding is not None \
                else FormulaVar(desc.cut_var)
            d = (f"cut premise {j + 1} closed by {ident.name};"
                 f" end-sequent {_describe(spec, end)}")
            if _sequent_includes(end, other):
                surplus = end.formula_count() - other.formula_count()
                note = ("cut disappears: conclusion is the other premise"
                        " with the identity's side contexts merged",)
                if surplus:
                    note = note + (
                        f"{surplus} residual side formula(s) absorbed by"
                        " weakening admissibility",)
                cases.append(CaseResult(
                    cid, d, "proved",
                    (Witness("pair",
                             before=_atomic_before(spec, cut, ident,
                                                   case, j, end, other,
                                                   ident_inst, cut_f),
                             after=ProofTree(other)),),
                    note))
                continue
            closing = match_sequent(ident.conclusion, end, spec.table)
            if closing:
                after = ProofTree(end, ident.name, closing[0], (), "closed")
                cases.append(CaseResult(
                    cid, d, "proved",
                    (Witness("pair",
                             before=_atomic_before(spec, cut, ident, case,
                                                   j, end, other,
                                                   ident_inst, cut_f),
                             after=after),),
                    ("conclusion itself closes by the identity axiom",)))
            else:
                cases.append(CaseResult(
                    cid, d, "failed", (),
                    ("conclusion neither absorbs the other premise nor"
                     " closes by identity",)))
    return cases


def _atomic_before(spec: CalculusSpec, cut: RuleDecl, ident: RuleDecl,
                   case: UnifyCase, j: int, end: Sequent, other: Sequent,
                   ident_inst: Sequent, cut_f: Formula) -> ProofTree:
    ident_sub = None
    for m in match_sequent(ident.conclusion, ident_inst, spec.table):
        ident_sub = m
        break
    ident_node = ProofTree(ident_inst, ident.name, ident_sub, (), "closed") \
        if ident_sub is not None else ProofTree(ident_inst)
    other_node = ProofTree(other)
    kids = (ident_node, other_node) if j == 0 else (other_node, ident_node)
    d = validate_cut(spec, cut.name)
    cut_sub = None
    for m in match_sequent(cut.conclusion, end, spec.table):
        m2 = m.bind_formula(d.cut_var, tokenize_formula(cut_f))
        prems = [subst_apply(m2, p, spec.table) for p in cut.premises]
        expected = [ident_inst, other] if j == 0 else [other, ident_inst]
        if prems == expected:
            cut_sub = m2
            break
    return ProofTree(end, cut.name, cut_sub, kids, "closed")
