"""Proof trees, rule application, sessions with undo, bounded search."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .calculus import CalculusSpec, RuleDecl, validate_cut
from .matching import match_sequent
from .subst import Substitution, subst_apply
from .terms import (
    App,
    Atom,
    AtomVar,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    GuardViolation,
    Sequent,
    SequiturError,
    ctx_token_name,
)


class UnknownRule(SequiturError):
    pass


class StaleGoal(SequiturError):
    pass


class IllegalApplication(SequiturError):
    pass


@dataclass(frozen=True)
class Application:
    """One way a rule instantiates against a goal."""

    rule: str
    substitution: Substitution
    premises: tuple[Sequent, ...]


@dataclass(frozen=True)
class ProofTree:
    sequent: Sequent
    rule: Optional[str] = None
    substitution: Optional[Substitution] = None
    children: tuple["ProofTree", ...] = ()
    status: str = "open"  # "open" | "closed"
    accepted: bool = False  # open leaf blessed by a leaf predicate

    def open_leaves(self) -> list["ProofTree"]:
        if self.status == "open":
            return [self]
        out: list[ProofTree] = []
        for c in self.children:
            out.extend(c.open_leaves())
        return out

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)


def enumerate_applications(spec: CalculusSpec, rule: str,
                           goal: Sequent) -> list[Application]:
    """All ways `rule` concludes `goal`, in the kernel's match order.

    A cut rule's applications leave the cut variable free in the
    premises; such applications cannot be played into a session without
    instantiating the variable first.
    """
    if not spec.has_rule(rule):
        raise UnknownRule(rule)
    decl = spec.rule(rule)
    out = []
    for s in match_sequent(decl.conclusion, goal, spec.table):
        premises = tuple(subst_apply(s, p, spec.table)
                         for p in decl.premises)
        out.append(Application(rule, s, premises))
    return out


def _cut_applications(spec: CalculusSpec, decl: RuleDecl, goal: Sequent,
                      candidates: Iterable[Formula]) -> list[Application]:
    desc = validate_cut(spec, decl.name)
    out = []
    for s in match_sequent(decl.conclusion, goal, spec.table):
        for cand in candidates:
            s2 = s.bind_formula(desc.cut_var, cand)
            premises = tuple(subst_apply(s2, p, spec.table)
                             for p in decl.premises)
            out.append(Application(decl.name, s2, premises))
    return out


def all_applications(spec: CalculusSpec, goal: Sequent,
                     cut_candidates: Iterable[Formula] = ()
                     ) -> list[Application]:
    """Applications of every rule in declaration order.  Cut rules are
    only offered when explicit cut-formula candidates are supplied."""
    cands = tuple(cut_candidates)
    out: list[Application] = []
    for decl in spec.rules:
        if decl.kind == "cut":
            if cands:
                out.extend(_cut_applications(spec, decl, goal, cands))
            continue
        out.extend(enumerate_applications(spec, decl.name, goal))
    return out


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SessionState:
    tree: ProofTree
    goals: tuple[tuple[str, tuple[int, ...]], ...]  # (goalId, path)
    next_goal: int

    def goal_path(self, goal_id: str) -> Optional[tuple[int, ...]]:
        for gid, path in self.goals:
            if gid == goal_id:
                return path
        return None


@dataclass(frozen=True)
class ProofSession:
    calculus: CalculusSpec
    history: tuple[SessionState, ...]

    @property
    def state(self) -> SessionState:
        return self.history[-1]

    @property
    def root(self) -> ProofTree:
        return self.state.tree

    @property
    def open_goals(self) -> tuple[tuple[str, Sequent], ...]:
        st = self.state
        return tuple((gid, _subtree(st.tree, path).sequent)
                     for gid, path in st.goals)

    @property
    def complete(self) -> bool:
        return not self.state.goals


def new_session(spec: CalculusSpec, goal: Sequent) -> ProofSession:
    if not goal.is_ground():
        raise IllegalApplication("session goals must be concrete")
    state = SessionState(ProofTree(goal), (("g0", ()),), 1)
    return ProofSession(spec, (state,))


def _subtree(tree: ProofTree, path: tuple[int, ...]) -> ProofTree:
    for i in path:
        tree = tree.children[i]
    return tree


def _replace_at(tree: ProofTree, path: tuple[int, ...],
                new: ProofTree) -> ProofTree:
    if not path:
        return new
    i = path[0]
    kids = list(tree.children)
    kids[i] = _replace_at(kids[i], path[1:], new)
    return replace(tree, children=tuple(kids))


def apply_to_goal(session: ProofSession, goal_id: str,
                  app: Application) -> ProofSession:
    """Close an open goal with an application; premises become fresh
    goals.  The previous state stays on the history stack."""
    st = session.state
    path = st.goal_path(goal_id)
    if path is None:
        raise StaleGoal(goal_id)
    node = _subtree(st.tree, path)
    legal = enumerate_applications(session.calculus, app.rule, node.sequent)
    if app not in legal:
        raise IllegalApplication(
            f"{app.rule} does not apply to {node.sequent!r} this way")
    if any(not p.is_ground() for p in app.premises):
        raise IllegalApplication(
            f"{app.rule}: premises leave schematic variables free")
    children = tuple(ProofTree(p) for p in app.premises)
    closed = ProofTree(node.sequent, app.rule, app.substitution,
                       children, "closed")
    tree = _replace_at(st.tree, path, closed)
    goals = [(gid, p) for gid, p in st.goals if gid != goal_id]
    nxt = st.next_goal
    for i in range(len(children)):
        goals.append((f"g{nxt}", path + (i,)))
        nxt += 1
    new_state = SessionState(tree, tuple(goals), nxt)
    return ProofSession(session.calculus, session.history + (new_state,))


def undo(session: ProofSession) -> ProofSession:
    """Drop the newest state; at the initial state this is a no-op."""
    if len(session.history) <= 1:
        return session
    return ProofSession(session.calculus, session.history[:-1])


# ---------------------------------------------------------------------------
# proof checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofCheck:
    ok: bool
    diagnostics: tuple[str, ...] = ()


def check_proof(spec: CalculusSpec, tree: ProofTree,
                allow_open: bool = False) -> ProofCheck:
    """Re-validate every node against its rule instance.  Accepts iff
    all closed nodes check out and (unless allow_open) no goal is open."""
    problems: list[str] = []

    def walk(node: ProofTree, path: tuple[int, ...]) -> None:
        if problems:
            return
        where = "/".join(map(str, path)) or "root"
        if node.status == "open":
            if node.children:
                problems.append(f"{where}: open node with children")
            elif not allow_open:
                problems.append(f"{where}: OpenGoal {node.sequent!r}")
            return
        if node.rule is None or node.substitution is None:
            problems.append(f"{where}: closed node lacks a rule instance")
            return
        if not spec.has_rule(node.rule):
            problems.append(f"{where}: unknown rule {node.rule}")
            return
        decl = spec.rule(node.rule)
        try:
            concl = subst_apply(node.substitution, decl.conclusion,
                                spec.table)
            premises = [subst_apply(node.substitution, p, spec.table)
                        for p in decl.premises]
        except GuardViolation as e:
            problems.append(f"{where}: {e}")
            return
        if concl != node.sequent:
            problems.append(
                f"{where}: {node.rule} instance concludes {concl!r},"
                f" node carries {node.sequent!r}")
            return
        if len(premises) != len(node.children):
            problems.append(
                f"{where}: {node.rule} needs {len(premises)} premises,"
                f" node has {len(node.children)} children")
            return
        for i, (prem, child) in enumerate(zip(premises, node.children)):
            if prem != child.sequent:
                problems.append(
                    f"{where}: premise {i + 1} of {node.rule} is {prem!r},"
                    f" child carries {child.sequent!r}")
                return
        for i, child in enumerate(node.children):
            walk(child, path + (i,))

    walk(tree, ())
    return ProofCheck(not problems, tuple(problems))


# ---------------------------------------------------------------------------
# bounded search
# ---------------------------------------------------------------------------

def bounded_search(spec: CalculusSpec, goal: Sequent, depth_bound: int,
                   leaf_accept: Optional[Callable[[Sequent], bool]] = None,
                   *,
                   cut_candidates: Iterable[Formula] = (),
                   axiom_filter: Optional[
                       Callable[[str, Substitution], bool]] = None,
                   leaf_first: bool = False,
                   ) -> Optional[ProofTree]:
    """Iterative-deepening proof search.

    The bound counts non-axiom rule applications along each branch.
    Leaves either close by an axiom or satisfy `leaf_accept` (left open
    but marked accepted).  A branch repeating a sequent is pruned.
    Deterministic: rules in declaration order, matches in kernel order,
    first success wins.  With `leaf_first`, accepted leaves short-circuit
    rule application (assumption-style searches); otherwise closing by a
    rule is preferred.
    """
    cands = tuple(cut_candidates)

    apps_cache: dict[tuple[str, Sequent], list[Application]] = {}

    def rule_apps(decl: RuleDecl, g: Sequent) -> list[Application]:
        key = (decl.name, g)
        got = apps_cache.get(key)
        if got is None:
            if decl.kind == "cut":
                got = _cut_applications(spec, decl, g, cands)
            else:
                got = enumerate_applications(spec, decl.name, g)
            apps_cache[key] = got
        return got

    def attempt(g: Sequent, remaining: int,
                branch: frozenset) -> Optional[ProofTree]:
        if g in branch:
            return None
        if leaf_first and leaf_accept is not None and leaf_accept(g):
            return ProofTree(g, None, None, (), "open", accepted=True)
        branch2 = branch | {g}
        for decl in spec.rules:
            if decl.premises and remaining == 0:
                continue
            if decl.kind == "cut" and not cands:
                continue
            for app in rule_apps(decl, g):
                if not app.premises:
                    if axiom_filter is not None \
                            and not axiom_filter(app.rule, app.substitution):
                        continue
                    return ProofTree(g, app.rule, app.substitution,
                                     (), "closed")
                kids = []
                for prem in app.premises:
                    sub = attempt(prem, remaining - 1, branch2)
                    if sub is None:
                        break
                    kids.append(sub)
                else:
                    return ProofTree(g, app.rule, app.substitution,
                                     tuple(kids), "closed")
        if not leaf_first and leaf_accept is not None and leaf_accept(g):
            return ProofTree(g, None, None, (), "open", accepted=True)
        return None

    for d in range(depth_bound + 1):
        found = attempt(goal, d, frozenset())
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# schematic mode: freeze variables into inert atoms
# ---------------------------------------------------------------------------

def tokenize_formula(f: Formula) -> Formula:
    """Formula/atom variables become distinct fresh atoms ("_A" for A)."""
    if isinstance(f, AtomVar):
        return Atom("_" + f.name, f.neg)
    if isinstance(f, FormulaVar):
        return Atom("_" + f.name, f.dual)
    if isinstance(f, App):
        return App(f.conn, tuple(tokenize_formula(a) for a in f.args))
    return f


def tokenize_context(c: ContextExpr) -> ContextExpr:
    """Context variables become inert marker atoms that only context
    variables of a compatible guard can absorb."""
    toks = [Atom(ctx_token_name(v.name, v.guard)) for v in c.vars]
    return ContextExpr((), [tokenize_formula(f) for f in c.formulas] + toks)


def tokenize_sequent(s: Sequent) -> Sequent:
    return s.map_zones(lambda _n, c: tokenize_context(c))
