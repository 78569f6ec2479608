import random

import pytest

from sequitur.calculus import load_builtin, parse_goal
from sequitur.engine import (
    IllegalApplication,
    StaleGoal,
    UnknownRule,
    all_applications,
    apply_to_goal,
    bounded_search,
    check_proof,
    enumerate_applications,
    new_session,
    tokenize_sequent,
    undo,
)
from sequitur.engine import ProofTree
from sequitur.subst import Substitution, subst_apply
from sequitur.terms import Atom, ContextExpr

from oracles import BFSProver, sequent_family


@pytest.fixture(scope="module")
def lk():
    return load_builtin("lk")


@pytest.fixture(scope="module")
def ll():
    return load_builtin("ll")


def test_enumerate_tensor_four_ways(ll):
    apps = enumerate_applications(ll, "tensorR",
                                  parse_goal("|- ; p, q, p tensor q", ll))
    assert len(apps) == 4
    for a in apps:
        assert len(a.premises) == 2


def test_enumerate_no_principal(lk):
    assert enumerate_applications(lk, "andR", parse_goal("p |- q", lk)) == []


def test_enumerate_axiom(lk):
    apps = enumerate_applications(lk, "init", parse_goal("p, q |- p", lk))
    assert len(apps) == 1
    assert apps[0].premises == ()


def test_enumerate_unknown_rule(lk):
    with pytest.raises(UnknownRule):
        enumerate_applications(lk, "nope", parse_goal("p |- p", lk))


def test_apply_creates_goals(lk):
    s = new_session(lk, parse_goal("p |- p and p", lk))
    (gid, goal), = s.open_goals
    app = enumerate_applications(lk, "andR", goal)[0]
    s2 = apply_to_goal(s, gid, app)
    assert [g for g, _ in s2.open_goals] == ["g1", "g2"]
    assert all(q == parse_goal("p |- p", lk) for _, q in s2.open_goals)


def test_apply_axiom_completes(lk):
    s = new_session(lk, parse_goal("p |- p", lk))
    app = enumerate_applications(lk, "init", parse_goal("p |- p", lk))[0]
    s2 = apply_to_goal(s, "g0", app)
    assert s2.complete
    assert check_proof(lk, s2.root).ok


def test_apply_stale_goal_after_undo(lk):
    s = new_session(lk, parse_goal("p |- p and p", lk))
    app = enumerate_applications(lk, "andR", parse_goal("p |- p and p",
                                                        lk))[0]
    s2 = apply_to_goal(s, "g0", app)
    initapp = enumerate_applications(lk, "init", parse_goal("p |- p", lk))[0]
    s3 = apply_to_goal(s2, "g1", initapp)
    back = undo(s3)
    with pytest.raises(StaleGoal):
        apply_to_goal(undo(back), "g1", initapp)


def test_apply_illegal_application(lk):
    s = new_session(lk, parse_goal("p |- p and p", lk))
    foreign = enumerate_applications(lk, "init", parse_goal("p |- p", lk))[0]
    with pytest.raises(IllegalApplication):
        apply_to_goal(s, "g0", foreign)


def test_undo_restores_state(lk):
    s = new_session(lk, parse_goal("p |- p and p", lk))
    app = enumerate_applications(lk, "andR", parse_goal("p |- p and p",
                                                        lk))[0]
    s2 = apply_to_goal(s, "g0", app)
    assert undo(s2).state == s.state
    assert undo(s).state == s.state  # no-op at initial state
    s3 = apply_to_goal(s2, "g1", enumerate_applications(
        lk, "init", parse_goal("p |- p", lk))[0])
    assert undo(undo(s3)).state == s.state


def test_goal_ids_stable_across_unrelated_edits(lk):
    s = new_session(lk, parse_goal("p |- p and p", lk))
    app = enumerate_applications(lk, "andR", parse_goal("p |- p and p",
                                                        lk))[0]
    s2 = apply_to_goal(s, "g0", app)
    initapp = enumerate_applications(lk, "init", parse_goal("p |- p", lk))[0]
    s3 = apply_to_goal(s2, "g1", initapp)
    assert [g for g, _ in s3.open_goals] == ["g2"]


def test_check_proof_accepts_hand_built(lk):
    tree = bounded_search(lk, parse_goal("p |- p and p", lk), 2)
    assert tree is not None
    assert check_proof(lk, tree).ok


def test_check_proof_rejects_mutation(lk):
    tree = bounded_search(lk, parse_goal("p |- p and p", lk), 2)
    bad_child = ProofTree(parse_goal("q |- p", lk),
                          tree.children[0].rule,
                          tree.children[0].substitution, (), "closed")
    bad = ProofTree(tree.sequent, tree.rule, tree.substitution,
                    (bad_child, tree.children[1]), "closed")
    res = check_proof(lk, bad)
    assert not res.ok
    assert res.diagnostics


def test_check_proof_rejects_open_leaf(lk):
    tree = ProofTree(parse_goal("p |- p", lk))
    res = check_proof(lk, tree)
    assert not res.ok
    assert "OpenGoal" in res.diagnostics[0]
    assert check_proof(lk, tree, allow_open=True).ok


def test_bounded_search_init(lk):
    t = bounded_search(lk, parse_goal("p |- p", lk), 1)
    assert t is not None and t.rule == "init" and t.node_count() == 1


def test_bounded_search_identity_decomposition(lk):
    goal = parse_goal("a and b |- a and b", lk)
    t = bounded_search(lk, goal, 2)
    assert t is not None
    assert check_proof(lk, t).ok


def test_bounded_search_unprovable(lk):
    assert bounded_search(lk, parse_goal("p |- q", lk), 5) is None


def test_bounded_search_sound(lk, ll):
    for spec, goals in [(lk, ["p |- p and p", "p or q |- q or p",
                              "|- p imp p"]),
                        (ll, ["|- ; p par ~p", "|- ; ~p, p plus q"])]:
        for g in goals:
            t = bounded_search(spec, parse_goal(g, spec), 4)
            assert t is not None, g
            assert check_proof(spec, t).ok, g


def test_search_agrees_with_bfs_oracle(lk):
    """Exhaustiveness at desk scale: iterative deepening and the
    breadth-first oracle agree on provability, and every found tree
    re-validates."""
    family = sequent_family(lk, [Atom("p"), Atom("q")], 3, 2)
    prover = BFSProver(lk)
    checked = proofs = 0
    for s in family:
        if s.formula_count() == 0:
            continue
        tree = bounded_search(lk, s, 4)
        oracle = prover.provable(s, 4)
        assert (tree is not None) == oracle, s
        if tree is not None:
            proofs += 1
            if proofs % 10 == 0:
                assert check_proof(lk, tree).ok, s
        checked += 1
    assert checked > 500 and proofs > 100


def test_schematic_search_instantiates(lk):
    """Frozen formula variables behave as unrelated fresh atoms."""
    rule = lk.rule("andR")
    empty = Substitution({}, {"G": ContextExpr(), "D": ContextExpr()})
    goal = tokenize_sequent(subst_apply(empty, rule.conclusion, lk.table))
    tree = bounded_search(lk, goal, 3)
    assert tree is None  # |- _A and _B with unrelated atoms: not provable

    ident = tokenize_sequent(parse_goal("p |- p", lk))
    t2 = bounded_search(lk, ident, 1)
    assert t2 is not None


def _atomvar_bound_tokens(tree):
    """Frozen atoms that some node's substitution binds through an atom
    variable; instances must keep these atomic."""
    out = set()

    def walk(t):
        if t.substitution is not None:
            for var, val in t.substitution.fmap.items():
                if var[0].islower() and isinstance(val, Atom) \
                        and val.name.startswith("_"):
                    out.add(val.name)
        for c in t.children:
            walk(c)

    walk(tree)
    return out


def test_schematic_proof_ground_instances(lk):
    """Spot-check: replace the frozen atoms of a schematic witness by
    random concrete material and re-check the instantiated proof."""
    from sequitur.terms import App
    from sequitur.meta import check_identity_expansion
    rng = random.Random(7)
    formulas = [Atom("p"), Atom("q"),
                App(lk.table["and"], (Atom("p"), Atom("q"))),
                App(lk.table["not"], (Atom("q"),))]
    atoms = [Atom("p"), Atom("q")]
    report = check_identity_expansion(lk, 2)
    for case in report.cases:
        for w in case.witnesses:
            tree = w.tree
            frozen = sorted(
                n for n in _frozen_atoms(tree) if n.startswith("_x"))
            atomic_only = _atomvar_bound_tokens(tree)
            for _ in range(2):
                mapping = {
                    n: rng.choice(atoms if n in atomic_only else formulas)
                    for n in frozen}
                inst = _instantiate_tree(lk, tree, mapping)
                assert check_proof(lk, inst).ok


def _frozen_atoms(tree):
    out = set()

    def walk_formula(f):
        from sequitur.terms import App as A
        if isinstance(f, Atom) and f.name.startswith("_"):
            out.add(f.name)
        elif isinstance(f, A):
            for a in f.args:
                walk_formula(a)

    def walk(t):
        for _, c in t.sequent.zones:
            for f in c.formulas:
                walk_formula(f)
        for c in t.children:
            walk(c)

    walk(tree)
    return out


def _instantiate_tree(spec, tree, mapping):
    from sequitur.terms import App, ContextExpr, Sequent

    def conv_formula(f):
        if isinstance(f, Atom) and f.name in mapping:
            g = mapping[f.name]
            return spec.table.dual_of(g) if f.neg else g
        if isinstance(f, App):
            return App(f.conn, tuple(conv_formula(a) for a in f.args))
        return f

    def conv_sub(sub):
        fmap = {n: conv_formula(f) for n, f in sub.fmap.items()}
        cmap = {n: ContextExpr(c.vars, [conv_formula(f) for f in c.formulas])
                for n, c in sub.cmap.items()}
        return Substitution(fmap, cmap)

    def conv(t):
        seq = Sequent(tuple(
            (zn, ContextExpr(c.vars, [conv_formula(f) for f in c.formulas]))
            for zn, c in t.sequent.zones))
        return ProofTree(seq, t.rule,
                         conv_sub(t.substitution) if t.substitution else None,
                         tuple(conv(c) for c in t.children),
                         t.status, t.accepted)

    return conv(tree)


def test_randomized_sessions_apply_undo_algebra(lk):
    """Randomized interleavings preserve apply/undo inverses and the
    validity of every closed subtree."""
    rng = random.Random(20240809)
    goals = ["p |- p and p", "p and q |- q and p", "|- p imp (q imp p)",
             "p or q |- q or p"]
    steps = 0
    for gtext in goals:
        session = new_session(lk, parse_goal(gtext, lk))
        for _ in range(250):
            steps += 1
            open_goals = session.open_goals
            do_undo = rng.random() < 0.35 or not open_goals
            if do_undo:
                session = undo(session)
                continue
            gid, goal = open_goals[rng.randrange(len(open_goals))]
            apps = all_applications(lk, goal)
            if not apps:
                session = undo(session)
                continue
            app = apps[rng.randrange(len(apps))]
            before = session.state
            session = apply_to_goal(session, gid, app)
            assert undo(session).state == before
            assert check_proof(lk, session.root, allow_open=True).ok
    assert steps == 1000
