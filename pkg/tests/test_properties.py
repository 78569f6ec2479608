"""Property tests over randomly generated formulas and sequents."""

from hypothesis import given, settings, strategies as st

from sequitur.calculus import load_builtin
from sequitur.matching import match_sequent
from sequitur.subst import Substitution, subst_apply
from sequitur.terms import App, Atom, ContextExpr, Sequent

lk = load_builtin("lk")
ll = load_builtin("ll")

atoms = st.sampled_from([Atom("p"), Atom("q"), Atom("r")])


def formulas(spec, leaves, max_depth=3):
    def extend(children):
        conns = [c for c in spec.connectives if c.arity]
        return st.sampled_from(conns).flatmap(
            lambda c: st.tuples(*([children] * c.arity)).map(
                lambda args: App(c, args)))
    return st.recursive(leaves, extend, max_leaves=max_depth)


lk_formulas = formulas(lk, atoms)
ll_literals = st.sampled_from([Atom("p"), Atom("q"),
                               Atom("p", True), Atom("q", True)])
ll_formulas = formulas(ll, ll_literals)


def sequents(spec, formula_strategy):
    zone = st.lists(formula_strategy, max_size=4)
    return st.tuples(*([zone] * len(spec.zones))).map(
        lambda zs: Sequent(tuple(
            (z.name, ContextExpr((), fs))
            for z, fs in zip(spec.zones, zs))))


@given(sequents(lk, lk_formulas))
@settings(max_examples=150, deadline=None)
def test_match_soundness_random_lk(target):
    for rule in lk.rules:
        for s in match_sequent(rule.conclusion, target, lk.table):
            assert subst_apply(s, rule.conclusion, lk.table) == target


@given(sequents(ll, ll_formulas))
@settings(max_examples=150, deadline=None)
def test_match_soundness_random_ll(target):
    for rule in ll.rules:
        for s in match_sequent(rule.conclusion, target, ll.table):
            assert subst_apply(s, rule.conclusion, ll.table) == target


@given(st.lists(ll_formulas, max_size=5), st.randoms())
@settings(max_examples=100, deadline=None)
def test_context_insertion_order_irrelevant(fs, rng):
    shuffled = list(fs)
    rng.shuffle(shuffled)
    assert ContextExpr((), fs) == ContextExpr((), shuffled)


@given(sequents(ll, ll_formulas))
@settings(max_examples=100, deadline=None)
def test_match_results_deduplicated_and_stable(target):
    for rule in ll.rules:
        once = match_sequent(rule.conclusion, target, ll.table)
        again = match_sequent(rule.conclusion, target, ll.table)
        assert once == again
        assert len(once) == len(set(once))


@given(ll_formulas)
@settings(max_examples=200, deadline=None)
def test_dual_is_involutive(f):
    assert ll.table.dual_of(ll.table.dual_of(f)) == f


@given(lk_formulas, atoms, atoms)
@settings(max_examples=150, deadline=None)
def test_ground_substitution_idempotent(f, a, b):
    s = Substitution({"A": a, "B": b})
    once = subst_apply(s, f, lk.table)
    assert subst_apply(s, once, lk.table) == once
