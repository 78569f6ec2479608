import itertools

import pytest

from sequitur.calculus import load_builtin, parse_goal
from sequitur.subst import (
    ConflictingBinding,
    Substitution,
    subst_apply,
    subst_compose,
)
from sequitur.terms import (
    App,
    Atom,
    AtomVar,
    ContextExpr,
    CtxVar,
    FormulaVar,
    GuardViolation,
    Sequent,
)


@pytest.fixture(scope="module")
def lk():
    return load_builtin("lk")


@pytest.fixture(scope="module")
def box():
    return load_builtin("lkbox")


def test_apply_direct_replacement(lk):
    s = Substitution({"A": Atom("p"), "B": Atom("q")})
    f = App(lk.table["and"], (FormulaVar("A"), FormulaVar("B")))
    assert subst_apply(s, f) == App(lk.table["and"], (Atom("p"), Atom("q")))


def test_apply_empty_is_identity(lk):
    f = App(lk.table["and"], (FormulaVar("A"), Atom("p")))
    seq = lk.rule("andR").conclusion
    empty = Substitution()
    assert subst_apply(empty, f) == f
    assert subst_apply(empty, seq) == seq


def test_apply_to_sequent(lk):
    # {G -> {p,q}, D -> {}, A -> p} on (G |- D, A) gives (p,q |- p)
    pat = Sequent((("L", ContextExpr((CtxVar("G"),), ())),
                   ("R", ContextExpr((CtxVar("D"),), (FormulaVar("A"),)))))
    s = Substitution({"A": Atom("p")},
                     {"G": ContextExpr((), (Atom("p"), Atom("q"))),
                      "D": ContextExpr()})
    expected = parse_goal("p, q |- p", lk)
    assert subst_apply(s, pat) == expected


def test_apply_atomvar_requires_atom():
    s = Substitution({"p": App(load_builtin("lk").table["and"],
                               (Atom("a"), Atom("b")))})
    with pytest.raises(GuardViolation):
        subst_apply(s, AtomVar("p"))


def test_apply_guard_violation(box):
    guarded = ContextExpr((CtxVar("G", guard="box"),), ())
    bad = Substitution({}, {"G": ContextExpr((), (Atom("p"),))})
    with pytest.raises(GuardViolation):
        subst_apply(bad, guarded)
    good = Substitution({}, {
        "G": ContextExpr((), (App(box.table["box"], (Atom("p"),)),))})
    out = subst_apply(good, guarded)
    assert out.formulas[0].conn.name == "box"


def test_compose_chained(lk):
    s1 = Substitution({"A": FormulaVar("B'")})
    s2 = Substitution({"B'": Atom("p")})
    s = subst_compose(s1, s2)
    assert subst_apply(s, FormulaVar("A")) == Atom("p")


def test_compose_with_empty_is_identity():
    s = Substitution({"A": Atom("p")}, {"G": ContextExpr((), (Atom("q"),))})
    assert subst_compose(s, Substitution()) == s
    assert subst_compose(Substitution(), s) == s


def test_compose_context_chain():
    s1 = Substitution({}, {"G": ContextExpr((CtxVar("D'"),), (Atom("p"),))})
    s2 = Substitution({}, {"D'": ContextExpr((), (Atom("q"),))})
    s = subst_compose(s1, s2)
    got = subst_apply(s, ContextExpr((CtxVar("G"),), ()))
    assert got == ContextExpr((), (Atom("p"), Atom("q")))


def test_compose_conflict():
    s1 = Substitution({"A": Atom("p")})
    s2 = Substitution({"A": Atom("q")})
    with pytest.raises(ConflictingBinding):
        subst_compose(s1, s2)


def _small_formulas(lk, depth):
    atoms = [Atom("p"), Atom("q"), FormulaVar("A")]
    if depth == 0:
        return atoms
    smaller = _small_formulas(lk, depth - 1)
    out = list(smaller)
    for a in smaller:
        out.append(App(lk.table["not"], (a,)))
        for b in atoms:
            out.append(App(lk.table["and"], (a, b)))
    return out


def test_compose_defining_equation_brute_force(lk):
    """subst_apply(compose(s1,s2), x) == subst_apply(s2, subst_apply(s1,x))
    over all formulas of size <= 5 from a small signature."""
    values = [Atom("p"), Atom("q"),
              App(lk.table["and"], (Atom("p"), Atom("q")))]
    subs = [Substitution({"A": v}) for v in values] + [Substitution()]
    terms = [f for f in _small_formulas(lk, 2) if f.size <= 5]
    assert len(terms) > 30
    for s1, s2 in itertools.product(subs, subs):
        try:
            composed = subst_compose(s1, s2)
        except ConflictingBinding:
            continue  # precondition: overlapping domains must agree
        for t in terms:
            assert subst_apply(composed, t) == \
                subst_apply(s2, subst_apply(s1, t))


def test_apply_idempotent_after_composition(lk):
    # applying twice equals applying once when the range is ground
    s = Substitution({"A": Atom("p")},
                     {"G": ContextExpr((), (Atom("q"),))})
    pat = lk.rule("andR").conclusion
    once = subst_apply(s, pat)
    assert subst_apply(s, once) == once
