"""Multiset matching and schematic unification, step by step.

Zones are multisets, so a rule schema can instantiate against a goal in
several ways; this is the enumeration behind the interactive chooser.
"""

from sequitur import load_builtin, match_sequent, parse_goal, unify_sequent
from sequitur.matching import rename_apart

lk = load_builtin("lk")
ll = load_builtin("ll")

# One way only: the conjunction is forced, the context goes to Gamma.
goal = parse_goal("p, q |- p and q", lk)
for s in match_sequent(lk.rule("andR").conclusion, goal, lk.table):
    print("andR instance:", s)

# Four ways: the tensor rule splits its linear context, and {p, q} can
# be divided between the premises in 2^2 ways.
goal = parse_goal("|- ; p, q, p tensor q", ll)
print("\ntensor on", goal)
for s in match_sequent(ll.rule("tensorR").conclusion, goal, ll.table):
    print("  D1 =", s.cmap["D1"], " D2 =", s.cmap["D2"])

# Non-linear patterns collapse: init mentions the atom variable twice,
# and both occurrence choices give the same substitution.
goal = parse_goal("q, q |- q", lk)
print("\ninit on", goal, "->",
      match_sequent(lk.rule("init").conclusion, goal, lk.table))

# Overlap enumeration between two rule schemas: how can the same sequent
# end with andR and with orR1?  Only with distinct principal formulas,
# each sitting in the other's context.
a = lk.rule("andR").conclusion
b = rename_apart(lk.rule("orR1").conclusion, "'")
for s1, s2 in unify_sequent(a, b, lk.table):
    print("\noverlap case:")
    print("  andR side:", s1)
    print("  orR1 side:", s2)

# Promotion leaves no room beside !A: no overlap with par at all.
bang = ll.rule("bangR").conclusion
par = rename_apart(ll.rule("parR").conclusion, "'")
print("\nbang vs par overlaps:", unify_sequent(bang, par, ll.table))
