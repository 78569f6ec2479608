"""The five meta-property checkers on the built-in calculi.

Statuses are proved / unknown / failed; unknown means "the automated
strategy did not close this case", never that the property fails.
"""

from sequitur import (
    check_cut_elimination,
    check_identity_expansion,
    check_invertibility,
    check_permutability,
    check_weakening_admissibility,
    load_builtin,
)

lk = load_builtin("lk")
ll = load_builtin("ll")


def show(report, details=()):
    s = report.summary
    print(f"{report.property} on {report.calculus}: {s['proved']} proved,"
          f" {s['unknown']} unknown, {s['failed']} failed")
    for c in report.cases:
        if c.status != "proved" or c.case_id in details:
            print(f"   [{c.status}] {c.case_id}  {'; '.join(c.notes)}")


# identity expansion: every connective reduces to identities on strictly
# smaller formulas; the exponentials need one step more
show(check_identity_expansion(lk, 2))
show(check_identity_expansion(ll, 2))
show(check_identity_expansion(ll, 3))

# weakening: LK threads everything; LL's promotion blocks its linear zone
print()
show(check_weakening_admissibility(lk))
show(check_weakening_admissibility(ll))

# invertibility: andR survives every last-rule case, plusR1 does not
# (if the derivation ended with plusR2, the first premise is lost)
print()
show(check_invertibility(lk, "andR"))
show(check_invertibility(ll, "plusR1"))

# permutability: par moves below tensor when both its pieces stay in one
# split; quest cannot move below bang (no residue beside !A)
print()
show(check_permutability(ll, "parR", "tensorR"))
show(check_permutability(ll, "questR", "bangR"))

# cut elimination: commutative, principal and atomic families
print()
show(check_cut_elimination(lk, "cut"))
show(check_cut_elimination(ll, "cut"))
print("\nLL notes:", *check_cut_elimination(ll, "cut").notes)
