"""Rendering: formulas, rules, proofs and whole reports as LaTeX.

Output is deterministic byte for byte; multisets render in a canonical
order so equal sequents always print identically.
"""

from sequitur import (
    RenderOptions,
    bounded_search,
    check_identity_expansion,
    load_builtin,
    parse_goal,
    render_calculus,
    render_proof,
    render_rule,
)
from sequitur.latex import wrap_document
from sequitur.report import report_to_tex

ll = load_builtin("ll")
lk = load_builtin("lk")

print("% every rule of the one-sided calculus")
print(render_calculus(ll))

tree = bounded_search(lk, parse_goal("p |- p and p", lk), 2)
print("% a small proof, proof.sty style")
print(render_proof(tree, lk))
print()
print("% the same proof, bussproofs style")
print(render_proof(tree, lk, RenderOptions(macro_style="bussproofs")))

tree_ll = bounded_search(ll, parse_goal("|- ; ~p par ~q, p tensor q", ll), 3)
print()
print("% a linear-logic derivation with a context split")
print(render_proof(tree_ll, ll))

# a full report as a compilable document
report = check_identity_expansion(lk, 2)
doc = report_to_tex(report, lk, full_document=True)
print()
print("% identity report document:", len(doc.splitlines()), "lines;"
      " preamble begins:")
print("\n".join(doc.splitlines()[:6]))
print()
print("% standalone rule, for the record:")
print(wrap_document(f"\\[ {render_rule(ll.rule('bangR'), ll)} \\]")
      .splitlines()[-3])
