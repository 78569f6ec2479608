"""sequitur: a sequent-calculus meta-theory workbench.

Define a proof calculus in a small rule language, build proofs
interactively, and check identity expansion, weakening admissibility,
invertibility, permutability and cut-elimination case analyses, with
every case witnessed by a rendered derivation.
"""

from .calculus import (
    CalculusParseError,
    CalculusSpec,
    Diagnostic,
    NotACut,
    RuleDecl,
    ZoneDecl,
    load_builtin,
    parse_calculus,
    parse_goal,
    print_calculus,
    validate_cut,
)
from .engine import (
    Application,
    IllegalApplication,
    ProofSession,
    ProofTree,
    StaleGoal,
    UnknownRule,
    all_applications,
    apply_to_goal,
    bounded_search,
    check_proof,
    enumerate_applications,
    new_session,
    undo,
)
from .latex import (
    RenderOptions,
    render_calculus,
    render_formula,
    render_proof,
    render_rule,
    render_sequent,
)
from .matching import match_sequent, rename_apart, unify_sequent
from .meta import (
    CaseResult,
    CheckReport,
    NoPrincipal,
    check_cut_elimination,
    check_identity_expansion,
    check_invertibility,
    check_permutability,
    check_weakening_admissibility,
)
from .report import report_to_dict, report_to_json, report_to_tex
from .subst import ConflictingBinding, Substitution, subst_apply, subst_compose
from .terms import (
    App,
    Atom,
    AtomVar,
    Connective,
    ConnectiveTable,
    ContextExpr,
    CtxVar,
    Formula,
    FormulaVar,
    GuardViolation,
    MissingDualityTable,
    Sequent,
    SequiturError,
    formula_size,
)

__version__ = "0.1.0"
