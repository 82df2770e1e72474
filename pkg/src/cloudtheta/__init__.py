"""Random 3CNF tooling: clause-cloud graphs, a narrow mod-2 refutation
system, exact vector-program witnesses, and a small dense solver for the
graph bound they certify."""

from .errors import (
    CloudthetaError,
    DuplicateVariableError,
    InternalInconsistencyError,
    InvalidInputError,
    Not3CNFError,
    OutOfRangeError,
    ParseError,
    ResourceLimitError,
)
from .formula import (
    Clause3,
    Formula,
    Literal,
    XorEquation,
    eval_odd,
    gen_random,
    parse_dimacs,
    render_dimacs,
    to_xor,
)
from .ge3 import (
    Ge3Closure,
    add_equations,
    class_normal_form,
    closure_to_json,
    default_equation_cap,
    derivable,
    is_legal,
    saturate,
)
from .reduction import (
    XOR_ORDER,
    FULL_ORDER,
    CloudGraph,
    CloudVertex,
    build_graph,
    contradicts,
    parse_dimacs_graph,
    to_dimacs_graph,
    vertex_sidecar,
    vertex_var_value,
)
from .structure_checks import (
    PatternHit,
    find_pattern,
    hall_satisfiable,
    matched_pair_count,
    mu,
    small_subformula_size,
    special_variables,
    subformula_report,
    xor_satisfiable,
)
from .theta_solver import (
    ThetaResiduals,
    ThetaSolution,
    check_clique_lemma,
    clique_cover_upper_bound,
    solve_theta,
)
from .witness import (
    ClassClause,
    WitnessReport,
    WitnessVectors,
    build_vectors,
    classify,
    verify,
    witness_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "CloudthetaError", "DuplicateVariableError", "InternalInconsistencyError",
    "InvalidInputError", "Not3CNFError", "OutOfRangeError", "ParseError",
    "ResourceLimitError",
    "Clause3", "Formula", "Literal", "XorEquation", "eval_odd", "gen_random",
    "parse_dimacs", "render_dimacs", "to_xor",
    "Ge3Closure", "add_equations", "class_normal_form", "closure_to_json",
    "default_equation_cap", "derivable", "is_legal", "saturate",
    "XOR_ORDER", "FULL_ORDER", "CloudGraph", "CloudVertex", "build_graph",
    "contradicts", "parse_dimacs_graph", "to_dimacs_graph", "vertex_sidecar",
    "vertex_var_value",
    "PatternHit", "find_pattern", "hall_satisfiable", "matched_pair_count", "mu",
    "small_subformula_size", "special_variables", "subformula_report",
    "xor_satisfiable",
    "ThetaResiduals", "ThetaSolution", "check_clique_lemma",
    "clique_cover_upper_bound", "solve_theta",
    "ClassClause", "WitnessReport", "WitnessVectors", "build_vectors", "classify",
    "verify", "witness_to_json",
]
