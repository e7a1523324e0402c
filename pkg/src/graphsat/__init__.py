"""Graph satisfiability problems over the random graph: classify, solve, reduce."""

from .classifier import NP_COMPLETE, TRACTABLE, Classification, classify, preserving_variants
from .dsl import Language, load_spec
from .errors import (ArityGuardError, GraphSatError, InternalInconsistencyError, NotBijunctiveError,
                     NotEdgeAffineError, OracleCapExceeded, ResourceGuardError, SpecSyntaxError)
from .estimator import GraphSatSolver
from .ktypes import KType, PairLabel, TypeTable, enumerate_ktypes, ktype_count
from .reductions import BoolFormula, generate
from .relations import builtin_table, closure_facts, interdef_class
from .solvers import (METHODS, Constraint, Instance, Model, SolveResult, dispatch_solve, oracle_solve,
                      validate_model)

__version__ = "0.1.0"

__all__ = [
    "NP_COMPLETE", "TRACTABLE", "Classification", "classify", "preserving_variants",
    "Language", "load_spec",
    "ArityGuardError", "GraphSatError", "InternalInconsistencyError", "NotBijunctiveError",
    "NotEdgeAffineError", "OracleCapExceeded", "ResourceGuardError", "SpecSyntaxError",
    "GraphSatSolver",
    "KType", "PairLabel", "TypeTable", "enumerate_ktypes", "ktype_count",
    "BoolFormula", "generate",
    "builtin_table", "closure_facts", "interdef_class",
    "METHODS", "Constraint", "Instance", "Model", "SolveResult", "dispatch_solve", "oracle_solve",
    "validate_model",
]
