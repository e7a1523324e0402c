from .dispatch import METHODS, clone_for_method, dispatch_solve, method_for, run_method
from .fig2 import solve_fig2
from .fig3 import solve_fig3, solve_fig3_2sat
from .model import (Constraint, Instance, Model, SolveResult, UnionFind, bool_of_type, implies_equal,
                    injectivize, specialize_table, validate_model)
from .normal_forms import BijunctiveClause, EdgeAffineClause, compile_bijunctive, compile_edge_affine
from .oracle import enumeration_oracle, oracle_solve
from .simple import solve_equality, solve_semilattice, solve_trivial

__all__ = [
    "METHODS", "clone_for_method", "dispatch_solve", "method_for", "run_method", "solve_fig2", "solve_fig3", "solve_fig3_2sat",
    "Constraint", "Instance", "Model", "SolveResult", "UnionFind", "bool_of_type", "implies_equal",
    "injectivize", "specialize_table", "validate_model", "BijunctiveClause", "EdgeAffineClause",
    "compile_bijunctive", "compile_edge_affine", "enumeration_oracle", "oracle_solve",
    "solve_equality", "solve_semilattice", "solve_trivial",
]
