"""Estimator-style facade: fit on a language, predict satisfiability of instances."""

from __future__ import annotations

from typing import Iterable, Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .canonical import DEFAULT_BUDGET
from .classifier import classify
from .solvers.dispatch import METHODS, dispatch_solve, method_for
from .solvers.model import SolveResult
from .solvers.oracle import DEFAULT_CAP
from .validation import InstanceLike, LanguageLike, check_instance, check_language


class GraphSatSolver(BaseEstimator):
    """Classify a language once, then solve instances with the matching algorithm.

    Parameters
    ----------
    method : str
        ``"auto"`` routes by classification; any name in ``METHODS`` forces
        that algorithm, provided a clone it needs preserves the language.
    oracle_cap : int
        Largest variable count handed to the backtracking oracle.
    budget : float
        Cap on behavior applications during classification.
    """

    def __init__(self, method: str = "auto", oracle_cap: int = DEFAULT_CAP, budget: float = DEFAULT_BUDGET):
        self.method = method
        self.oracle_cap = oracle_cap
        self.budget = budget

    def fit(self, X: LanguageLike, y=None) -> "GraphSatSolver":
        if self.method != "auto" and self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        self.tables_ = check_language(X)
        self.classification_ = classify(self.tables_.values(), budget=self.budget)
        self.method_ = method_for(self.classification_.clone_id) if self.method == "auto" else self.method
        return self

    def solve(self, instance: InstanceLike) -> SolveResult:
        check_is_fitted(self, ["tables_", "classification_"])
        inst = check_instance(instance, self.tables_)
        method: Optional[str] = None if self.method == "auto" else self.method
        return dispatch_solve(self.tables_, inst, self.classification_, method=method, oracle_cap=self.oracle_cap)

    def predict(self, instances: Iterable[InstanceLike]) -> list[str]:
        """``"sat"`` or ``"unsat"`` per instance."""
        return [self.solve(inst).status for inst in instances]
