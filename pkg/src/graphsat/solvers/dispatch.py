"""Route an instance to the solver matching its classification."""

from __future__ import annotations

from typing import Mapping, Optional

from ..canonical import CLONE_IDS, DEFAULT_BUDGET, clone_variants, preserves
from ..classifier import Classification
from ..ktypes import TypeTable
from .fig2 import solve_fig2
from .fig3 import solve_fig3, solve_fig3_2sat
from .model import Instance, SolveResult
from .oracle import DEFAULT_CAP, oracle_solve
from .simple import solve_equality, solve_semilattice, solve_trivial

METHODS = ("trivial", "semilattice", "equality", "fig2", "fig3", "fig3-2sat", "oracle")

_SEMILATTICE_ORDER = {2: "chain-eq-n-e", 3: "chain-eq-e-n", 4: "flat-top-e", 5: "flat-top-n"}
NP_WARNING = "np-complete language; exponential search"


def method_for(clone_id: Optional[int]) -> str:
    if clone_id is None:
        return "oracle"
    if clone_id == 1:
        return "trivial"
    if clone_id in _SEMILATTICE_ORDER:
        return "semilattice"
    if clone_id == 6:
        return "fig3-2sat"
    if clone_id == 11:
        return "fig3"
    if clone_id in (16, 17):
        return "equality"
    return "fig2"


def clone_for_method(tables: Mapping[str, TypeTable], method: str, budget: float = DEFAULT_BUDGET) -> Optional[int]:
    """First clone, in scan order, that routes to ``method`` and preserves every table."""
    for c in CLONE_IDS:
        if method_for(c) != method:
            continue
        if any(all(preserves(v.table, t, budget) for t in tables.values()) for v in clone_variants(c)):
            return c
    return None


def run_method(tables: Mapping[str, TypeTable], inst: Instance, clone_id: int, oracle_cap: int = DEFAULT_CAP) -> SolveResult:
    """Solve with the algorithm for ``clone_id``; the caller guarantees the clone preserves the language."""
    method = method_for(clone_id)
    if method == "oracle":
        return oracle_solve(tables, inst, cap=oracle_cap)
    if method == "trivial":
        return solve_trivial(tables, inst)
    if method == "semilattice":
        return solve_semilattice(tables, inst, _SEMILATTICE_ORDER[clone_id])
    if method == "equality":
        return solve_equality(tables, inst, "clique" if clone_id == 16 else "independent")
    if method == "fig3":
        return solve_fig3(tables, inst)
    if method == "fig3-2sat":
        return solve_fig3_2sat(tables, inst)
    return solve_fig2(tables, inst, "majority" if clone_id in (7, 8, 9, 10) else "minority")


def dispatch_solve(tables: Mapping[str, TypeTable], inst: Instance, classification: Classification,
                   method: Optional[str] = None, oracle_cap: int = DEFAULT_CAP) -> SolveResult:
    """Solve with the classified clone's algorithm, or with an explicitly requested one.

    An override must name a method whose clone hypothesis holds for the
    language; otherwise ValueError is raised.
    """
    if method in (None, "auto"):
        if not classification.tractable:
            result = oracle_solve(tables, inst, cap=oracle_cap)
            result.warning = NP_WARNING
            return result
        return run_method(tables, inst, classification.clone_id, oracle_cap)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "oracle":
        return oracle_solve(tables, inst, cap=oracle_cap)
    if classification.tractable and method_for(classification.clone_id) == method:
        return run_method(tables, inst, classification.clone_id, oracle_cap)
    c = clone_for_method(tables, method)
    if c is None:
        raise ValueError(f"method {method!r} does not apply: no matching clone preserves the language")
    return run_method(tables, inst, c, oracle_cap)
