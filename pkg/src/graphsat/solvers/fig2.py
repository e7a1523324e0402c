"""Contraction followed by one global Boolean problem over pairs of classes.

Sound for languages preserved by a binary injection of type projection that
is E- or N-dominated in the second argument (the majority clones 7-10 and
the minority clones 12-15).
"""

from __future__ import annotations

from typing import Mapping, Optional

from ..boolean import AffineSystem, TwoSatInstance, affine_basis, gauss_solve, is_affine_coset, two_clause_cover, twosat_solve
from ..errors import InternalInconsistencyError, NotBijunctiveError
from ..ktypes import E, N, TypeTable, pair_list
from .model import SAT, UNSAT, Instance, SolveResult, UnionFind, bool_relation, checked, implies_equal, model_from_labels, specialize_table


def contract(tables: Mapping[str, TypeTable], inst: Instance, uf: UnionFind) -> Optional[list]:
    """Merge variables while some specialized constraint forces an equality.

    Returns the specialized constraints ``(table, names)`` at the fixpoint, or
    None when some constraint becomes false.
    """
    while True:
        specialized = []
        merged = False
        for c in inst.constraints:
            table, names = specialize_table(tables[c.rel], [uf.find(a) for a in c.args])
            if len(table) == 0:
                return None
            for i, j in pair_list(len(names)):
                if implies_equal(table, i, j):
                    uf.union(names[i], names[j])
                    merged = True
                    break
            if merged:
                break
            specialized.append((table, names))
        if not merged:
            return specialized


def _pkey(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def solve_fig2(tables: Mapping[str, TypeTable], inst: Instance, bool_mode: str) -> SolveResult:
    if bool_mode not in ("minority", "majority"):
        raise ValueError(f"bool_mode must be 'minority' or 'majority', got {bool_mode!r}")
    method = "fig2"
    uf = UnionFind(inst.variables)
    specialized = contract(tables, inst, uf)
    if specialized is None:
        return SolveResult(UNSAT, method=method)

    index: dict[tuple[str, str], int] = {}

    def var(a, b) -> int:
        return index.setdefault(_pkey(a, b), len(index))

    equations = []
    clauses = []
    for table, names in specialized:
        rel = bool_relation(table)
        if not rel.tuples:
            return SolveResult(UNSAT, method=method)
        coords = [var(names[i], names[j]) for i, j in pair_list(len(names))]
        if bool_mode == "minority":
            if not is_affine_coset(rel):
                raise InternalInconsistencyError("injective part is not closed under Boolean minority")
            for mask, p in affine_basis(rel).equations:
                glob = 0
                for b in range(len(coords)):
                    if mask >> b & 1:
                        glob |= 1 << coords[b]
                equations.append((glob, p))
        else:
            try:
                cover = two_clause_cover(rel)
            except NotBijunctiveError:
                raise InternalInconsistencyError("injective part is not closed under Boolean majority") from None
            for (i, si), (j, sj) in cover.clauses:
                clauses.append(((coords[i], si), (coords[j], sj)))

    n = len(index)
    if bool_mode == "minority":
        x = gauss_solve(AffineSystem(n, equations))
    else:
        x = twosat_solve(TwoSatInstance(n, clauses))
    if x is None:
        return SolveResult(UNSAT, method=method)

    def label(a, b):
        k = index.get(_pkey(a, b))
        return E if k is not None and x >> k & 1 else N

    model = model_from_labels(inst.variables, uf, label)
    return checked(tables, inst, SolveResult(SAT, model, method))
