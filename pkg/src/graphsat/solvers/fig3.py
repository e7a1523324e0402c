"""Component-wise Boolean solving with merge-and-restart.

``solve_fig3`` handles languages preserved by a straight minority injection
(clone 11) through edge affine clauses, merging every pair of an
unsatisfiable component. ``solve_fig3_2sat`` is the analogue for straight
majority injections (clone 6) through graph bijunctive clauses; there a
component can be unsatisfiable without all of its pairs being equal, so only
the pairs that are equal in every solution get merged.
"""

from __future__ import annotations

from typing import Mapping

from ..boolean import AffineSystem, TwoSatInstance, gauss_solve, twosat_contradictions, twosat_solve
from ..ktypes import E, N, TypeTable
from .model import SAT, UNSAT, Instance, SolveResult, UnionFind, checked, model_from_labels, specialize_table
from .normal_forms import compile_bijunctive, compile_edge_affine


def _pkey(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def _solve_affine(tables: Mapping[str, TypeTable], inst: Instance) -> SolveResult:
    method = "fig3"
    uf = UnionFind(inst.variables)
    for _ in range(len(inst.variables) + 1):
        # specialize and recompile every constraint under the current merges
        live_clauses = []
        forced = []
        for c in inst.constraints:
            table, names = specialize_table(tables[c.rel], [uf.find(a) for a in c.args])
            if len(table) == 0:
                return SolveResult(UNSAT, method=method)
            for clause in compile_edge_affine(table):
                if any(names[i] != names[j] for i, j in clause.diseq):
                    continue  # discharged by the final injective assignment
                if not clause.has_xor:
                    return SolveResult(UNSAT, method=method)
                pairs = [(names[i], names[j]) for i, j in clause.xor_pairs]
                if any(a == b for a, b in pairs):
                    # only the all-equal escape can hold
                    forced.extend((a, b) for a, b in pairs if a != b)
                    continue
                live_clauses.append((clause, [_pkey(a, b) for a, b in pairs]))
        if forced:
            for a, b in forced:
                uf.union(a, b)
            continue

        # pair graph over pairs that occur in live clause bodies
        graph = UnionFind([])
        for _, pairs in live_clauses:
            for p in pairs:
                graph.parent.setdefault(p, p)
            for p in pairs[1:]:
                graph.union(pairs[0], p)
        components: dict = {}
        for p in graph.parent:
            components.setdefault(graph.find(p), []).append(p)
        by_component: dict = {root: [] for root in components}
        for clause, pairs in live_clauses:
            if pairs:
                by_component[graph.find(pairs[0])].append((clause, pairs))

        assignment: dict[tuple[str, str], int] = {}
        failed = None
        for root in sorted(components):
            members = sorted(components[root])
            index = {p: n for n, p in enumerate(members)}
            eqs = []
            for clause, pairs in by_component[root]:
                mask = 0
                for p in pairs:
                    mask ^= 1 << index[p]
                eqs.append((mask, clause.parity))
            x = gauss_solve(AffineSystem(len(members), eqs))
            if x is None:
                failed = members
                break
            for p, n in index.items():
                assignment[p] = x >> n & 1

        if failed is not None:
            # every pair of an unsatisfiable component is an equality
            for a, b in failed:
                uf.union(a, b)
            continue

        def label(a, b):
            return E if assignment.get(_pkey(a, b)) else N

        model = model_from_labels(inst.variables, uf, label)
        return checked(tables, inst, SolveResult(SAT, model, method))
    raise AssertionError("merge rounds exceed the number of variables")


def _solve_bijunctive(tables: Mapping[str, TypeTable], inst: Instance) -> SolveResult:
    """2SAT over pairs of classes; a pair whose two literals imply each other is merged.

    A literal on a pair of identical classes counts as half true, so a clause
    with one such literal leaves a unit clause on the other pair.
    """
    method = "fig3-2sat"
    uf = UnionFind(inst.variables)
    for _ in range(len(inst.variables) + 1):
        index: dict[tuple[str, str], int] = {}
        clauses = []
        for c in inst.constraints:
            table, names = specialize_table(tables[c.rel], [uf.find(a) for a in c.args])
            if len(table) == 0:
                return SolveResult(UNSAT, method=method)
            for clause in compile_bijunctive(table):
                if any(names[i] != names[j] for i, j in clause.diseq):
                    continue
                if not clause.payload:
                    return SolveResult(UNSAT, method=method)
                lits = []
                for x, (i, j) in clause.payload:
                    a, b = names[i], names[j]
                    if a != b:
                        lits.append((index.setdefault(_pkey(a, b), len(index)), x == E))
                if len(lits) == 1:
                    lits.append(lits[0])
                if lits:
                    clauses.append(tuple(lits))
        sat = TwoSatInstance(len(index), clauses)
        stuck = set(twosat_contradictions(sat))
        if stuck:
            # equal in every solution: a distinct label on such a pair forces its opposite
            for (a, b), k in index.items():
                if k in stuck:
                    uf.union(a, b)
            continue
        x = twosat_solve(sat)

        def label(a, b):
            k = index.get(_pkey(a, b))
            return E if k is not None and x >> k & 1 else N

        model = model_from_labels(inst.variables, uf, label)
        return checked(tables, inst, SolveResult(SAT, model, method))
    raise AssertionError("merge rounds exceed the number of variables")


def solve_fig3(tables: Mapping[str, TypeTable], inst: Instance) -> SolveResult:
    return _solve_affine(tables, inst)


def solve_fig3_2sat(tables: Mapping[str, TypeTable], inst: Instance) -> SolveResult:
    return _solve_bijunctive(tables, inst)
