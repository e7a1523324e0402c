"""Solvers for the trivial, semilattice and equality clones."""

from __future__ import annotations

from typing import Mapping

from ..ktypes import EQ, E, N, TypeTable, pair_list
from .model import SAT, UNSAT, Instance, Model, SolveResult, UnionFind, checked, model_from_labels, specialize_table

FULL = frozenset({EQ, E, N})

# top label of a domain under each join order; EQ is never a top of a live pair
ORDERS = {
    "chain-eq-n-e": (E, N, EQ),
    "chain-eq-e-n": (N, E, EQ),
    "flat-top-e": (E, N, EQ),
    "flat-top-n": (N, E, EQ),
}


def solve_trivial(tables: Mapping[str, TypeTable], inst: Instance) -> SolveResult:
    """Constant endomorphism: everything collapses to one vertex."""
    if any(len(tables[c.rel]) == 0 for c in inst.constraints):
        return SolveResult(UNSAT, method="trivial")
    classes = [list(inst.variables)] if inst.variables else []
    return checked(tables, inst, SolveResult(SAT, Model(classes), "trivial"))


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def solve_semilattice(tables: Mapping[str, TypeTable], inst: Instance, order: str) -> SolveResult:
    """Arc consistency on class-pair label domains, then the top of every domain."""
    prefs = ORDERS[order]
    method = "semilattice"
    uf = UnionFind(inst.variables)
    dom: dict[tuple[str, str], frozenset] = {}

    def domain(a, b):
        return dom.get(_key(a, b), FULL)

    def merge(a, b) -> bool:
        ra, rb = uf.find(a), uf.find(b)
        uf.union(ra, rb)
        lo = uf.find(ra)
        hi = rb if lo == ra else ra
        dom.pop(_key(ra, rb), None)
        for key in [k for k in dom if hi in k]:
            other = key[0] if key[1] == hi else key[1]
            d = dom.pop(key) & dom.get(_key(lo, other), FULL)
            if not d:
                return False
            dom[_key(lo, other)] = d
        return True

    changed = True
    while changed:
        changed = False
        for c in inst.constraints:
            table, names = specialize_table(tables[c.rel], [uf.find(a) for a in c.args])
            if len(table) == 0:
                return SolveResult(UNSAT, method=method)
            cp = pair_list(len(names))
            doms = [domain(names[i], names[j]) for i, j in cp]
            support = [set() for _ in cp]
            any_ok = False
            for t in table.types:
                labels = t.labels
                if all(labels[p] in doms[p] for p in range(len(cp))):
                    any_ok = True
                    for p in range(len(cp)):
                        support[p].add(labels[p])
            if not any_ok:
                return SolveResult(UNSAT, method=method)
            for p, (i, j) in enumerate(cp):
                new = frozenset(support[p])
                if new == {EQ}:
                    # a domain can also reach {EQ} through a merge, so test it even when unchanged
                    changed = True
                    if not merge(names[i], names[j]):
                        return SolveResult(UNSAT, method=method)
                    break  # names are stale after a merge
                if new != doms[p]:
                    changed = True
                    dom[_key(names[i], names[j])] = new
            if changed:
                break

    def top(a, b):
        d = domain(a, b)
        return next(x for x in prefs if x in d)

    model = model_from_labels(inst.variables, uf, top)
    return checked(tables, inst, SolveResult(SAT, model, method))


def solve_equality(tables: Mapping[str, TypeTable], inst: Instance, mode: str) -> SolveResult:
    """Merge pairs equal in every compatible partition; all other classes form a clique or an independent set."""
    if mode not in ("clique", "independent"):
        raise ValueError(f"mode must be 'clique' or 'independent', got {mode!r}")
    uf = UnionFind(inst.variables)
    changed = True
    while changed:
        changed = False
        for c in inst.constraints:
            table, names = specialize_table(tables[c.rel], [uf.find(a) for a in c.args])
            partitions = {t.block_of for t in table.types}
            if not partitions:
                return SolveResult(UNSAT, method="equality")
            for i, j in pair_list(len(names)):
                if all(p[i] == p[j] for p in partitions):
                    uf.union(names[i], names[j])
                    changed = True
    label = E if mode == "clique" else N
    model = model_from_labels(inst.variables, uf, lambda a, b: label)
    return checked(tables, inst, SolveResult(SAT, model, "equality"))
