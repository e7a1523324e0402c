"""Complete reference solver by backtracking over pair labels."""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from ..errors import OracleCapExceeded
from ..ktypes import EQ, E, N, TypeTable, enumerate_ktypes, pair_list, restrict_ktype
from .model import SAT, UNSAT, Instance, Model, SolveResult, checked

DEFAULT_CAP = 8


class _State:
    """Partition of variable indices plus labels between classes."""

    def __init__(self, n: int):
        self.rep = list(range(n))
        self.lab: dict[tuple[int, int], int] = {}

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.rep = list(self.rep)
        s.lab = dict(self.lab)
        return s

    def label(self, u: int, w: int) -> Optional[int]:
        a, b = self.rep[u], self.rep[w]
        if a == b:
            return EQ
        return self.lab.get((a, b) if a < b else (b, a))

    def set(self, u: int, w: int, value: int) -> bool:
        a, b = self.rep[u], self.rep[w]
        if value == EQ:
            return self._merge(a, b)
        key = (a, b) if a < b else (b, a)
        if a == b:
            return False
        old = self.lab.get(key)
        if old is not None:
            return old == value
        self.lab[key] = value
        return True

    def _merge(self, a: int, b: int) -> bool:
        if a == b:
            return True
        lo, hi = min(a, b), max(a, b)
        if (lo, hi) in self.lab:
            return False
        moved = {}
        for (x, y), v in list(self.lab.items()):
            if hi in (x, y):
                other = y if x == hi else x
                del self.lab[(x, y)]
                moved[other] = v
        for other, v in moved.items():
            key = (lo, other) if lo < other else (other, lo)
            old = self.lab.get(key)
            if old is not None and old != v:
                return False
            self.lab[key] = v
        self.rep = [lo if r == hi else r for r in self.rep]
        return True


def _prepare(tables: Mapping[str, TypeTable], inst: Instance):
    index = {v: i for i, v in enumerate(inst.variables)}
    cons = []
    pairs: dict[tuple[int, int], None] = {}
    for c in inst.constraints:
        table = tables[c.rel]
        if len(table) == 0:
            return None, None
        args = [index[a] for a in c.args]
        cp = pair_list(len(args))
        for i, j in cp:
            u, w = args[i], args[j]
            if u != w:
                pairs.setdefault((min(u, w), max(u, w)))
        cons.append((args, cp, table.label_matrix(), table))
    return cons, sorted(pairs)


def _consistent(state: _State, cons) -> bool:
    for args, cp, lab, _ in cons:
        if not cp:
            continue
        rows = np.ones(lab.shape[0], dtype=bool)
        for p, (i, j) in enumerate(cp):
            v = state.label(args[i], args[j])
            if v is not None:
                rows &= lab[:, p] == v
        if not rows.any():
            return False
    return True


def _model(inst: Instance, state: _State) -> Model:
    n = len(inst.variables)
    order: dict[int, list[str]] = {}
    for i in range(n):
        order.setdefault(state.rep[i], []).append(inst.variables[i])
    reps = list(order)
    edges = set()
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            x, y = reps[a], reps[b]
            if state.lab.get((min(x, y), max(x, y))) == E:
                edges.add((a, b))
    return Model(list(order.values()), edges)


def oracle_solve(tables: Mapping[str, TypeTable], inst: Instance, cap: int = DEFAULT_CAP) -> SolveResult:
    """Backtracking search; returns the first model in label order EQ, E, N."""
    n = len(inst.variables)
    if n > cap:
        raise OracleCapExceeded(f"instance has {n} variables, oracle cap is {cap}")
    cons, pairs = _prepare(tables, inst)
    if cons is None:
        return SolveResult(UNSAT, method="oracle")
    root = _State(n)
    if not _consistent(root, cons):
        return SolveResult(UNSAT, method="oracle")

    # explicit stack of (state, next pair position) to avoid recursion limits
    stack = [(root, 0)]
    while stack:
        state, pos = stack.pop()
        while pos < len(pairs) and state.label(*pairs[pos]) is not None:
            pos += 1
        if pos == len(pairs):
            return checked(tables, inst, SolveResult(SAT, _model(inst, state), "oracle"))
        u, w = pairs[pos]
        children = []
        for value in (EQ, E, N):
            child = state.copy()
            if child.set(u, w, value) and _consistent(child, cons):
                children.append((child, pos + 1))
        stack.extend(reversed(children))
    return SolveResult(UNSAT, method="oracle")


def enumeration_oracle(tables: Mapping[str, TypeTable], inst: Instance, cap: int = 5) -> SolveResult:
    """Independent check: try every type of the whole variable tuple."""
    n = len(inst.variables)
    if n > cap:
        raise OracleCapExceeded(f"enumeration oracle handles at most {cap} variables, got {n}")
    if n == 0:
        ok = all(len(tables[c.rel]) for c in inst.constraints)
        return SolveResult(SAT, Model([]), "enumeration") if ok else SolveResult(UNSAT, method="enumeration")
    index = {v: i for i, v in enumerate(inst.variables)}
    cons = [([index[a] for a in c.args], tables[c.rel]) for c in inst.constraints]
    for t in enumerate_ktypes(n):
        if all(restrict_ktype(t, args) in table for args, table in cons):
            classes: dict[int, list[str]] = {}
            for i, b in enumerate(t.block_of):
                classes.setdefault(b, []).append(inst.variables[i])
            return checked(tables, inst, SolveResult(SAT, Model(list(classes.values()), set(t.edge_blocks())), "enumeration"))
    return SolveResult(UNSAT, method="enumeration")
