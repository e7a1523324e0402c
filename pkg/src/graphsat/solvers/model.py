"""Instances, models, and the table manipulations every solver shares."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from ..errors import InternalInconsistencyError
from ..ktypes import EQ, E, N, KType, PairLabel, TypeTable, from_labels, pair_list, restrict_ktype

SAT = "sat"
UNSAT = "unsat"


@dataclass(frozen=True)
class Constraint:
    rel: str
    args: tuple[str, ...]

    def to_json(self) -> dict:
        return {"rel": self.rel, "args": list(self.args)}


@dataclass
class Instance:
    variables: tuple[str, ...]
    constraints: list[Constraint] = field(default_factory=list)

    @classmethod
    def from_json(cls, doc: Mapping) -> "Instance":
        variables = tuple(doc.get("variables", ()))
        cons = [Constraint(c["rel"], tuple(c["args"])) for c in doc.get("constraints", ())]
        if not doc.get("variables") and cons:
            seen: dict[str, None] = {}
            for c in cons:
                for a in c.args:
                    seen.setdefault(a)
            variables = tuple(seen)
        return cls(variables, cons)

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "constraints": [c.to_json() for c in self.constraints]}

    def check(self, tables: Mapping[str, TypeTable]) -> None:
        """Raise ValueError when a constraint names an unknown relation, variable or wrong arity."""
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("instance declares a variable twice")
        declared = set(self.variables)
        for c in self.constraints:
            if c.rel not in tables:
                raise ValueError(f"constraint uses unknown relation {c.rel!r}")
            if len(c.args) != tables[c.rel].arity:
                raise ValueError(f"{c.rel} has arity {tables[c.rel].arity}, constraint passes {len(c.args)} arguments")
            stray = [a for a in c.args if a not in declared]
            if stray:
                raise ValueError(f"constraint {c.rel} uses undeclared variable {stray[0]!r}")


@dataclass
class Model:
    """A finite graph witness: classes of equal variables and edges between classes."""

    classes: list[list[str]]
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        self._cls = {v: i for i, c in enumerate(self.classes) for v in c}

    def label(self, u: str, w: str) -> PairLabel:
        a, b = self._cls[u], self._cls[w]
        if a == b:
            return EQ
        return E if (min(a, b), max(a, b)) in self.edges else N

    def type_of(self, args: Sequence[str]) -> KType:
        k = len(args)
        return from_labels(k, [self.label(args[i], args[j]) for i, j in pair_list(k)], check=False)

    def to_json(self) -> dict:
        return {"classes": [list(c) for c in self.classes], "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Model":
        return cls([list(c) for c in doc["classes"]], {tuple(sorted(e)) for e in doc.get("edges", ())})


@dataclass
class SolveResult:
    status: str
    model: Optional[Model] = None
    method: str = ""
    warning: Optional[str] = None

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def to_json(self) -> dict:
        doc = {"status": self.status, "method": self.method,
               "model": self.model.to_json() if self.model is not None else None}
        if self.warning:
            doc["warning"] = self.warning
        return doc


def validate_model(tables: Mapping[str, TypeTable], inst: Instance, model: Model) -> bool:
    """Every constraint's induced type lies in its relation's table."""
    placed = [v for c in model.classes for v in c]
    if sorted(placed) != sorted(inst.variables):
        return False
    for c in inst.constraints:
        if model.type_of(c.args) not in tables[c.rel]:
            return False
    return True


def checked(tables, inst, result: SolveResult) -> SolveResult:
    if result.sat and not validate_model(tables, inst, result.model):
        raise InternalInconsistencyError(f"{result.method} produced a model that violates the instance")
    return result


# -- union-find -------------------------------------------------------------

class UnionFind:
    """Union-find whose representative is always the least variable name in its class."""

    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo
        return True

    def classes(self, order: Sequence[str]) -> list[list[str]]:
        """Classes listed by first member in ``order``, members in ``order``."""
        groups: dict[str, list[str]] = {}
        for v in order:
            groups.setdefault(self.find(v), []).append(v)
        return list(groups.values())

    def representatives(self, order: Sequence[str]) -> list[str]:
        return [self.find(c[0]) for c in self.classes(order)]


def model_from_labels(order: Sequence[str], uf: UnionFind, label_of) -> Model:
    """Build a model from merges plus ``label_of(rep_a, rep_b)`` giving E or N per class pair."""
    classes = uf.classes(order)
    reps = [uf.find(c[0]) for c in classes]
    edges = set()
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            if label_of(reps[a], reps[b]) == E:
                edges.add((a, b))
    return Model(classes, edges)


# -- table manipulation -----------------------------------------------------

def distinct_args(args: Sequence[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for a in args:
        seen.setdefault(a)
    return tuple(seen)


def specialize_table(table: TypeTable, args: Sequence[str]) -> tuple[TypeTable, tuple[str, ...]]:
    """Table over the distinct arguments, keeping types that are EQ wherever arguments coincide."""
    names = distinct_args(args)
    if len(names) == len(args):
        return table, names
    first = [args.index(v) for v in names]
    groups = [[i for i, a in enumerate(args) if a == v] for v in names]
    keep = []
    for t in table.types:
        if all(t.block_of[i] == t.block_of[g[0]] for g in groups for i in g):
            keep.append(restrict_ktype(t, first))
    return TypeTable(len(names), keep), names


def implies_equal(table: TypeTable, i: int, j: int) -> bool:
    return all(t.block_of[i] == t.block_of[j] for t in table.types)


def injectivize(table: TypeTable) -> TypeTable:
    return TypeTable(table.arity, (t for t in table.types if t.is_discrete))


def bool_of_type(t: KType) -> int:
    """Bit n is 1 iff the n-th position pair (row-major) carries an edge."""
    if not t.is_discrete:
        raise ValueError(f"type {t} is not injective")
    return t.edges


def bool_relation(table: TypeTable):
    from ..boolean import BoolRelation

    inj = injectivize(table)
    return BoolRelation.of(len(pair_list(table.arity)), (bool_of_type(t) for t in inj.types))
