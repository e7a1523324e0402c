"""Instance generators for the three NP-hardness reductions.

Each generator turns a Boolean formula into a graph-SAT instance over a fixed
builtin language. Witness builders construct the graph described by the
forward direction of each reduction from a satisfying Boolean assignment, so
instances too large for the search oracle can still be checked with
``validate_model``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .ktypes import TypeTable
from .relations import builtin_table
from .solvers.model import Constraint, Instance, Model

KINDS = ("one-in-three", "nae", "sum2")
_WIDTH = {"one-in-three": 3, "nae": 3, "sum2": 4}
_LANGUAGE = {"one-in-three": ("H",), "nae": ("P3", "Q4"), "sum2": ("T", "L")}


@dataclass(frozen=True)
class BoolFormula:
    """Positive clauses (or 4-variable equations for ``sum2``) over named Boolean variables."""

    kind: str
    variables: tuple[str, ...]
    clauses: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown formula kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("formula declares a variable twice")
        declared = set(self.variables)
        width = _WIDTH[self.kind]
        for n, clause in enumerate(self.clauses):
            if len(clause) != width:
                raise ValueError(f"clause {n} has {len(clause)} variables, {self.kind} needs {width}")
            stray = [x for x in clause if x not in declared]
            if stray:
                raise ValueError(f"clause {n} uses undeclared variable {stray[0]!r}")
            if len(set(clause)) != width:
                raise ValueError(f"clause {n} repeats a variable")

    @classmethod
    def from_json(cls, doc: Mapping) -> "BoolFormula":
        clauses = tuple(tuple(c) for c in doc.get("clauses", ()))
        return cls(doc["kind"], tuple(doc.get("variables", ())), clauses)

    def to_json(self) -> dict:
        return {"kind": self.kind, "variables": list(self.variables), "clauses": [list(c) for c in self.clauses]}

    def holds(self, assignment: Mapping[str, int]) -> bool:
        for clause in self.clauses:
            ones = sum(assignment[x] for x in clause)
            if self.kind == "one-in-three" and ones != 1:
                return False
            if self.kind == "nae" and ones in (0, 3):
                return False
            if self.kind == "sum2" and ones != 2:
                return False
        return True

    def brute_force(self) -> Optional[dict[str, int]]:
        """First satisfying assignment in lexicographic order, or None."""
        for bits in itertools.product((0, 1), repeat=len(self.variables)):
            assignment = dict(zip(self.variables, bits))
            if self.holds(assignment):
                return assignment
        return None


@dataclass
class Reduction:
    formula: BoolFormula
    spec_text: str
    tables: dict[str, TypeTable]
    instance: Instance


def _language(kind: str) -> tuple[str, dict[str, TypeTable]]:
    names = _LANGUAGE[kind]
    text = "".join(f"rel {n} := {n};\n" for n in names)
    return text, {n: builtin_table(n) for n in names}


def _check_kind(f: BoolFormula, kind: str) -> None:
    if f.kind != kind:
        raise ValueError(f"expected a {kind} formula, got {f.kind}")


# -- generated variable names -------------------------------------------------

def _u(x: str) -> str:
    return f"u_{x}"


def _v(x: str) -> str:
    return f"v_{x}"


def _w(c: int, x: str, y: str) -> str:
    return f"w_C{c}_{x}_{y}"


def _y(i: int, a: str) -> str:
    return f"y{i}_{a}"


def _z(c: int, *xs: str) -> str:
    return f"z_C{c}_" + "_".join(xs)


# -- one-in-three -------------------------------------------------------------

def gen_one_in_three(f: BoolFormula) -> Reduction:
    """One H constraint per clause over the vertex pairs of its variables."""
    _check_kind(f, "one-in-three")
    text, tables = _language("one-in-three")
    variables = tuple(v for x in f.variables for v in (_u(x), _v(x)))
    cons = [Constraint("H", tuple(v for x in clause for v in (_u(x), _v(x)))) for clause in f.clauses]
    return Reduction(f, text, tables, Instance(variables, cons))


def one_in_three_witness(f: BoolFormula, assignment: Mapping[str, int]) -> Model:
    """All generated vertices distinct; ``u_x v_x`` is an edge iff x is true."""
    classes = [[_u(x)] for x in f.variables] + [[_v(x)] for x in f.variables]
    n = len(f.variables)
    edges = {(i, n + i) for i, x in enumerate(f.variables) if assignment[x]}
    return Model(classes, edges)


# -- not-all-equal ------------------------------------------------------------

def _nae_clause_vars(c: int, clause: Sequence[str]) -> tuple[str, str, str]:
    x, y, z = clause
    return _w(c, x, y), _w(c, y, z), _w(c, z, x)


def gen_nae(f: BoolFormula) -> Reduction:
    """Per clause: three fresh vertices under P3, each tied to a variable's pair by Q4."""
    _check_kind(f, "nae")
    text, tables = _language("nae")
    variables = [v for x in f.variables for v in (_u(x), _v(x))]
    cons = []
    for c, clause in enumerate(f.clauses):
        x, y, z = clause
        wxy, wyz, wzx = _nae_clause_vars(c, clause)
        variables += [wxy, wyz, wzx]
        cons.append(Constraint("P3", (wxy, wyz, wzx)))
        cons.append(Constraint("Q4", (_u(x), _v(x), wzx, wxy)))
        cons.append(Constraint("Q4", (_u(y), _v(y), wxy, wyz)))
        cons.append(Constraint("Q4", (_u(z), _v(z), wyz, wzx)))
    return Reduction(f, text, tables, Instance(tuple(variables), cons))


def nae_witness(f: BoolFormula, assignment: Mapping[str, int]) -> Model:
    """Clause vertices sharing a true variable are adjacent; pair vertices of a true variable see everything."""
    inst = gen_nae(f).instance
    index = {v: i for i, v in enumerate(inst.variables)}
    edges = set()

    def link(a: str, b: str) -> None:
        i, j = index[a], index[b]
        edges.add((min(i, j), max(i, j)))

    for x in f.variables:
        if assignment[x]:
            for hub in (_u(x), _v(x)):
                for other in inst.variables:
                    if other != hub:
                        link(hub, other)
    for c, clause in enumerate(f.clauses):
        x, y, z = clause
        wxy, wyz, wzx = _nae_clause_vars(c, clause)
        for shared, a, b in ((y, wxy, wyz), (z, wyz, wzx), (x, wzx, wxy)):
            if assignment[shared]:
                link(a, b)
    return Model([[v] for v in inst.variables], edges)


# -- sum of four equals two ---------------------------------------------------

def _sum2_z(c: int, eq: Sequence[str]) -> dict[tuple[str, ...], str]:
    return {triple: _z(c, *triple) for triple in combinations(eq, 3)}


def gen_sum2(f: BoolFormula) -> Reduction:
    """Per equation a+b+c+d=2: four triple vertices under T, linked to each variable's triangle by L."""
    _check_kind(f, "sum2")
    text, tables = _language("sum2")
    variables = [_y(i, a) for a in f.variables for i in (1, 2, 3)]
    cons = []
    for c, eq in enumerate(f.clauses):
        zs = _sum2_z(c, eq)
        variables += list(zs.values())
        cons.append(Constraint("T", tuple(zs.values())))
        for a in eq:
            with_a = tuple(name for triple, name in zs.items() if a in triple)
            cons.append(Constraint("L", with_a + tuple(_y(i, a) for i in (1, 2, 3))))
    return Reduction(f, text, tables, Instance(tuple(variables), cons))


def sum2_witness(f: BoolFormula, assignment: Mapping[str, int]) -> Model:
    """True variables get a triangle; per equation, the two triples holding both true variables are adjacent."""
    inst = gen_sum2(f).instance
    index = {v: i for i, v in enumerate(inst.variables)}
    edges = set()

    def link(a: str, b: str) -> None:
        i, j = index[a], index[b]
        edges.add((min(i, j), max(i, j)))

    for a in f.variables:
        if assignment[a]:
            for i, j in combinations((1, 2, 3), 2):
                link(_y(i, a), _y(j, a))
    for c, eq in enumerate(f.clauses):
        ones = {a for a in eq if assignment[a]}
        both = [name for triple, name in _sum2_z(c, eq).items() if ones <= set(triple)]
        if len(both) == 2:
            link(*both)
    return Model([[v] for v in inst.variables], edges)


GENERATORS = {"one-in-three": gen_one_in_three, "nae": gen_nae, "sum2": gen_sum2}
WITNESSES = {"one-in-three": one_in_three_witness, "nae": nae_witness, "sum2": sum2_witness}


def generate(f: BoolFormula) -> Reduction:
    return GENERATORS[f.kind](f)
