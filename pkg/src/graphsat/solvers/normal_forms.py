"""Syntactic normal forms for minority- and majority-preserved relations.

Clauses refer to positions ``0..k-1`` of the relation. Both compilers follow
the same recursion: binary relations have fixed translations; a pair that is
equal in every tuple is projected away and re-imposed by equality clauses;
otherwise each identification ``i ~ j`` is compiled recursively and guarded by
``x_i != x_j``, and the injective part comes from a reduced Boolean
definition of its pair encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ..boolean import affine_basis, support, two_clause_cover
from ..dsl import _all_labels
from ..errors import NotBijunctiveError, NotEdgeAffineError
from ..ktypes import EQ, E, N, TypeTable, pair_index, pair_list, restrict_ktype
from .model import bool_relation, implies_equal, injectivize, specialize_table

Pair = tuple[int, int]


def _norm(p: Pair) -> Pair:
    return (p[0], p[1]) if p[0] <= p[1] else (p[1], p[0])


@dataclass(frozen=True)
class EdgeAffineClause:
    """``(OR diseq) or (xor pairs all distinct and XOR of edges = parity) or (xor pairs all equal)``."""

    diseq: tuple[Pair, ...] = ()
    xor_pairs: tuple[Pair, ...] = ()
    parity: int = 0
    has_xor: bool = False

    def remap(self, pos: Sequence) -> "EdgeAffineClause":
        m = lambda p: _norm((pos[p[0]], pos[p[1]]))
        return EdgeAffineClause(tuple(m(p) for p in self.diseq), tuple(m(p) for p in self.xor_pairs),
                                self.parity, self.has_xor)

    def with_diseq(self, p: Pair) -> "EdgeAffineClause":
        return EdgeAffineClause(self.diseq + (_norm(p),), self.xor_pairs, self.parity, self.has_xor)

    def to_json(self) -> dict:
        return {"diseq": [list(p) for p in self.diseq], "xor": [list(p) for p in self.xor_pairs],
                "parity": self.parity, "has_xor": self.has_xor}


Literal = tuple[int, Pair]  # (E or N, pair)


@dataclass(frozen=True)
class BijunctiveClause:
    """``(OR diseq) or (some payload literal holds) or (payload pairs all equal)``.

    Each literal is read on its own pair, so one pair may be equal while the
    other carries the literal.
    """

    diseq: tuple[Pair, ...] = ()
    payload: tuple[Literal, ...] = ()

    def remap(self, pos: Sequence) -> "BijunctiveClause":
        m = lambda p: _norm((pos[p[0]], pos[p[1]]))
        return BijunctiveClause(tuple(m(p) for p in self.diseq), tuple((x, m(p)) for x, p in self.payload))

    def with_diseq(self, p: Pair) -> "BijunctiveClause":
        return BijunctiveClause(self.diseq + (_norm(p),), self.payload)

    def to_json(self) -> dict:
        return {"diseq": [list(p) for p in self.diseq],
                "payload": [{"rel": "E" if x == E else "N", "pair": list(p)} for x, p in self.payload]}


# -- evaluation over all types ----------------------------------------------

def _column(labels: np.ndarray, k: int, p: Pair) -> np.ndarray:
    if p[0] == p[1]:
        return np.zeros(labels.shape[0], dtype=np.uint8)
    return labels[:, pair_index(k, *p)]


def _diseq_mask(labels, k, diseq) -> np.ndarray:
    out = np.zeros(labels.shape[0], dtype=bool)
    for p in diseq:
        out |= _column(labels, k, p) != EQ
    return out


def _eval_affine(c: EdgeAffineClause, labels, k) -> np.ndarray:
    out = _diseq_mask(labels, k, c.diseq)
    if c.has_xor:
        cols = [_column(labels, k, p) for p in c.xor_pairs]
        distinct = np.ones(labels.shape[0], dtype=bool)
        equal = np.ones(labels.shape[0], dtype=bool)
        par = np.zeros(labels.shape[0], dtype=np.uint8)
        for col in cols:
            distinct &= col != EQ
            equal &= col == EQ
            par ^= (col == E).astype(np.uint8)
        out |= (distinct & (par == c.parity)) | equal
    return out


def _eval_bijunctive(c: BijunctiveClause, labels, k) -> np.ndarray:
    out = _diseq_mask(labels, k, c.diseq)
    if c.payload:
        equal = np.ones(labels.shape[0], dtype=bool)
        for x, p in c.payload:
            col = _column(labels, k, p)
            equal &= col == EQ
            out |= col == x
        out |= equal
    return out


def _holds(clauses, k: int, evaluator) -> np.ndarray:
    labels = _all_labels(k)
    ok = np.ones(labels.shape[0], dtype=bool)
    for c in clauses:
        ok &= evaluator(c, labels, k)
    return ok


def clauses_table(clauses, k: int, evaluator) -> TypeTable:
    from ..ktypes import enumerate_ktypes

    types = enumerate_ktypes(k, allow_large_arity=True)
    return TypeTable(k, (types[r] for r in np.flatnonzero(_holds(clauses, k, evaluator))))


def affine_table(clauses: Sequence[EdgeAffineClause], k: int) -> TypeTable:
    return clauses_table(clauses, k, _eval_affine)


def bijunctive_table(clauses: Sequence[BijunctiveClause], k: int) -> TypeTable:
    return clauses_table(clauses, k, _eval_bijunctive)


# -- the shared recursion ---------------------------------------------------

def _dedupe(clauses):
    return tuple(dict.fromkeys(clauses))


class _Form:
    def __init__(self, name, base, equal_clauses, injective_clauses, evaluator, error):
        self.name = name
        self.base = base
        self.equal_clauses = equal_clauses
        self.injective_clauses = injective_clauses
        self.evaluator = evaluator
        self.error = error

    def compile(self, table: TypeTable) -> tuple:
        k = table.arity
        if k == 1:
            return () if len(table) else (self.empty_unary(),)
        if k == 2:
            labels = frozenset(t.labels[0] for t in table.types)
            return self.base[labels]
        for i, j in pair_list(k):
            if implies_equal(table, i, j):
                # drop position j; all tuples agree there with position i
                keep = [p for p in range(k) if p != j]
                proj = TypeTable(k - 1, (restrict_ktype(t, keep) for t in table.types))
                sub = self.cached(proj)
                return _dedupe(tuple(c.remap(keep) for c in sub) + self.equal_clauses((i, j)))
        out = []
        for i, j in pair_list(k):
            args = list(range(k))
            args[j] = i
            spec, names = specialize_table(table, args)
            for c in self.cached(spec):
                out.append(c.remap(names).with_diseq((i, j)))
        inj = injectivize(table)
        if len(inj) == 0:
            raise self.error(f"{k}-ary table with {len(table)} types has no injective tuple")
        out.extend(self.injective_clauses(bool_relation(table), k))
        return _dedupe(tuple(out))

    def empty_unary(self):
        raise NotImplementedError

    def cached(self, table: TypeTable) -> tuple:
        return _compile_cached(self.name, table)

    def verify(self, table: TypeTable, clauses) -> None:
        k = table.arity
        got = _holds(clauses, k, self.evaluator)
        want = np.zeros_like(got)
        from ..ktypes import enumerate_ktypes

        types = enumerate_ktypes(k, allow_large_arity=True)
        for r, t in enumerate(types):
            want[r] = t in table
        if not np.array_equal(got, want):
            raise self.error(f"compiled clauses do not define the {k}-ary table of {len(table)} types")


# edge affine --------------------------------------------------------------

_P = (0, 1)
_NOT_E = EdgeAffineClause((), (_P,), 0, True)
_NOT_N = EdgeAffineClause((), (_P,), 1, True)
_DISTINCT = EdgeAffineClause((_P,))

_AFFINE_BASE = {
    frozenset({E, N}): (_DISTINCT,),
    frozenset({EQ, N}): (_NOT_E,),
    frozenset({EQ, E}): (_NOT_N,),
    frozenset({E}): (_DISTINCT, _NOT_N),
    frozenset({N}): (_DISTINCT, _NOT_E),
    frozenset({EQ}): (_NOT_E, _NOT_N),
    frozenset(): (_DISTINCT, _NOT_N, _NOT_E),
    frozenset({EQ, E, N}): (),
}


def _affine_equal(p: Pair):
    return (EdgeAffineClause((), (p,), 0, True), EdgeAffineClause((), (p,), 1, True))


def _affine_injective(rel, k):
    pairs = pair_list(k)
    system = affine_basis(rel)
    return [EdgeAffineClause((), tuple(pairs[b] for b in support(mask)), p, True) for mask, p in system.equations]


class _Affine(_Form):
    def empty_unary(self):
        return EdgeAffineClause(((0, 0),))


# graph bijunctive ---------------------------------------------------------

_B_NOT_E = BijunctiveClause((), ((N, _P), (N, _P)))
_B_NOT_N = BijunctiveClause((), ((E, _P), (E, _P)))
_B_DISTINCT = BijunctiveClause((_P,))

_BIJ_BASE = {
    frozenset({E, N}): (_B_DISTINCT,),
    frozenset({EQ, N}): (_B_NOT_E,),
    frozenset({EQ, E}): (_B_NOT_N,),
    frozenset({E}): (_B_DISTINCT, _B_NOT_N),
    frozenset({N}): (_B_DISTINCT, _B_NOT_E),
    frozenset({EQ}): (_B_NOT_E, _B_NOT_N),
    frozenset(): (_B_DISTINCT, _B_NOT_N, _B_NOT_E),
    frozenset({EQ, E, N}): (),
}


def _bij_equal(p: Pair):
    return (BijunctiveClause((), ((N, p), (N, p))), BijunctiveClause((), ((E, p), (E, p))))


def _bij_injective(rel, k):
    pairs = pair_list(k)
    inst = two_clause_cover(rel)
    return [
        BijunctiveClause((), tuple((E if s else N, pairs[i]) for i, s in clause))
        for clause in inst.clauses
    ]


class _Bijunctive(_Form):
    def empty_unary(self):
        return BijunctiveClause(((0, 0),))


_FORMS = {
    "affine": _Affine("affine", _AFFINE_BASE, _affine_equal, _affine_injective, _eval_affine, NotEdgeAffineError),
    "bijunctive": _Bijunctive("bijunctive", _BIJ_BASE, _bij_equal, _bij_injective, _eval_bijunctive, NotBijunctiveError),
}


@lru_cache(maxsize=100_000)
def _compile_cached(name: str, table: TypeTable) -> tuple:
    return _FORMS[name].compile(table)


@lru_cache(maxsize=100_000)
def _verified(name: str, table: TypeTable) -> tuple:
    form = _FORMS[name]
    try:
        clauses = _compile_cached(name, table)
    except (NotEdgeAffineError, NotBijunctiveError) as exc:
        raise form.error(str(exc)) from None
    form.verify(table, clauses)
    return clauses


def compile_edge_affine(table: TypeTable) -> tuple[EdgeAffineClause, ...]:
    """Edge affine clauses defining ``table``; raises NotEdgeAffineError if none exist."""
    return _verified("affine", table)


def compile_bijunctive(table: TypeTable) -> tuple[BijunctiveClause, ...]:
    """Graph bijunctive clauses defining ``table``; raises NotBijunctiveError if none exist."""
    return _verified("bijunctive", table)
