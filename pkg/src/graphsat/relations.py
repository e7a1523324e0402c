"""Named relations and the unary type-level operations behind Thomas' reducts.

Every builtin is computed from its defining predicate over k-types, never
from a hand-written list. Tables are built on first use and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from .ktypes import E, EQ, N, KType, TypeTable, enumerate_ktypes, pair_list

BUILTIN_ARITY = {
    "H": 6, "T": 4, "Tprime": 4, "P3": 3, "Q3": 3, "Q4": 4, "R3": 3, "R4": 4, "R5": 5,
    "L": 6, "E6": 6, "EDGE": 2, "NONEDGE": 2, "NEQ": 2, "EQ": 2,
}


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _degrees(t: KType) -> tuple[int, ...]:
    k = t.arity
    deg = [0] * k
    for n, (i, j) in enumerate(pair_list(k)):
        if t.edges >> n & 1:
            deg[i] += 1
            deg[j] += 1
    return tuple(sorted(deg, reverse=True))


def _odd(t: KType, positions: Iterable[int]) -> bool:
    pos = list(positions)
    return sum(t.labels[pair_list(t.arity).index((i, j))] == E for i, j in combinations(pos, 2)) % 2 == 1


def _h(t: KType) -> bool:
    if not t.is_discrete:
        return False
    pairs = [(0, 1), (2, 3), (4, 5)]
    for i, j in pair_list(6):
        if (i, j) not in pairs and t.labels[pair_list(6).index((i, j))] != N:
            return False
    return sum(t.labels[pair_list(6).index(p)] == E for p in pairs) == 1


# 4-vertex graphs named by the definition of T, keyed by sorted degree sequence
_T_SHAPES = {
    (1, 1, 0, 0),  # single edge plus two isolated vertices
    (3, 3, 2, 2),  # its complement
    (2, 1, 1, 0),  # path with two edges plus an isolated vertex
    (3, 2, 2, 1),  # its complement (the paw)
    (2, 2, 1, 1),  # path with three edges, self-complementary
}


def _t(t: KType) -> bool:
    return t.is_discrete and _degrees(t) in _T_SHAPES


def _p(t: KType) -> bool:
    full = len(pair_list(t.arity))
    return t.is_discrete and 0 < _popcount(t.edges) < full


def _r(t: KType) -> bool:
    return t.is_discrete and _popcount(t.edges) % 2 == 1


def _l(t: KType) -> bool:
    return t.is_discrete and _odd(t, (0, 1, 2)) == _odd(t, (3, 4, 5))


def _e6(t: KType) -> bool:
    eqs = [t.block_of[0] == t.block_of[1], t.block_of[2] == t.block_of[3], t.block_of[4] == t.block_of[5]]
    return sum(eqs) == 1


_PREDICATES: dict[str, Callable[[KType], bool]] = {
    "H": _h,
    "T": _t,
    "Tprime": lambda t: t.is_discrete and not _t(t),
    "P3": _p,
    "Q3": lambda t: t.is_discrete and not _p(t),
    "Q4": lambda t: t.is_discrete and not _p(t),
    "R3": _r,
    "R4": _r,
    "R5": _r,
    "L": _l,
    "E6": _e6,
    "EDGE": lambda t: t.labels[0] == E,
    "NONEDGE": lambda t: t.labels[0] == N,
    "NEQ": lambda t: t.labels[0] != EQ,
    "EQ": lambda t: t.labels[0] == EQ,
}


@lru_cache(maxsize=None)
def builtin_table(name: str) -> TypeTable:
    """Type table of a named relation."""
    if name not in BUILTIN_ARITY:
        raise KeyError(f"unknown builtin {name!r}")
    k = BUILTIN_ARITY[name]
    pred = _PREDICATES[name]
    types = enumerate_ktypes(k)
    if name != "E6":
        # all other builtins are injective, so only discrete types can qualify
        types = [t for t in types if t.is_discrete] if k > 2 else types
    return TypeTable(k, (t for t in types if pred(t)))


# -- unary actions ----------------------------------------------------------

class ActionKind(Enum):
    FLIP_ALL = "flip-all"
    FLIP_BLOCKS = "flip-blocks"
    CLIQUEIFY = "cliqueify"
    ANTICLIQUEIFY = "anticliqueify"


@dataclass(frozen=True)
class UnaryAction:
    kind: ActionKind
    blocks: frozenset[int] = frozenset()

    @classmethod
    def flip_blocks(cls, blocks: Iterable[int]) -> "UnaryAction":
        return cls(ActionKind.FLIP_BLOCKS, frozenset(blocks))


FLIP_ALL = UnaryAction(ActionKind.FLIP_ALL)
CLIQUEIFY = UnaryAction(ActionKind.CLIQUEIFY)
ANTICLIQUEIFY = UnaryAction(ActionKind.ANTICLIQUEIFY)


def _cross_mask(m: int, blocks: frozenset[int]) -> int:
    mask = 0
    for n, (a, b) in enumerate(pair_list(m)):
        if (a in blocks) != (b in blocks):
            mask |= 1 << n
    return mask


def apply_unary_action(a: UnaryAction, t: KType) -> KType:
    m = t.m
    full = (1 << len(pair_list(m))) - 1
    if a.kind is ActionKind.FLIP_ALL:
        edges = t.edges ^ full
    elif a.kind is ActionKind.CLIQUEIFY:
        edges = full
    elif a.kind is ActionKind.ANTICLIQUEIFY:
        edges = 0
    else:
        if not a.blocks or not a.blocks < frozenset(range(m)):
            raise ValueError(f"block subset {sorted(a.blocks)} is not a nonempty proper subset of {m} blocks")
        edges = t.edges ^ _cross_mask(m, a.blocks)
    return KType(t.block_of, edges)


def block_flip_orbit(t: KType) -> set[KType]:
    """All images of ``t`` under flips of nonempty proper block subsets, plus ``t``."""
    m = t.m
    out = {t}
    for r in range(1, m):
        for s in combinations(range(m), r):
            out.add(KType(t.block_of, t.edges ^ _cross_mask(m, frozenset(s))))
    return out


CLOSURE_KINDS = ("flip-all", "all-block-flips", "cliqueify", "anticliqueify", "graph-free")


def closed_under(table: TypeTable, kind: str) -> bool:
    if kind == "flip-all":
        return all(apply_unary_action(FLIP_ALL, t) in table for t in table.types)
    if kind == "all-block-flips":
        # single-block flips generate the whole group of subset flips
        return all(
            KType(t.block_of, t.edges ^ _cross_mask(t.m, frozenset([b]))) in table
            for t in table.types
            for b in range(t.m)
        )
    if kind == "cliqueify":
        return all(apply_unary_action(CLIQUEIFY, t) in table for t in table.types)
    if kind == "anticliqueify":
        return all(apply_unary_action(ANTICLIQUEIFY, t) in table for t in table.types)
    if kind == "graph-free":
        return all(
            KType(t.block_of, e) in table for t in table.types for e in range(1 << len(pair_list(t.m)))
        )
    raise ValueError(f"unknown closure kind {kind!r}")


class InterdefClass(str, Enum):
    GRAPH = "Graph"
    R4 = "R4"
    R3 = "R3"
    R5 = "R5"
    EQUALITY = "Equality"

    def __str__(self):
        return self.value


def interdef_class(tables: Iterable[TypeTable]) -> InterdefClass:
    """Which of Thomas' five reducts the language is interdefinable with."""
    tables = list(tables)
    if all(closed_under(t, "graph-free") for t in tables):
        return InterdefClass.EQUALITY
    flip = all(closed_under(t, "flip-all") for t in tables)
    sw = all(closed_under(t, "all-block-flips") for t in tables)
    if flip and sw:
        return InterdefClass.R5
    if sw:
        return InterdefClass.R3
    if flip:
        return InterdefClass.R4
    return InterdefClass.GRAPH


def closure_facts(table: TypeTable) -> dict[str, bool]:
    return {kind: closed_under(table, kind) for kind in CLOSURE_KINDS}
