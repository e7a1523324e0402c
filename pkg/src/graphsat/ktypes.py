"""Complete types of k-tuples over the random graph.

A k-type is an equality partition of the positions together with a graph on
the blocks. Partitions are stored as restricted-growth strings and the graph
as a bitmask over block pairs in row-major order, so equal types always have
identical encodings.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ArityGuardError

MAX_ARITY = 6


class PairLabel(IntEnum):
    EQ = 0
    E = 1
    N = 2

    def __str__(self):
        return self.name


EQ, E, N = PairLabel.EQ, PairLabel.E, PairLabel.N


@lru_cache(maxsize=None)
def pair_list(k: int) -> tuple[tuple[int, int], ...]:
    """Position pairs ``(i, j)``, ``i < j``, in row-major order."""
    return tuple((i, j) for i in range(k) for j in range(i + 1, k))


@lru_cache(maxsize=None)
def _pair_index(k: int) -> dict[tuple[int, int], int]:
    return {p: n for n, p in enumerate(pair_list(k))}


def pair_index(k: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return _pair_index(k)[(i, j)]


@dataclass(frozen=True)
class KType:
    block_of: tuple[int, ...]
    edges: int = 0

    def __post_init__(self):
        # restricted growth: block_of[0] == 0 and each entry at most 1 + running max
        top = -1
        for b in self.block_of:
            if b > top + 1 or b < 0:
                raise ValueError(f"block_of {self.block_of} is not a restricted-growth string")
            top = max(top, b)
        if self.edges < 0 or self.edges >> len(pair_list(top + 1)):
            raise ValueError("edge mask refers to block pairs that do not exist")

    @property
    def arity(self) -> int:
        return len(self.block_of)

    @property
    def m(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def block_adjacent(self, a: int, b: int) -> bool:
        if a == b:
            return False
        return bool(self.edges >> pair_index(self.m, a, b) & 1)

    @property
    def adj(self) -> tuple[tuple[bool, ...], ...]:
        m = self.m
        return tuple(tuple(self.block_adjacent(a, b) for b in range(m)) for a in range(m))

    @cached_property
    def labels(self) -> tuple[PairLabel, ...]:
        """Pair labels over position pairs in row-major order."""
        out = []
        for i, j in pair_list(self.arity):
            bi, bj = self.block_of[i], self.block_of[j]
            if bi == bj:
                out.append(EQ)
            else:
                out.append(E if self.block_adjacent(bi, bj) else N)
        return tuple(out)

    @cached_property
    def code(self) -> int:
        """Base-3 integer of the label vector; unique per type of fixed arity."""
        return label_code(self.labels)

    @property
    def is_discrete(self) -> bool:
        return self.m == self.arity

    def sort_key(self):
        return (self.block_of, self.edges)

    def __lt__(self, other: "KType"):
        return (self.arity, self.sort_key()) < (other.arity, other.sort_key())

    def edge_blocks(self) -> list[tuple[int, int]]:
        return [p for n, p in enumerate(pair_list(self.m)) if self.edges >> n & 1]

    def __str__(self):
        groups: dict[int, list[str]] = {}
        for pos, b in enumerate(self.block_of):
            groups.setdefault(b, []).append(str(pos + 1))
        blocks = "|".join("".join(groups[b]) for b in range(self.m))
        edges = ",".join(f"{a + 1}{b + 1}" for a, b in self.edge_blocks())
        return f"<{blocks}; {{{edges}}}>"

    def to_json(self) -> dict:
        return {"block_of": list(self.block_of), "edges": [list(e) for e in self.edge_blocks()]}


@lru_cache(maxsize=None)
def _pow3(n: int) -> np.ndarray:
    return 3 ** np.arange(n, dtype=np.int64)


def label_code(labels: Sequence[int]) -> int:
    code = 0
    for p in reversed(labels):
        code = code * 3 + int(p)
    return code


def from_labels(k: int, labels: Sequence[int], check: bool = True) -> KType:
    """Build the canonical type of a k-tuple from its pair labels.

    Raises ``ValueError`` when ``check`` is set and the labels are not
    realisable (equality not transitive, or an edge label differing inside
    an equality block).
    """
    pidx = _pair_index(k)
    block_of = [0] * k
    reps: list[int] = []
    for j in range(k):
        for r, i in enumerate(reps):
            if labels[pidx[(i, j)]] == EQ:
                block_of[j] = r
                break
        else:
            block_of[j] = len(reps)
            reps.append(j)
    edges = 0
    for n, (a, b) in enumerate(pair_list(len(reps))):
        if labels[pidx[(reps[a], reps[b])]] == E:
            edges |= 1 << n
    t = KType(tuple(block_of), edges)
    if check and tuple(t.labels) != tuple(PairLabel(x) for x in labels):
        raise ValueError(f"labels {list(labels)} do not describe a type")
    return t


def pair_label(t: KType, i: int, j: int) -> PairLabel:
    k = t.arity
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"position out of range for arity {k}: ({i}, {j})")
    bi, bj = t.block_of[i], t.block_of[j]
    if bi == bj:
        return EQ
    return E if t.block_adjacent(bi, bj) else N


def restrict_ktype(t: KType, idx: Sequence[int]) -> KType:
    """Type of the sub-tuple picked out by ``idx`` (repeats allowed)."""
    for i in idx:
        if not 0 <= i < t.arity:
            raise IndexError(f"index {i} out of range for arity {t.arity}")
    m = len(idx)
    labels = [EQ if idx[a] == idx[b] else pair_label(t, idx[a], idx[b]) for a, b in pair_list(m)]
    return from_labels(m, labels, check=False)


def _restricted_growth(k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return

    def rec(prefix: list[int], top: int):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([0], 0)


def check_arity(k: int, allow_large: bool = False) -> None:
    if k < 1:
        raise ValueError(f"arity must be positive, got {k}")
    if k > MAX_ARITY and not allow_large:
        raise ArityGuardError(
            f"arity {k} exceeds the guard of {MAX_ARITY}; pass allow_large_arity to override"
        )


@lru_cache(maxsize=None)
def _enumerate(k: int) -> tuple[KType, ...]:
    out = []
    for rgs in _restricted_growth(k):
        m = max(rgs) + 1
        for edges in range(1 << len(pair_list(m))):
            out.append(KType(rgs, edges))
    return tuple(out)


def enumerate_ktypes(k: int, allow_large_arity: bool = False) -> tuple[KType, ...]:
    """Every k-type exactly once, partitions in restricted-growth order then edge masks."""
    check_arity(k, allow_large_arity)
    return _enumerate(k)


@lru_cache(maxsize=None)
def discrete_ktypes(k: int) -> tuple[KType, ...]:
    rgs = tuple(range(k))
    return tuple(KType(rgs, e) for e in range(1 << len(pair_list(k))))


def ktype_count(k: int) -> int:
    """Closed form: sum over m of S(k, m) * 2^(m choose 2)."""
    # Stirling numbers of the second kind by the usual recurrence
    s = [[0] * (k + 1) for _ in range(k + 1)]
    s[0][0] = 1
    for n in range(1, k + 1):
        for m in range(1, n + 1):
            s[n][m] = m * s[n - 1][m] + s[n - 1][m - 1]
    return sum(s[k][m] * 2 ** (m * (m - 1) // 2) for m in range(1, k + 1))


class TypeTable:
    """A first-order definable relation, stored as the set of its k-types."""

    __slots__ = ("arity", "types", "_ordered", "_labels", "_codes")

    def __init__(self, arity: int, types: Iterable[KType] = ()):
        types = frozenset(types)
        for t in types:
            if t.arity != arity:
                raise ValueError(f"type {t} has arity {t.arity}, table arity is {arity}")
        self.arity = arity
        self.types = types
        self._ordered = None
        self._labels = None
        self._codes = None

    def __contains__(self, t: KType) -> bool:
        return t in self.types

    def __len__(self):
        return len(self.types)

    def __iter__(self) -> Iterator[KType]:
        return iter(self.ordered)

    def __eq__(self, other):
        if not isinstance(other, TypeTable):
            return NotImplemented
        return self.arity == other.arity and self.types == other.types

    def __hash__(self):
        return hash((self.arity, self.types))

    def __repr__(self):
        return f"TypeTable(arity={self.arity}, size={len(self.types)})"

    @property
    def ordered(self) -> tuple[KType, ...]:
        if self._ordered is None:
            self._ordered = tuple(sorted(self.types, key=KType.sort_key))
        return self._ordered

    def label_matrix(self) -> np.ndarray:
        """``(len, pairs)`` uint8 array of pair labels in table order."""
        if self._labels is None:
            p = len(pair_list(self.arity))
            mat = np.zeros((len(self.types), p), dtype=np.uint8)
            for r, t in enumerate(self.ordered):
                mat[r] = t.labels
            self._labels = mat
        return self._labels

    def sorted_codes(self) -> np.ndarray:
        if self._codes is None:
            self._codes = np.sort(np.array([t.code for t in self.types], dtype=np.int64))
        return self._codes

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        table = self.sorted_codes()
        if len(table) == 0:
            return np.zeros(codes.shape, dtype=bool)
        pos = np.minimum(np.searchsorted(table, codes), len(table) - 1)
        return table[pos] == codes

    # set algebra, used by the DSL invariants and builtin definitions
    def _same(self, other: "TypeTable"):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")

    def __and__(self, other):
        self._same(other)
        return TypeTable(self.arity, self.types & other.types)

    def __or__(self, other):
        self._same(other)
        return TypeTable(self.arity, self.types | other.types)

    def __sub__(self, other):
        self._same(other)
        return TypeTable(self.arity, self.types - other.types)

    def complement(self, allow_large_arity: bool = False) -> "TypeTable":
        return TypeTable(self.arity, set(enumerate_ktypes(self.arity, allow_large_arity)) - self.types)


def codes_of(labels: np.ndarray) -> np.ndarray:
    """Row codes for a ``(..., pairs)`` label array."""
    return labels.astype(np.int64) @ _pow3(labels.shape[-1])
