"""Behaviors of canonical functions and preservation of type tables.

A canonical function on the random graph is determined by what it does to
pair labels, so a behavior is just a table ``{EQ,E,N}^m -> {EQ,E,N}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ResourceGuardError
from .ktypes import EQ, E, N, KType, PairLabel, TypeTable, codes_of, from_labels, pair_list

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
CLONE_IDS = tuple(range(1, 18))
DUAL_CLONE = {1: 1, 2: 3, 3: 2, 4: 5, 5: 4, 6: 6, 7: 8, 8: 7, 9: 10, 10: 9,
              11: 11, 12: 13, 13: 12, 14: 15, 15: 14, 16: 17, 17: 16}
MAJORITY_CLONES = frozenset({6, 7, 8, 9, 10})
MINORITY_CLONES = frozenset({11, 12, 13, 14, 15})
_FLIP = (EQ, N, E)


def flip(x: PairLabel) -> PairLabel:
    return _FLIP[x]


@dataclass(frozen=True)
class BehaviorTable:
    arity: int
    out: tuple[PairLabel, ...]  # indexed by the base-3 number with the first argument most significant
    flavor: str = "injective"

    def __post_init__(self):
        if len(self.out) != 3**self.arity:
            raise ValueError(f"behavior of arity {self.arity} needs {3**self.arity} entries")

    @classmethod
    def from_rule(cls, arity: int, rule: Callable[..., PairLabel], flavor: str = "injective"):
        return cls(arity, tuple(PairLabel(rule(*args)) for args in product(PairLabel, repeat=arity)), flavor)

    def __call__(self, *args: PairLabel) -> PairLabel:
        idx = 0
        for a in args:
            idx = idx * 3 + int(a)
        return self.out[idx]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.out, dtype=np.uint8).reshape((3,) * self.arity)

    def to_json(self) -> dict:
        return {",".join(str(a) for a in args): str(self(*args)) for args in product(PairLabel, repeat=self.arity)}


@dataclass(frozen=True)
class CloneVariant:
    clone_id: int
    variant_index: int
    table: BehaviorTable

    def to_json(self) -> dict:
        return {"clone": self.clone_id, "variant": self.variant_index, "arity": self.table.arity,
                "flavor": self.table.flavor, "table": self.table.to_json()}


# -- generation rules -------------------------------------------------------

def _max(a, b):
    return N if a == N and b == N else E


def _min(a, b):
    return E if a == E and b == E else N


def _binary(on_mixed: Optional[PairLabel], on_pairs: Callable) -> BehaviorTable:
    """``on_mixed`` is the value for one EQ argument; ``None`` keeps the other label."""
    def rule(a, b):
        if a == EQ and b == EQ:
            return EQ
        if a == EQ or b == EQ:
            q = b if a == EQ else a
            return q if on_mixed is None else on_mixed
        return on_pairs(a, b)
    return BehaviorTable.from_rule(2, rule)


def _majority(a, b, c):
    return E if (a == E) + (b == E) + (c == E) >= 2 else N


def _minority(a, b, c):
    return E if ((a == E) + (b == E) + (c == E)) % 2 == 1 else N


def _ternary(core: Callable, hyper: Callable, two_eq: Optional[PairLabel]) -> BehaviorTable:
    """``hyper(p, x, y)`` handles one EQ at position ``p``; ``two_eq`` of ``None`` keeps the label."""
    def rule(*args):
        eq = [i for i, a in enumerate(args) if a == EQ]
        if len(eq) == 3:
            return EQ
        if len(eq) == 2:
            (q,) = [a for a in args if a != EQ]
            return q if two_eq is None else two_eq
        if len(eq) == 1:
            x, y = [a for a in args if a != EQ]
            return hyper(eq[0], x, y)
        return core(*args)
    return BehaviorTable.from_rule(3, rule)


def _projections(core, two_eq) -> list[BehaviorTable]:
    # bit p of the variant index picks the second remaining label when EQ sits at position p
    out = []
    for v in range(8):
        def hyper(p, x, y, v=v):
            return y if v >> p & 1 else x
        out.append(_ternary(core, hyper, two_eq))
    return out


def _const(value):
    return lambda p, x, y: value


@lru_cache(maxsize=None)
def _all_variants() -> dict[int, tuple[CloneVariant, ...]]:
    tables: dict[int, list[BehaviorTable]] = {
        1: [BehaviorTable(1, (EQ, EQ, EQ), flavor="constant")],
        2: [_binary(None, _max)],
        3: [_binary(None, _min)],
        4: [_binary(E, _max)],
        5: [_binary(N, _min)],
        6: _projections(_majority, None),
        7: [_ternary(_majority, _const(E), E)],
        8: [_ternary(_majority, _const(N), N)],
        9: [_ternary(_majority, lambda p, x, y: _max(x, y), E)],
        10: [_ternary(_majority, lambda p, x, y: _min(x, y), N)],
        11: _projections(_minority, None),
        12: _projections(_minority, E),
        13: _projections(_minority, N),
        14: [_ternary(_minority, lambda p, x, y: E if x == y else N, E)],
        15: [_ternary(_minority, lambda p, x, y: E if x != y else N, N)],
        16: [_binary(E, lambda a, b: E)],
        17: [_binary(N, lambda a, b: N)],
    }
    return {c: tuple(CloneVariant(c, i, t) for i, t in enumerate(ts)) for c, ts in tables.items()}


def clone_variants(clone_id: int) -> tuple[CloneVariant, ...]:
    if clone_id not in CLONE_IDS:
        raise ValueError(f"clone id must be in 1..17, got {clone_id}")
    return _all_variants()[clone_id]


def all_variants() -> tuple[CloneVariant, ...]:
    return tuple(v for c in CLONE_IDS for v in clone_variants(c))


def dual_table(b: BehaviorTable) -> BehaviorTable:
    return BehaviorTable.from_rule(b.arity, lambda *args: flip(b(*(flip(a) for a in args))), b.flavor)


# -- application ------------------------------------------------------------

def apply_behavior(b: BehaviorTable, ts: Sequence[KType]) -> KType:
    if len(ts) != b.arity:
        raise ValueError(f"behavior has arity {b.arity}, got {len(ts)} arguments")
    k = ts[0].arity
    if any(t.arity != k for t in ts):
        raise ValueError("argument types differ in arity")
    if b.flavor == "constant":
        return KType((0,) * k)
    labels = [b(*(t.labels[p] for t in ts)) for p in range(len(pair_list(k)))]
    return from_labels(k, labels)


def _images(out: np.ndarray, *labs: np.ndarray) -> np.ndarray:
    return out[labs]


def lex_violation(b: BehaviorTable, table: TypeTable, budget: float = DEFAULT_BUDGET) -> Optional[tuple[KType, ...]]:
    """Plain scan in lexicographic order over the table's canonical ordering."""
    n = len(table)
    if n == 0:
        return None
    ordered = table.ordered
    if b.flavor == "constant":
        image = KType((0,) * table.arity)
        return None if image in table else (ordered[0],)
    lab = table.label_matrix()
    out = b.array
    m = b.arity
    if m == 1:
        bad = ~table.contains_codes(codes_of(out[lab]))
        hit = np.flatnonzero(bad)
        return (ordered[hit[0]],) if len(hit) else None
    block = max(1, 4_000_000 // max(1, n * lab.shape[1]))
    if m == 2:
        for i0 in range(0, n, block):
            if min(i0 + block, n) * n > budget:
                raise ResourceGuardError(f"preservation scan exceeded {budget:.0e} applications")
            img = out[lab[i0:i0 + block, None, :], lab[None, :, :]]
            hit = np.flatnonzero(~table.contains_codes(codes_of(img)))
            if len(hit):
                i, j = divmod(int(hit[0]), n)
                return ordered[i0 + i], ordered[j]
        return None
    done = 0.0
    for i in range(n):
        first = lab[i]
        for j0 in range(0, n, block):
            done += min(block, n - j0) * n
            if done > budget:
                raise ResourceGuardError(
                    f"preservation scan exceeded {budget:.0e} applications on a table of {n} types"
                )
            img = out[first[None, None, :], lab[j0:j0 + block, None, :], lab[None, :, :]]
            hit = np.flatnonzero(~table.contains_codes(codes_of(img)))
            if len(hit):
                j, l = divmod(int(hit[0]), n)
                return ordered[i], ordered[j0 + j], ordered[l]
    return None


_SMALL_SCAN = 4_000_000
_PROBE_PREFIX = 40
_PROBE_RANDOM = 200_000


def _probe(out: np.ndarray, table: TypeTable) -> bool:
    """Cheap search for a ternary counterexample; True means one was found."""
    lab = table.label_matrix()
    w = min(len(table), _PROBE_PREFIX)
    head = lab[:w]
    img = out[head[:, None, None, :], head[None, :, None, :], head[None, None, :, :]]
    if not table.contains_codes(codes_of(img)).all():
        return True
    rng = np.random.default_rng(0)
    idx = rng.integers(0, len(table), size=(3, _PROBE_RANDOM))
    img = out[lab[idx[0]], lab[idx[1]], lab[idx[2]]]
    return not table.contains_codes(codes_of(img)).all()


def _split_check(out: np.ndarray, table: TypeTable, budget: float) -> bool:
    """Ternary preservation by splitting the pair coordinates into two halves.

    Types are grouped by their labels on the first half. For a triple of
    groups the first-half image is fixed, and the second-half images range
    over the image of a product of sets that depends only on which sets the
    groups carry. Both are computed once per distinct combination.
    """
    lab = table.label_matrix()
    pairs = lab.shape[1]
    cut = pairs // 2
    head, tail = lab[:, :cut], lab[:, cut:]
    ulab, uid = np.unique(head, axis=0, return_inverse=True)
    wlab, wid = np.unique(tail, axis=0, return_inverse=True)
    uid, wid = uid.ravel(), wid.ravel()
    nu = len(ulab)
    if float(nu) ** 3 > budget:
        raise ResourceGuardError(f"split preservation check needs {nu}^3 group triples, over budget {budget:.0e}")

    # which tail vectors appear with each head group, deduplicated into set ids
    members: list[set[int]] = [set() for _ in range(nu)]
    for u, w in zip(uid.tolist(), wid.tolist()):
        members[u].add(w)
    set_index: dict[frozenset, int] = {}
    set_of_u = np.empty(nu, dtype=np.int64)
    for u in range(nu):
        set_of_u[u] = set_index.setdefault(frozenset(members[u]), len(set_index))
    sets = [np.array(sorted(s), dtype=np.int64) for s in set_index]
    ns = len(sets)

    head_codes = codes_of(ulab)
    tail_pow = 3 ** cut
    present = np.unique(codes_of(ulab)[uid] + tail_pow * codes_of(wlab)[wid])

    # first-half images for every group triple, folded with the set ids into one key
    keys = []
    block = max(1, _SMALL_SCAN // max(1, nu * nu * max(cut, 1)))
    for a0 in range(0, nu, block):
        img = out[ulab[a0:a0 + block, None, None, :], ulab[None, :, None, :], ulab[None, None, :, :]]
        code = codes_of(img).astype(np.int64)
        sa = set_of_u[a0:a0 + block, None, None]
        sb = set_of_u[None, :, None]
        sc = set_of_u[None, None, :]
        key = ((code * ns + sa) * ns + sb) * ns + sc
        keys.append(np.unique(key))
    keys = np.unique(np.concatenate(keys))
    del head_codes

    tail_images: dict[tuple[int, int, int], np.ndarray] = {}
    work = 0.0
    for key in keys.tolist():
        key, sc = divmod(key, ns)
        key, sb = divmod(key, ns)
        code, sa = divmod(key, ns)
        trip = (sa, sb, sc)
        if trip not in tail_images:
            A, B, C = wlab[sets[sa]], wlab[sets[sb]], wlab[sets[sc]]
            work += len(A) * len(B) * len(C)
            if work > budget:
                raise ResourceGuardError(f"split preservation check exceeded {budget:.0e} applications")
            img = out[A[:, None, None, :], B[None, :, None, :], C[None, None, :, :]]
            tail_images[trip] = np.unique(codes_of(img))
        full = code + tail_pow * tail_images[trip]
        if not np.isin(full, present, assume_unique=True).all():
            return False
    return True


def preserves(b: BehaviorTable, table: TypeTable, budget: float = DEFAULT_BUDGET) -> bool:
    """Whether every application of ``b`` to members of ``table`` stays inside it."""
    n = len(table)
    if b.arity < 3 or b.flavor == "constant" or float(n) ** 3 <= _SMALL_SCAN or table.arity < 3:
        return lex_violation(b, table, budget) is None
    if _probe(b.array, table):
        return False
    return _split_check(b.array, table, budget)


def find_violation(b: BehaviorTable, table: TypeTable, budget: float = DEFAULT_BUDGET) -> Optional[tuple[KType, ...]]:
    """Lexicographically first counterexample tuple, or None if ``b`` preserves ``table``."""
    if preserves(b, table, budget):
        return None
    return lex_violation(b, table, budget=float("inf"))
