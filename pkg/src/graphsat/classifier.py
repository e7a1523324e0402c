"""Tractability classification by scanning the 17 minimal tractable clones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .canonical import CLONE_IDS, DEFAULT_BUDGET, BehaviorTable, CloneVariant, clone_variants, preserves
from .errors import InternalInconsistencyError
from .ktypes import TypeTable

TRACTABLE = "tractable"
NP_COMPLETE = "np-complete"


@dataclass(frozen=True)
class Classification:
    verdict: str
    witness: Optional[CloneVariant] = None

    @property
    def tractable(self) -> bool:
        return self.verdict == TRACTABLE

    @property
    def clone_id(self) -> Optional[int]:
        return self.witness.clone_id if self.witness else None

    @property
    def variant_index(self) -> Optional[int]:
        return self.witness.variant_index if self.witness else None

    @property
    def behavior(self) -> Optional[BehaviorTable]:
        return self.witness.table if self.witness else None

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict}
        if self.witness is not None:
            doc.update(clone=self.clone_id, variant=self.variant_index)
        return doc


def _check_order(tables: Iterable[TypeTable]) -> list[TypeTable]:
    # small tables reject most variants cheaply, so look at them first
    return sorted(set(tables), key=lambda t: (len(t), t.arity, [x.sort_key() for x in t.ordered]))


def preserving_variants(tables: Iterable[TypeTable], budget: float = DEFAULT_BUDGET) -> list[CloneVariant]:
    """Every variant that preserves all tables, in scan order."""
    tables = _check_order(tables)
    return [v for c in CLONE_IDS for v in clone_variants(c) if all(preserves(v.table, t, budget) for t in tables)]


def classify(tables: Iterable[TypeTable], budget: float = DEFAULT_BUDGET, recheck: bool = True) -> Classification:
    """First clone variant, in order 1..17, that preserves every table; NP-complete if none does."""
    tables = _check_order(tables)
    for c in CLONE_IDS:
        for v in clone_variants(c):
            if all(preserves(v.table, t, budget) for t in tables):
                if recheck:
                    _recheck(v, tables)
                return Classification(TRACTABLE, v)
    return Classification(NP_COMPLETE)


def _recheck(v: CloneVariant, tables: list[TypeTable]) -> None:
    from .canonical import apply_behavior

    # independent scalar route on small tables; the vectorized scan found nothing
    for t in tables:
        if len(t) ** v.table.arity > 20_000:
            continue
        members = t.ordered
        if v.table.arity == 1:
            combos = [(a,) for a in members]
        elif v.table.arity == 2:
            combos = [(a, b) for a in members for b in members]
        else:
            combos = [(a, b, c) for a in members for b in members for c in members]
        for args in combos:
            if apply_behavior(v.table, args) not in t:
                raise InternalInconsistencyError(
                    f"clone {v.clone_id} variant {v.variant_index} reported preserving but maps {args} outside"
                )
