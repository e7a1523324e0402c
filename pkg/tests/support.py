"""Generators and reference checks shared by the test modules."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Mapping

from graphsat.canonical import CloneVariant, apply_behavior
from graphsat.ktypes import KType, TypeTable, enumerate_ktypes
from graphsat.solvers.model import Constraint, Instance

VARS = tuple(f"v{i}" for i in range(8))

# (criterion number, tier) -> result line; filled by test_acceptance, printed by conftest
ACCEPTANCE: dict[tuple[int, str], str] = {}


def report(n: int, title: str, passed: bool, detail: str = "", tier: str = "") -> None:
    label = f"criterion {n}{' ' + tier if tier else ''}"
    line = f"{label} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE[(n, tier)] = line
    print(line)


def close_under(types: Iterable[KType], variant: CloneVariant) -> set[KType]:
    """Smallest superset of ``types`` closed under the variant's behavior."""
    b = variant.table
    out = set(types)
    while True:
        members = list(out)
        new = {apply_behavior(b, args) for args in itertools.product(members, repeat=b.arity)} - out
        if not new:
            return out
        out |= new


def random_table(rng: random.Random, k: int, size: int = 3) -> TypeTable:
    pool = [t for t in enumerate_ktypes(k) if t.m > 1 or k == 1]
    if k > 1 and rng.random() < 0.5:
        pool = [t for t in pool if t.is_discrete]
    return TypeTable(k, rng.sample(pool, rng.randint(1, min(size, len(pool)))))


def random_language(rng: random.Random, variant: CloneVariant | None = None, close_prob: float = 0.8) -> dict[str, TypeTable]:
    """One to three relations of arity at most 3, usually closed under ``variant``."""
    tables = {}
    for r in range(rng.randint(1, 3)):
        k = rng.choice((1, 2, 2, 3, 3, 3))
        t = random_table(rng, k)
        if variant is not None and k >= 2 and rng.random() < close_prob:
            t = TypeTable(k, close_under(t.types, variant))
        tables[f"R{r}"] = t
    return tables


def random_instance(rng: random.Random, tables: Mapping[str, TypeTable], max_vars: int = 6,
                    max_constraints: int = 7) -> Instance:
    n = rng.randint(1, max_vars)
    names = VARS[:n]
    cons = []
    for _ in range(rng.randint(1, max_constraints)):
        rel = rng.choice(sorted(tables))
        cons.append(Constraint(rel, tuple(rng.choice(names) for _ in range(tables[rel].arity))))
    return Instance(names, cons)


def describe(tables: Mapping[str, TypeTable], inst: Instance | None = None) -> str:
    doc = {name: sorted(str(t) for t in table) for name, table in tables.items()}
    return f"{doc} {inst.to_json() if inst is not None else ''}"
