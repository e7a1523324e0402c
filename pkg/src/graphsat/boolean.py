"""Boolean kernels: GF(2) elimination, 2SAT, and structure extraction.

Bit vectors are Python ints; coordinate ``i`` is bit ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .errors import NotBijunctiveError


@dataclass(frozen=True)
class BoolRelation:
    width: int
    tuples: frozenset[int]

    def __post_init__(self):
        bad = [t for t in self.tuples if t < 0 or t >> self.width]
        if bad:
            raise ValueError(f"tuple {bad[0]:b} does not fit width {self.width}")

    @classmethod
    def of(cls, width: int, tuples: Iterable[int]) -> "BoolRelation":
        return cls(width, frozenset(tuples))

    def __len__(self):
        return len(self.tuples)


@dataclass
class AffineSystem:
    n: int
    equations: list[tuple[int, int]] = field(default_factory=list)  # (support mask, parity)

    def satisfied_by(self, x: int) -> bool:
        return all(bin(mask & x).count("1") % 2 == p for mask, p in self.equations)

    def to_json(self) -> dict:
        return {"n": self.n, "equations": [{"support": support(m), "parity": p} for m, p in self.equations]}


Literal = tuple[int, bool]  # (index, positive?)


@dataclass
class TwoSatInstance:
    n: int
    clauses: list[tuple[Literal, Literal]] = field(default_factory=list)

    def satisfied_by(self, x: int) -> bool:
        return all(_lit(a, x) or _lit(b, x) for a, b in self.clauses)

    def to_json(self) -> dict:
        return {"n": self.n, "clauses": [[[i, s] for i, s in c] for c in self.clauses]}


def _lit(lit: Literal, x: int) -> bool:
    i, s = lit
    return bool(x >> i & 1) == s


def support(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


# -- GF(2) ------------------------------------------------------------------

def _reduce_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by pivot (highest set bit)."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return basis


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(_reduce_basis(vectors))


def gauss_solve(system: AffineSystem) -> Optional[int]:
    """A solution with free variables 0, or None when the system is inconsistent."""
    n = system.n
    rows: dict[int, tuple[int, int]] = {}  # pivot -> (mask, parity), pivot = lowest set bit
    for mask, p in system.equations:
        if mask >> n:
            raise ValueError("equation mentions a variable beyond n")
        for piv, (rm, rp) in rows.items():
            if mask >> piv & 1:
                mask ^= rm
                p ^= rp
        if not mask:
            if p:
                return None
            continue
        low = (mask & -mask).bit_length() - 1
        # keep rows fully reduced so back substitution is a single pass
        for piv, (rm, rp) in list(rows.items()):
            if rm >> low & 1:
                rows[piv] = (rm ^ mask, rp ^ p)
        rows[low] = (mask, p)
    x = 0
    for piv, (mask, p) in rows.items():
        # free variables are 0 and every other pivot is eliminated from this row
        if p:
            x |= 1 << piv
    return x


def _dual_basis(width: int, vectors: list[int]) -> list[int]:
    """Basis of the space of masks orthogonal to every vector."""
    basis = _reduce_basis(vectors)
    # reduced row echelon form with pivots at highest bits
    pivots = sorted(basis)
    for p in pivots:
        for q in pivots:
            if q != p and basis[q] >> p & 1:
                basis[q] ^= basis[p]
    free = [i for i in range(width) if i not in basis]
    out = []
    for f in free:
        c = 1 << f
        for p in pivots:
            if basis[p] >> f & 1:
                c |= 1 << p
        out.append(c)
    return out


def affine_basis(rel: BoolRelation) -> AffineSystem:
    """Independent parity checks constant on ``rel``, shortest supports first."""
    if not rel.tuples:
        raise ValueError("affine_basis needs a nonempty relation")
    w = rel.width
    tuples = sorted(rel.tuples)
    s0 = tuples[0]
    dual = _dual_basis(w, [t ^ s0 for t in tuples[1:]])
    span = [0]
    for d in dual:
        span += [x ^ d for x in span]
    candidates = sorted((c for c in span if c), key=lambda c: (bin(c).count("1"), support(c)))
    chosen: dict[int, int] = {}
    eqs = []
    for c in candidates:
        if len(eqs) == len(dual):
            break
        v = c
        while v:
            top = v.bit_length() - 1
            if top not in chosen:
                chosen[top] = v
                eqs.append((c, _parity(c & s0)))
                break
            v ^= chosen[top]
    return AffineSystem(w, eqs)


def is_affine_coset(rel: BoolRelation) -> bool:
    if not rel.tuples:
        return True
    tuples = sorted(rel.tuples)
    r = gf2_rank(t ^ tuples[0] for t in tuples[1:])
    return len(tuples) == 1 << r


def closed_under_bool_minority(rel: BoolRelation) -> bool:
    """Closed under coordinatewise x^y^z; equivalently an affine coset."""
    return is_affine_coset(rel)


def _cube(width: int) -> np.ndarray:
    return np.arange(1 << width, dtype=np.int64)


def _clause_mask(clauses: list[tuple[Literal, Literal]], width: int) -> np.ndarray:
    xs = _cube(width)
    ok = np.ones(len(xs), dtype=bool)
    for (i, si), (j, sj) in clauses:
        ok &= (((xs >> i) & 1) == si) | (((xs >> j) & 1) == sj)
    return ok


def _binary_clauses(rel: BoolRelation) -> list[tuple[Literal, Literal]]:
    w = rel.width
    arr = np.array(sorted(rel.tuples), dtype=np.int64)
    bits = [((arr >> i) & 1).astype(bool) for i in range(w)]
    clauses: list[tuple[Literal, Literal]] = []
    unit = {}
    for i in range(w):
        for s in (False, True):
            if (bits[i] == s).all():
                unit[i] = s
                clauses.append(((i, s), (i, s)))
    for i, j in combinations(range(w), 2):
        for si in (False, True):
            for sj in (False, True):
                if unit.get(i) == si or unit.get(j) == sj:
                    continue
                if ((bits[i] == si) | (bits[j] == sj)).all():
                    clauses.append(((i, si), (j, sj)))
    return clauses


def two_clause_cover(rel: BoolRelation) -> TwoSatInstance:
    """Unit and binary clauses true on ``rel`` with no removable literal; verified exact."""
    if not rel.tuples:
        raise ValueError("two_clause_cover needs a nonempty relation")
    clauses = _binary_clauses(rel)
    sol = np.flatnonzero(_clause_mask(clauses, rel.width))
    if len(sol) != len(rel.tuples) or set(sol.tolist()) != rel.tuples:
        raise NotBijunctiveError(
            f"relation of width {rel.width} with {len(rel.tuples)} tuples is not majority-closed"
        )
    return TwoSatInstance(rel.width, clauses)


def closed_under_bool_majority(rel: BoolRelation) -> bool:
    """Closed under coordinatewise majority; equivalently 2-decomposable."""
    if not rel.tuples:
        return True
    try:
        two_clause_cover(rel)
    except NotBijunctiveError:
        return False
    return True


# -- 2SAT -------------------------------------------------------------------

def _node(lit: Literal) -> int:
    i, s = lit
    return 2 * i + (1 if s else 0)


def _scc(inst: TwoSatInstance) -> list[int]:
    """Tarjan component index of every literal node of the implication graph."""
    n = inst.n
    size = 2 * n
    adj: list[list[int]] = [[] for _ in range(size)]
    for a, b in inst.clauses:
        if a[0] >= n or b[0] >= n:
            raise ValueError("clause mentions a variable beyond n")
        na, nb = _node(a), _node(b)
        adj[na ^ 1].append(nb)
        adj[nb ^ 1].append(na)

    index = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    comp = [-1] * size
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(size):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, it = work[-1]
            if it == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if it < len(adj[v]):
                work[-1] = (v, it + 1)
                w = adj[v][it]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def twosat_contradictions(inst: TwoSatInstance) -> list[int]:
    """Variables whose two literals imply each other; empty iff the instance is satisfiable."""
    comp = _scc(inst)
    return [i for i in range(inst.n) if comp[2 * i] == comp[2 * i + 1]]


def twosat_solve(inst: TwoSatInstance) -> Optional[int]:
    """Implication graph plus Tarjan SCC; None when unsatisfiable."""
    comp = _scc(inst)
    x = 0
    for i in range(inst.n):
        pos, neg = comp[2 * i + 1], comp[2 * i]
        if pos == neg:
            return None
        # Tarjan numbers components in reverse topological order
        if pos < neg:
            x |= 1 << i
    return x
