import random

import pytest

from graphsat.canonical import clone_variants
from graphsat.classifier import classify, preserving_variants
from graphsat.dsl import load_spec
from graphsat.errors import InternalInconsistencyError, NotBijunctiveError, NotEdgeAffineError, OracleCapExceeded
from graphsat.ktypes import EQ, E, N, KType, TypeTable, discrete_ktypes, enumerate_ktypes
from graphsat.relations import builtin_table
from graphsat.solvers import (BijunctiveClause, Constraint, EdgeAffineClause, Instance, Model, SolveResult,
                              bool_of_type, compile_bijunctive, compile_edge_affine, dispatch_solve,
                              enumeration_oracle, implies_equal, injectivize, oracle_solve, solve_equality,
                              solve_fig2, solve_fig3, solve_fig3_2sat, solve_semilattice, solve_trivial,
                              specialize_table, validate_model)
from graphsat.solvers.dispatch import NP_WARNING, method_for
from graphsat.solvers.model import checked
from graphsat.solvers.normal_forms import affine_table, bijunctive_table
from support import close_under, describe, random_instance, random_language

two = {label: TypeTable(2, [t]) for label, t in zip((EQ, N, E), enumerate_ktypes(2))}
ONE_EDGE = load_spec("rel R(x,y,z) := (E(x,y) & !E(y,z) & !E(x,z)) | (!E(x,y) & E(y,z) & !E(x,z))"
                     " | (!E(x,y) & !E(y,z) & E(x,z));")["R"]
R3 = builtin_table("R3")
REVEN = TypeTable(3, set(discrete_ktypes(3)) - R3.types)


def inst(*cons, variables=None):
    cons = [Constraint(rel, tuple(args)) for rel, args in cons]
    if variables is None:
        seen = {}
        for c in cons:
            for a in c.args:
                seen.setdefault(a)
        variables = tuple(seen)
    return Instance(tuple(variables), cons)


def table(*labels):
    return TypeTable(2, [t for l in labels for t in two[l].types])


# -- model plumbing -----------------------------------------------------------

def test_specialize_examples():
    assert len(specialize_table(two[E], ("a", "a"))[0]) == 0
    assert len(specialize_table(R3, ("a", "b", "a"))[0]) == 0
    spec, names = specialize_table(table(EQ, N), ("a", "a"))
    assert names == ("a",) and spec == TypeTable(1, enumerate_ktypes(1))


def test_implies_equal_and_injectivize():
    assert implies_equal(two[EQ], 0, 1)
    assert not implies_equal(table(EQ, E), 0, 1)
    assert not any(implies_equal(R3, i, j) for i, j in ((0, 1), (0, 2), (1, 2)))
    assert injectivize(table(EQ, E, N)) == table(E, N)
    assert injectivize(builtin_table("H")) == builtin_table("H")
    assert bool_of_type(KType((0, 1, 2), 0b001)) == 0b001
    with pytest.raises(ValueError):
        bool_of_type(KType((0, 0, 1)))


def test_validate_model_examples():
    i = inst(("R3", "abc"))
    tables = {"R3": R3, "NEQ": builtin_table("NEQ")}
    assert validate_model(tables, i, Model([["a"], ["b"], ["c"]], {(0, 1)}))
    assert not validate_model(tables, i, Model([["a"], ["b"], ["c"]]))
    assert not validate_model(tables, inst(("NEQ", "ab")), Model([["a", "b"]]))
    # a model must partition exactly the declared variables
    assert not validate_model(tables, i, Model([["a"], ["b"]]))


def test_checked_raises_on_bad_model():
    bad = SolveResult("sat", Model([["a"], ["b"], ["c"]]), "test")
    with pytest.raises(InternalInconsistencyError):
        checked({"R3": R3}, inst(("R3", "abc")), bad)


def test_instance_json_and_check():
    i = inst(("R3", "abc"), variables="abcd")
    assert Instance.from_json(i.to_json()) == i
    i.check({"R3": R3})
    for bad in (inst(("X", "abc")), inst(("R3", "ab")), Instance(("a", "b"), [Constraint("R3", ("a", "b", "c"))]),
                Instance(("a", "a"), [])):
        with pytest.raises(ValueError):
            bad.check({"R3": R3})


# -- oracle -------------------------------------------------------------------

def test_oracle_examples():
    r = oracle_solve({"R": ONE_EDGE}, inst(("R", "abc")))
    assert r.sat and validate_model({"R": ONE_EDGE}, inst(("R", "abc")), r.model)
    assert oracle_solve({"E": two[E]}, inst(("E", "aa"))).status == "unsat"
    assert oracle_solve({"R3": R3, "Re": REVEN}, inst(("R3", "abc"), ("Re", "abc"))).status == "unsat"


def test_oracle_cap():
    big = inst(*[("NEQ", (f"x{i}", f"x{i + 1}")) for i in range(9)])
    with pytest.raises(OracleCapExceeded):
        oracle_solve({"NEQ": builtin_table("NEQ")}, big)
    assert oracle_solve({"NEQ": builtin_table("NEQ")}, big, cap=10).sat


@pytest.mark.parametrize("seed", range(3))
def test_oracle_against_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(40):
        tables = random_language(rng)
        i = random_instance(rng, tables, max_vars=5)
        a, b = oracle_solve(tables, i), enumeration_oracle(tables, i)
        assert a.status == b.status, describe(tables, i)
        if a.sat:
            assert validate_model(tables, i, a.model) and validate_model(tables, i, b.model)


# -- individual solvers -------------------------------------------------------

def test_trivial():
    full = table(EQ, E, N)
    r = solve_trivial({"F": full}, inst(("F", "ab"), ("F", "bc")))
    assert r.sat and r.model.classes == [["a", "b", "c"]]
    assert solve_trivial({"Z": TypeTable(2)}, inst(("Z", "ab"))).status == "unsat"
    empty = solve_trivial({}, Instance((), []))
    assert empty.sat and empty.model.classes == []


def test_semilattice_examples():
    tables = {"EDGE": two[E], "NONEDGE": two[N], "NEQ": table(E, N)}
    r = solve_semilattice(tables, inst(("EDGE", "ab"), ("NONEDGE", "bc")), "chain-eq-n-e")
    assert r.model.classes == [["a"], ["b"], ["c"]] and r.model.edges == {(0, 1), (0, 2)}
    assert solve_semilattice(tables, inst(("EDGE", "ab"), ("NONEDGE", "ab")), "chain-eq-n-e").status == "unsat"
    tables = {"EQrel": two[EQ], "EDGE": two[E]}
    r = solve_semilattice(tables, inst(("EQrel", "ab"), ("EDGE", "bc")), "chain-eq-n-e")
    assert r.model.classes == [["a", "b"], ["c"]] and r.model.edges == {(0, 1)}


def test_equality_examples():
    rimpl = load_spec("rel Rimpl(x,y,z) := x != y | y = z;")["Rimpl"]
    # the clique-closed part: every partition paired with the complete block graph
    rimpl_clique = TypeTable(3, [t for t in rimpl.types if t.edges == (1 << (t.m * (t.m - 1) // 2)) - 1])
    tables = {"EQrel": two[EQ], "Rimpl": rimpl_clique}
    r = solve_equality(tables, inst(("EQrel", "ab"), ("Rimpl", "abc")), "clique")
    assert r.sat and r.model.classes == [["a", "b", "c"]]
    r = solve_equality({"EQrel": two[EQ]}, inst(("EQrel", "ab")), "clique")
    assert r.model.classes == [["a", "b"]]
    assert solve_equality({"Z": TypeTable(2)}, inst(("Z", "ab")), "independent").status == "unsat"


def test_fig2_examples():
    r = solve_fig2({"R3": R3}, inst(("R3", "abc"), ("R3", "abd")), "minority")
    assert r.sat and r.model.classes == [["a"], ["b"], ["c"], ["d"]] and r.model.edges == {(0, 1)}
    tables = {"R3": R3, "Re": REVEN}
    assert solve_fig2(tables, inst(("R3", "abc"), ("Re", "abc")), "minority").status == "unsat"
    # contraction: the EQ constraint merges a and b first
    tables = {"EQrel": two[EQ], "R3": R3}
    r = solve_fig2(tables, inst(("EQrel", "ab"), ("R3", "bcd")), "minority")
    assert r.sat and ["a", "b"] in r.model.classes


def test_fig3_examples():
    r = solve_fig3({"R3": R3}, inst(("R3", "abc"), ("R3", "abd")))
    assert r.sat and validate_model({"R3": R3}, inst(("R3", "abc"), ("R3", "abd")), r.model)
    assert solve_fig3({"R3": R3, "Re": REVEN}, inst(("R3", "abc"), ("Re", "abc"))).status == "unsat"
    r = solve_fig3_2sat({"N": two[N]}, inst(("N", "ab")))
    assert r.sat and r.model.classes == [["a"], ["b"]] and not r.model.edges


def test_dispatch_routes():
    assert classify([R3]).clone_id == 11 and method_for(11) == "fig3"
    routes = {1: "trivial", 2: "semilattice", 3: "semilattice", 4: "semilattice", 5: "semilattice", 6: "fig3-2sat",
              7: "fig2", 8: "fig2", 9: "fig2", 10: "fig2", 11: "fig3", 12: "fig2", 13: "fig2", 14: "fig2",
              15: "fig2", 16: "equality", 17: "equality", None: "oracle"}
    assert {c: method_for(c) for c in routes} == routes
    hard = {"R": ONE_EDGE}
    r = dispatch_solve(hard, inst(("R", "abc")), classify(hard.values()))
    assert r.method == "oracle" and r.warning == NP_WARNING
    tables = {"R3": R3}
    c = classify(tables.values())
    assert dispatch_solve(tables, inst(("R3", "abc")), c).method == "fig3"
    assert dispatch_solve(tables, inst(("R3", "abc")), c, method="fig2").method == "fig2"
    with pytest.raises(ValueError):
        dispatch_solve(tables, inst(("R3", "abc")), c, method="semilattice")
    with pytest.raises(ValueError):
        dispatch_solve(tables, inst(("R3", "abc")), c, method="magic")


def test_fig2_and_fig3_agree_on_r3():
    rng = random.Random(5)
    tables = {"R3": R3, "Re": REVEN}
    assert {v.clone_id for v in preserving_variants([R3])} >= {11, 12}
    for _ in range(60):
        i = random_instance(rng, {"R3": R3}, max_vars=6)
        assert solve_fig2({"R3": R3}, i, "minority").status == solve_fig3({"R3": R3}, i).status
    for _ in range(30):
        i = random_instance(rng, tables, max_vars=5)
        assert solve_fig3(tables, i).status == oracle_solve(tables, i).status


# -- normal forms ---------------------------------------------------------------

def test_edge_affine_examples():
    (c,) = compile_edge_affine(table(EQ, E))
    assert c == EdgeAffineClause((), ((0, 1),), 1, True)
    (c,) = compile_edge_affine(table(E, N))
    assert c.diseq == ((0, 1),) and not c.has_xor
    clauses = compile_edge_affine(R3)
    assert affine_table(clauses, 3) == R3
    injective = [c for c in clauses if not c.diseq]
    assert [(c.xor_pairs, c.parity) for c in injective] == [(((0, 1), (0, 2), (1, 2)), 1)]
    with pytest.raises(NotEdgeAffineError):
        compile_edge_affine(ONE_EDGE)


def test_bijunctive_examples():
    clauses = compile_bijunctive(table(EQ, N))
    assert bijunctive_table(clauses, 2) == table(EQ, N)
    assert all(x == N for c in clauses for x, _ in c.payload)
    clauses = compile_bijunctive(two[E])
    assert bijunctive_table(clauses, 2) == two[E]
    assert any(c.diseq == ((0, 1),) and not c.payload for c in clauses)
    assert any(c.payload and all(x == E for x, _ in c.payload) for c in clauses)
    with pytest.raises(NotBijunctiveError):
        compile_bijunctive(ONE_EDGE)


def test_one_edge_or_triangle_compiles_affine_only():
    table_ = load_spec("rel R(x,y,z) := (E(x,y) & !E(y,z) & !E(x,z)) | (!E(x,y) & E(y,z) & !E(x,z))"
                       " | (!E(x,y) & !E(y,z) & E(x,z)) | (E(x,y) & E(y,z) & E(x,z));")["R"]
    assert table_ == R3
    assert affine_table(compile_edge_affine(table_), 3) == table_
    with pytest.raises(NotBijunctiveError):
        compile_bijunctive(table_)


def test_relaxed_bijunctive_clause():
    # one literal may hold while the other pair collapses
    c = BijunctiveClause((), ((E, (0, 1)), (N, (0, 2))))
    t = bijunctive_table([c], 3)
    assert KType((0, 1, 0), 1) in t  # pair 13 equal, 12 an edge
    assert KType((0, 0, 0)) in t
    assert KType((0, 1, 0)) not in t  # 12 a non-edge and 13 equal: no literal holds


def test_bijunctive_tables_under_clone6():
    # relations closed under a clone-6 variant need the relaxed reading
    rng = random.Random(3)
    v = clone_variants(6)[5]
    for _ in range(30):
        seed = rng.sample(enumerate_ktypes(3), 2)
        t = TypeTable(3, close_under(seed, v))
        if all(preserving_variants_all(t, 6)):
            assert bijunctive_table(compile_bijunctive(t), 3) == t


def preserving_variants_all(t, clone):
    from graphsat.canonical import preserves
    return [preserves(v.table, t) for v in clone_variants(clone)]


@pytest.mark.parametrize("seed", range(3))
def test_contraction_preserves_satisfiability(seed):
    from graphsat.solvers.fig2 import contract
    from graphsat.solvers.model import UnionFind

    rng = random.Random(50 + seed)
    for _ in range(60):
        tables = random_language(rng)
        tables["EQrel"] = two[EQ]
        i = random_instance(rng, tables, max_vars=6)
        uf = UnionFind(i.variables)
        if contract(tables, i, uf) is None:
            assert not oracle_solve(tables, i).sat, describe(tables, i)
            continue
        # replay the merges as explicit equality constraints
        extra = [Constraint("EQrel", (v, uf.find(v))) for v in i.variables if uf.find(v) != v]
        replayed = Instance(i.variables, i.constraints + extra)
        assert oracle_solve(tables, i).status == oracle_solve(tables, replayed).status, describe(tables, i)
