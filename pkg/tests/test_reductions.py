import itertools
import random

import pytest

from graphsat.classifier import NP_COMPLETE, classify
from graphsat.reductions import KINDS, WITNESSES, BoolFormula, generate
from graphsat.solvers import oracle_solve, validate_model


def formula(kind, clauses, variables=None):
    if variables is None:
        variables = sorted({x for c in clauses for x in c})
    return BoolFormula(kind, tuple(variables), tuple(tuple(c) for c in clauses))


def test_one_in_three_shapes():
    red = generate(formula("one-in-three", ["xyz"]))
    assert len(red.instance.variables) == 6 and len(red.instance.constraints) == 1
    assert red.instance.constraints[0].args == ("u_x", "v_x", "u_y", "v_y", "u_z", "v_z")
    assert red.spec_text == "rel H := H;\n"
    assert oracle_solve(red.tables, red.instance).sat


def test_one_in_three_unsat_example():
    f = formula("one-in-three", ["xyz", "xyw", "xzw", "yzw"])
    assert f.brute_force() is None
    red = generate(f)
    assert oracle_solve(red.tables, red.instance).status == "unsat"


def test_nae_shapes():
    red = generate(formula("nae", ["xyz"]))
    inst = red.instance
    assert len(inst.variables) == 9 and len(inst.constraints) == 4
    assert [c.rel for c in inst.constraints] == ["P3", "Q4", "Q4", "Q4"]
    assert inst.constraints[1].args == ("u_x", "v_x", "w_C0_z_x", "w_C0_x_y")
    assert oracle_solve(red.tables, inst, cap=9).sat


def test_sum2_shapes():
    red = generate(formula("sum2", ["abcd"]))
    inst = red.instance
    assert len(inst.variables) == 16 and len(inst.constraints) == 5
    assert inst.constraints[0].rel == "T"
    assert inst.constraints[0].args == ("z_C0_a_b_c", "z_C0_a_b_d", "z_C0_a_c_d", "z_C0_b_c_d")
    assert inst.constraints[1].args == ("z_C0_a_b_c", "z_C0_a_b_d", "z_C0_a_c_d", "y1_a", "y2_a", "y3_a")


@pytest.mark.parametrize("kind", KINDS)
def test_empty_formula_is_sat(kind):
    f = BoolFormula(kind, ("p", "q"), ())
    red = generate(f)
    assert red.instance.constraints == [] and oracle_solve(red.tables, red.instance).sat


@pytest.mark.parametrize("kind", KINDS)
def test_generated_languages_are_hard(kind):
    width = 4 if kind == "sum2" else 3
    red = generate(formula(kind, ["abcd"[:width]]))
    assert classify(red.tables.values()).verdict == NP_COMPLETE


@pytest.mark.parametrize("doc,message", [
    ({"kind": "xor", "variables": ["a"], "clauses": []}, "unknown formula kind"),
    ({"kind": "nae", "variables": ["a", "a"], "clauses": []}, "twice"),
    ({"kind": "nae", "variables": ["a", "b"], "clauses": [["a", "b"]]}, "needs 3"),
    ({"kind": "sum2", "variables": ["a", "b", "c"], "clauses": [["a", "b", "c", "d"]]}, "undeclared"),
    ({"kind": "one-in-three", "variables": ["a", "b"], "clauses": [["a", "a", "b"]]}, "repeats"),
])
def test_malformed_formulas(doc, message):
    with pytest.raises(ValueError, match=message):
        BoolFormula.from_json(doc)


def test_formula_json_round_trip():
    f = formula("sum2", ["abcd", "bcde"])
    assert BoolFormula.from_json(f.to_json()) == f


def random_formula(rng, kind):
    width = 4 if kind == "sum2" else 3
    variables = [f"x{i}" for i in range(rng.randint(width, 6))]
    clauses = [rng.sample(variables, width) for _ in range(rng.randint(1, 4))]
    return formula(kind, clauses, variables)


@pytest.mark.parametrize("kind", KINDS)
def test_witness_graphs_validate(kind):
    rng = random.Random(kind)
    checked = 0
    for _ in range(80):
        f = random_formula(rng, kind)
        red = generate(f)
        for bits in itertools.product((0, 1), repeat=len(f.variables)):
            a = dict(zip(f.variables, bits))
            if f.holds(a):
                assert validate_model(red.tables, red.instance, WITNESSES[kind](f, a)), f
                checked += 1
    assert checked > 20


def test_sum2_witness_rejects_wrong_assignment():
    f = formula("sum2", ["abcd"])
    red = generate(f)
    wrong = {"a": 1, "b": 1, "c": 1, "d": 0}
    assert not validate_model(red.tables, red.instance, WITNESSES["sum2"](f, wrong))
