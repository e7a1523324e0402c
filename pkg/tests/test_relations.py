import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphsat.ktypes import EQ, E, N, KType, TypeTable, discrete_ktypes, enumerate_ktypes, pair_label, pair_list
from graphsat.relations import (ANTICLIQUEIFY, BUILTIN_ARITY, CLIQUEIFY, FLIP_ALL, InterdefClass, UnaryAction,
                                apply_unary_action, block_flip_orbit, builtin_table, closed_under, closure_facts,
                                interdef_class)

FOUR = list(itertools.combinations(range(4), 2))


def _edge_set(t):
    return {p for p in pair_list(t.arity) if pair_label(t, *p) == E}


def _isomorphic_to(edges, shape):
    return any({tuple(sorted((p[a], p[b]))) for a, b in shape} == edges for p in itertools.permutations(range(4)))


def test_t_against_shape_oracle():
    single = {(0, 1)}
    path2 = {(0, 1), (1, 2)}
    path3 = {(0, 1), (1, 2), (2, 3)}
    shapes = [single, path2, path3]
    shapes += [set(FOUR) - s for s in shapes]
    want = {t for t in discrete_ktypes(4) if any(_isomorphic_to(_edge_set(t), s) for s in shapes)}
    assert builtin_table("T").types == want
    assert len(want) == 48  # 6 + 12 + 12 labelled graphs and the complements of the first two


def test_h_has_three_types():
    h = builtin_table("H")
    assert len(h) == 3
    for t in h:
        assert t.is_discrete
        inner = [pair_label(t, 2 * i, 2 * i + 1) for i in range(3)]
        assert inner.count(E) == 1 and inner.count(N) == 2
        cross = [(i, j) for i, j in pair_list(6) if i // 2 != j // 2]
        assert all(pair_label(t, i, j) == N for i, j in cross)


def _odd_edges(t, positions):
    return sum(pair_label(t, i, j) == E for i, j in itertools.combinations(positions, 2)) % 2 == 1


@pytest.mark.parametrize("k", [3, 4, 5])
def test_parity_relations(k):
    want = {t for t in discrete_ktypes(k) if _odd_edges(t, range(k))}
    assert builtin_table(f"R{k}").types == want
    assert len(want) == 2 ** (k * (k - 1) // 2 - 1)


def test_p_q_and_complements():
    distinct3 = set(discrete_ktypes(3))
    p3 = builtin_table("P3")
    assert p3.types == {t for t in distinct3 if 0 < len(_edge_set(t)) < 3}
    assert builtin_table("Q3").types == distinct3 - p3.types
    assert builtin_table("Tprime").types == set(discrete_ktypes(4)) - builtin_table("T").types
    q4 = builtin_table("Q4")
    assert q4.types == {t for t in discrete_ktypes(4) if len(_edge_set(t)) in (0, 6)}


def test_link_relation():
    want = {t for t in discrete_ktypes(6) if _odd_edges(t, (0, 1, 2)) == _odd_edges(t, (3, 4, 5))}
    assert builtin_table("L").types == want


@pytest.mark.slow
def test_e6():
    def ok(t):
        eq = [pair_label(t, 2 * i, 2 * i + 1) == EQ for i in range(3)]
        return sum(eq) == 1
    assert builtin_table("E6").types == {t for t in enumerate_ktypes(6) if ok(t)}


def test_binary_builtins_and_arities():
    labels = lambda name: {pair_label(t, 0, 1) for t in builtin_table(name)}
    assert labels("EDGE") == {E}
    assert labels("NONEDGE") == {N}
    assert labels("NEQ") == {E, N}
    assert labels("EQ") == {EQ}
    for name, k in BUILTIN_ARITY.items():
        if name != "E6":
            assert builtin_table(name).arity == k
    with pytest.raises(KeyError):
        builtin_table("nope")


def test_action_examples():
    one_edge = KType((0, 1, 2), 0b001)
    assert apply_unary_action(FLIP_ALL, one_edge) == KType((0, 1, 2), 0b110)
    assert apply_unary_action(UnaryAction.flip_blocks({2}), one_edge) == KType((0, 1, 2), 0b111)
    assert apply_unary_action(CLIQUEIFY, KType((0, 0, 1))) == KType((0, 0, 1), 1)
    with pytest.raises(ValueError):
        apply_unary_action(UnaryAction.flip_blocks({0, 1, 2}), one_edge)
    with pytest.raises(ValueError):
        apply_unary_action(UnaryAction.flip_blocks(()), one_edge)


@pytest.mark.parametrize("name,flip_all,block_flips,cls", [
    ("R3", False, True, InterdefClass.R3),
    ("R4", True, False, InterdefClass.R4),
    ("R5", True, True, InterdefClass.R5),
    ("T", True, True, InterdefClass.R5),
    ("P3", True, False, InterdefClass.R4),
])
def test_closure_facts(name, flip_all, block_flips, cls):
    facts = closure_facts(builtin_table(name))
    assert (facts["flip-all"], facts["all-block-flips"]) == (flip_all, block_flips)
    assert interdef_class([builtin_table(name)]) == cls


def test_interdef_edge_cases():
    assert interdef_class([builtin_table("EDGE")]) == InterdefClass.GRAPH
    assert interdef_class([builtin_table("NEQ"), builtin_table("EQ")]) == InterdefClass.EQUALITY
    assert interdef_class([builtin_table("R3"), builtin_table("R4")]) == InterdefClass.GRAPH


types_up_to_4 = st.integers(1, 4).flatmap(lambda k: st.sampled_from(enumerate_ktypes(k)))


@given(types_up_to_4, st.data())
def test_flips_are_involutions(t, data):
    assert apply_unary_action(FLIP_ALL, apply_unary_action(FLIP_ALL, t)) == t
    if t.m > 1:
        blocks = data.draw(st.sets(st.integers(0, t.m - 1), min_size=1, max_size=t.m - 1))
        a = UnaryAction.flip_blocks(blocks)
        assert apply_unary_action(a, apply_unary_action(a, t)) == t


@given(types_up_to_4)
def test_clique_actions_idempotent(t):
    for a in (CLIQUEIFY, ANTICLIQUEIFY):
        once = apply_unary_action(a, t)
        assert apply_unary_action(a, once) == once
        assert once.block_of == t.block_of


@given(st.integers(2, 4).flatmap(lambda k: st.sets(st.sampled_from(enumerate_ktypes(k)), min_size=1, max_size=6)))
def test_block_flip_closure_matches_orbits(types):
    table = TypeTable(next(iter(types)).arity, types)
    by_orbit = all(block_flip_orbit(t) <= table.types for t in table.types)
    assert closed_under(table, "all-block-flips") == by_orbit
    closed = TypeTable(table.arity, set().union(*(block_flip_orbit(t) for t in types)))
    assert closed_under(closed, "all-block-flips")
