import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from formulas import forcing_pool
from vlab.errors import BudgetError, ClassificationError, ParseError
from vlab.forcing import (Forcer, Poset, absolute_ma_check, all_filters, chain, check_name,
                          dense_sets, enumerate_posets, eval_name, extension, fan, forces_semantic,
                          generic_filters, generic_name, is_ccc, is_generic, name_space,
                          names_of_rank, parse_poset, format_poset, trivial_poset)
from vlab.hf import EMPTY, make_set, ordinal, pair, rank, stage
from vlab.multiverse import universe_model
from vlab.syntax import And, Const, Eq, Forall, Mem, Or, Var, parse_formula

POSETS = enumerate_posets(5)
M5 = universe_model([ordinal(5)])


def test_poset_counts():
    # posets with a top on n elements: one per poset on the n-1 others
    assert [sum(len(P) == n for P in POSETS) for n in range(1, 6)] == [1, 1, 2, 5, 16]


def test_generic_examples():
    assert generic_filters(trivial_poset()) == [frozenset([EMPTY])]
    P = fan(2)
    a, b = ordinal(1), ordinal(2)
    assert set(generic_filters(P)) == {frozenset([EMPTY, a]), frozenset([EMPTY, b])}


def test_genericity_both_directions():
    for P in POSETS:
        gens = set(generic_filters(P))
        for G in gens:
            assert all(G & D for D in dense_sets(P))
        brute = {F for F in all_filters(P) if all(F & D for D in dense_sets(P))}
        assert brute == gens
        assert all(is_generic(P, G) for G in gens)


def test_antichains():
    assert is_ccc(chain(4))[1] == 1
    assert is_ccc(fan(3))[1] == 3
    for P in POSETS:
        ok, size, A = is_ccc(P)
        assert ok and len(A) == size
        for k in range(size + 1, len(P) + 1):
            for B in combinations(P.conditions, k):
                assert any(P.compatible(x, y) for x, y in combinations(B, 2))


def test_name_evaluation():
    P = fan(2)
    assert eval_name(EMPTY, frozenset([EMPTY])) is EMPTY
    for G in generic_filters(P):
        for x in M5.domain:
            assert eval_name(check_name(x, P.top), G) is x
    g = generic_name(P)
    vals = {eval_name(g, G) for G in generic_filters(P)}
    assert len(vals) == 2
    with pytest.raises(BudgetError):
        names_of_rank(fan(4), 2)


def test_extension_examples():
    assert extension(M5, trivial_poset(), [EMPTY]).domain == M5.domain
    P = fan(2)
    for G in generic_filters(P):
        ext = extension(M5, P, G)
        assert M5.domain <= ext.domain
        assert ext.naturals() == M5.naturals()
        assert eval_name(generic_name(P), G) in ext.domain
    with pytest.raises(ValueError):
        extension(universe_model([EMPTY]), P, generic_filters(P)[0])


def test_forcing_examples():
    P = fan(2)
    f = Forcer(M5, P)
    x = Const(ordinal(3))
    assert f.forces(P.top, Eq(x, x))
    marker = Mem(Const(ordinal(1)), Var("g"))
    asg = {"g": generic_name(P)}
    assert f.forces(ordinal(1), marker, asg)
    assert not f.forces(P.top, marker, asg)
    assert forces_semantic(ordinal(1), marker, M5, P, asg=asg)
    assert not forces_semantic(P.top, marker, M5, P, asg=asg)
    with pytest.raises(ClassificationError):
        f.forces(P.top, parse_formula("forall x . exists y . x in y"))


def sample_names(P, rng, extra=8):
    names = names_of_rank(P, 1)
    for _ in range(extra):
        cons = [pair(rng.choice(names), rng.choice(P.conditions)) for _ in range(rng.randint(0, 3))]
        names.append(make_set(cons))
    return names + [generic_name(P)]


@given(st.integers(0, 10 ** 6))
def test_semantic_matches_syntactic_and_persists(seed):
    rng = random.Random(seed)
    P = rng.choice(POSETS)
    pool = forcing_pool(rng.randint(0, 50), [EMPTY, ordinal(1)])
    names = sample_names(P, rng)
    f = Forcer(M5, P)
    for phi in rng.sample(pool, 6):
        asg = {"a": rng.choice(names), "b": rng.choice(names)}
        forced = {p: f.forces(p, phi, asg) for p in P.conditions}
        for p in P.conditions:
            assert forced[p] == forces_semantic(p, phi, M5, P, asg=asg)
            if forced[p]:
                assert all(forced[q] for q in P.below(p))


def test_name_space_contents():
    P = fan(2)
    space = name_space(M5, P, 2)
    assert generic_name(P) in space
    assert all(check_name(x, P.top) in space for x in M5.domain)
    with pytest.raises(BudgetError):
        name_space(M5, P, 9)


def rank3_fan():
    """Top above two atoms, all of rank 3, over the least universe model
    holding the condition set."""
    t, a, b = [x for x in sorted(stage(4)) if rank(x) == 3][:3]
    P = Poset.make([t, a, b], [(a, t), (b, t)])
    return P, universe_model([P.as_set()]), (t, a, b)


def test_absolute_ma():
    P, W, (t, a, b) = rank3_fan()
    assert absolute_ma_check(W, P, []).holds
    old = (parse_formula("x = {}"), "x")
    rep = absolute_ma_check(W, P, [old])
    assert rep.holds and rep.items[0].ground_witness is EMPTY
    x, y = Var("x"), Var("y")
    is_ta = And(Mem(Const(t), x), And(Mem(Const(a), x),
                Forall("y", Or(Eq(y, Const(t)), Eq(y, Const(a))), x)))
    rep = absolute_ma_check(W, P, [(is_ta, "x")])
    item = rep.items[0]
    assert item.forced_by is a and item.ground_witness is None
    assert not rep.holds
    for G in generic_filters(P):
        assert (make_set([t, a]) in extension(W, P, G).domain) == (a in G)


def test_poset_text_roundtrip():
    for P in POSETS:
        Q = parse_poset(format_poset(P))
        assert Q.conditions == P.conditions and Q.order == P.order
    Q = parse_poset("cond a\ncond top\na <= top\n")
    assert Q.top is EMPTY and Q.label(EMPTY) == "top"
    for bad in ["cond a\ncond a", "cond a\nb <= a", "cond a\ncond b", "junk line here"]:
        with pytest.raises(ParseError):
            parse_poset(bad)


def test_forcer_rejects_non_names():
    P = chain(2)
    f = Forcer(universe_model([ordinal(2)]), P, 2)
    with pytest.raises(ValueError):
        f.forces(P.top, parse_formula("x = x"), {"x": make_set([make_set([EMPTY])])})
