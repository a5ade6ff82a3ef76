import random

import pytest
from hypothesis import given, strategies as st

from oracles import V4, native, n_transitive, rank4_sets
from vlab.errors import ParseError, ValidationError
from vlab.fuzz import random_coding_pair, tree_mutants
from vlab.hf import EMPTY, make_set, ordinal, stage
from vlab.structures import FiniteStructure
from vlab.syntax import parse_formula
from vlab.trees import (code, decode, encode_set, et_related, format_tree, pairing_plus,
                        parse_tree, quotient, rep_pair, separation_plus, subtree,
                        transitivity_check, tt_equal, union_plus, validate_coding_pair)


def edges(t):
    return sum(len(t.kids(n)) for n in t.nodes)


def test_unfolded_tree_of_three():
    t = encode_set(ordinal(3))
    assert len(t) == 8
    assert validate_coding_pair(t).ok
    q = quotient(t)
    assert len(q) == 4 and edges(q) == 6
    # each quotient node decodes to an ordinal and points at all smaller ones
    values = {n: decode(q, n) for n in q.nodes}
    assert sorted(values.values()) == [ordinal(k) for k in range(4)]
    for n in q.nodes:
        assert {values[k] for k in q.kids(n)} == set(values[n])


def test_roundtrip_exhaustive_rank_le_3():
    for x in V4:
        assert decode(code(x)) is x


@given(rank4_sets, rank4_sets)
def test_membership_and_equality_on_codes(x, y):
    qx, qy = code(x), code(y)
    assert et_related(qx, qy) == (native(y) in native(x))
    assert tt_equal(qx, qy) == (native(x) == native(y))
    assert decode(qx) is x


@given(rank4_sets)
def test_quotient_nodes_are_the_transitive_closure(x):
    q = code(x)
    readings = [decode(q, n) for n in q.nodes]
    assert len(set(readings)) == len(readings)
    assert quotient(q) == q
    assert transitivity_check(q) == n_transitive(native(x))


@given(rank4_sets, rank4_sets)
def test_plus_operations(x, y):
    assert native(decode(pairing_plus(code(x), code(y)))) == frozenset({native(x), native(y)})
    assert native(decode(union_plus(code(x)))) == frozenset().union(*native(x))
    phi = parse_formula("exists z in x . z = {}")
    want = frozenset(z for z in native(x) if frozenset() in z)
    assert native(decode(separation_plus(code(x), phi))) == want


@given(rank4_sets, rank4_sets, rank4_sets, rank4_sets)
def test_rep_pair_injective(a, b, c, d):
    assert (rep_pair(a, b) is rep_pair(c, d)) == (a is c and b is d)


@given(st.integers(0, 10 ** 6))
def test_shuffled_coding_pairs_quotient_to_the_set(seed):
    rng = random.Random(seed)
    x, t = random_coding_pair(rng)
    assert validate_coding_pair(t).ok
    assert decode(quotient(t)) is x
    assert quotient(t) == code(x)


@given(st.integers(0, 10 ** 6))
def test_mutants_flag_the_expected_clause(seed):
    rng = random.Random(seed)
    _, t = random_coding_pair(rng)
    for m in tree_mutants(rng, t):
        report = validate_coding_pair(m.tree)
        assert not report.ok and report.clause == m.expected, (m.kind, report)
        with pytest.raises(ValidationError):
            quotient(m.tree)


def test_tree_text_roundtrip():
    t = encode_set(make_set([ordinal(2), make_set([ordinal(1)])]))
    text = format_tree(t)
    back = parse_tree(text)
    assert quotient(back) == quotient(t)
    shared = parse_tree("a\n  b\n    c\n  d\n    c\n")
    assert validate_coding_pair(shared).clause == "iii"
    for bad in ["", "  a", "a\n\tb", "a\nb", "a\n  b\n  b\n    c"]:
        with pytest.raises(ParseError):
            parse_tree(bad)


def test_subtree_and_separation_context():
    q = code(ordinal(3))
    for n in q.nodes:
        assert decode(subtree(q, n)) is decode(q, n)
    assert decode(separation_plus(q, parse_formula("x = {}"))) is make_set([EMPTY])
    ctx = FiniteStructure.from_set(stage(3))
    none = separation_plus(q, parse_formula("x in x"), ctx)
    assert decode(none) is EMPTY
    with pytest.raises(Exception):
        separation_plus(q, parse_formula("x in y"))
