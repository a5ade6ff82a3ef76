import random

import pytest
from hypothesis import given, strategies as st

from formulas import formula_pool, random_formula
from oracles import V4, evaluate
from vlab.coding import Signature, const_code, decode_formula, encode_formula, sequence
from vlab.errors import DecodeError, MalformedFormulaError, ParseError
from vlab.hf import EMPTY, make_set, ordinal, pair, stage, transitive_closure
from vlab.semantics import satisfies
from vlab.structures import FiniteStructure
from vlab.syntax import (And, Const, Exists, Forall, Implies, Mem, Not, Or, Var, classify,
                         format_formula, is_delta0, parse_formula)

BASE = FiniteStructure.from_set(stage(3), {"W0": [EMPTY, ordinal(1)]})
SIG = Signature(BASE, ("W0",))
CONSTS = sorted(stage(3))
POOL = formula_pool(11, CONSTS, 50, preds=("M", "W0"))


def transitive_structure(rng):
    seeds = rng.sample(V4, rng.randint(1, 3))
    dom = frozenset(transitive_closure(make_set(seeds))) | set(seeds)
    w0 = frozenset(x for x in dom if rng.random() < 0.5)
    return FiniteStructure(dom, {"W0": w0})


def test_coding_roundtrip_on_pool():
    codes = [encode_formula(phi, SIG) for phi in POOL]
    for phi, code in zip(POOL, codes):
        assert decode_formula(code, SIG) == phi
    distinct = {phi: code for phi, code in zip(POOL, codes)}
    assert len(set(distinct.values())) == len(distinct)


def test_constant_code_is_a_subterm():
    phi = Mem(Const(EMPTY), Const(ordinal(1)))
    code = encode_formula(phi, SIG)
    assert const_code(EMPTY) is pair(EMPTY, ordinal(3))
    assert const_code(EMPTY) in transitive_closure(code)


def test_decode_rejects_bad_codes():
    with pytest.raises(DecodeError):
        decode_formula(EMPTY, SIG)
    bad_pred = sequence([pair(ordinal(10), ordinal(4)), ordinal(7), const_code(EMPTY)])
    with pytest.raises(DecodeError, match="predicate"):
        decode_formula(bad_pred, SIG)
    with pytest.raises(MalformedFormulaError):
        encode_formula(Mem(Var("x"), Const(EMPTY)), SIG)


def test_satisfaction_agrees_with_oracle():
    rng = random.Random(5)
    for _ in range(200):
        m = transitive_structure(rng)
        consts = sorted(m.domain)
        phi = random_formula(rng, consts, 3, preds=("M", "W0"))
        preds = {"W0": m.predicate("W0")}
        assert satisfies(m, phi) == evaluate(m.domain, preds, phi, {})


@given(st.integers(0, 10 ** 6))
def test_de_morgan_and_quantifier_duals(seed):
    rng = random.Random(seed)
    m = transitive_structure(rng)
    consts = sorted(m.domain)
    a = random_formula(rng, consts, 2, preds=("M", "W0"))
    b = random_formula(rng, consts, 2, preds=("M", "W0"))
    assert satisfies(m, Not(And(a, b))) == satisfies(m, Or(Not(a), Not(b)))
    assert satisfies(m, Implies(a, b)) == satisfies(m, Or(Not(a), b))
    body = random_formula(rng, consts, 2, scope=("v",), preds=("M", "W0"))
    for bound in (None, "W0", Const(consts[-1])):
        assert satisfies(m, Not(Forall("v", body, bound))) == \
            satisfies(m, Exists("v", Not(body), bound))


def test_classify_examples():
    assert str(classify(parse_formula("forall x in {{}} . x = {}"))) == "Delta0"
    assert str(classify(parse_formula("exists x . x in x"))) == "Sigma1"
    assert str(classify(parse_formula("forall x . exists y in x . y = y"))) == "Pi1"
    assert str(classify(parse_formula("forall x . exists y . x in y"))) == "Pi2"
    assert str(classify(parse_formula("not exists x . x in x"))) == "Pi1"
    assert str(classify(parse_formula("forall x in M . x = x"))) == "Pi1"


def test_format_parse_roundtrip():
    for phi in POOL:
        assert parse_formula(format_formula(phi)) == phi
    for bad in ["x in", "forall . x", "(x in y", "x in y and"]:
        with pytest.raises(ParseError):
            parse_formula(bad)


@given(st.integers(0, 10 ** 6))
def test_delta0_absolute_for_end_extensions(seed):
    rng = random.Random(seed)
    small = transitive_structure(rng)
    extra = {rng.choice(V4), rng.choice(V4)}
    big = FiniteStructure(frozenset(transitive_closure(make_set(small.domain | extra))))
    consts = sorted(small.domain)
    phi = random_formula(rng, consts, 3, preds=(), bounded_only=True)
    assert is_delta0(phi)
    assert satisfies(FiniteStructure(small.domain), phi) == satisfies(big, phi)
