"""Seeded random formulas for the syntax, proof and forcing suites."""

import random

from vlab.syntax import And, Const, Eq, Exists, Forall, Implies, Mem, Not, Or, Pred, Var

VARS = ("x", "y", "z", "u")


def random_formula(rng: random.Random, consts, depth=3, scope=(), preds=("M",),
                   bounded_only=False, free=()):
    """A well-formed formula whose free variables lie in ``scope`` + ``free``."""
    terms = [Var(v) for v in tuple(scope) + tuple(free)] + [Const(c) for c in consts]
    fresh = [v for v in VARS if v not in scope and v not in free]
    kinds = ["mem", "eq", "pred"] if depth <= 0 or not fresh else \
        ["mem", "eq", "pred", "not", "and", "or", "imp", "all", "ex", "ball", "bex"]
    if bounded_only:
        kinds = [k for k in kinds if k not in ("all", "ex")]
    if not preds:
        kinds = [k for k in kinds if k != "pred"]
    k = rng.choice(kinds)
    sub = lambda: random_formula(rng, consts, depth - 1, scope, preds, bounded_only, free)
    if k == "mem":
        return Mem(rng.choice(terms), rng.choice(terms))
    if k == "eq":
        return Eq(rng.choice(terms), rng.choice(terms))
    if k == "pred":
        return Pred(rng.choice(preds), rng.choice(terms))
    if k == "not":
        return Not(sub())
    if k in ("and", "or", "imp"):
        return {"and": And, "or": Or, "imp": Implies}[k](sub(), sub())
    v = rng.choice(fresh)
    body = random_formula(rng, consts, depth - 1, tuple(scope) + (v,), preds, bounded_only, free)
    if k in ("all", "ex"):
        bound = rng.choice([None, "M"]) if "M" in preds and not bounded_only else None
        return (Forall if k == "all" else Exists)(v, body, bound)
    bound = rng.choice(terms)
    return (Forall if k == "ball" else Exists)(v, body, bound)


def formula_pool(seed, consts, count, depth=3, **kw):
    rng = random.Random(seed)
    return [random_formula(rng, consts, depth, **kw) for _ in range(count)]


def forcing_pool(seed=1, consts=()):
    """20 Delta0 formulas and 10 Sigma1 formulas in the free variables a, b."""
    rng = random.Random(seed)
    free = ("a", "b")
    d0 = [random_formula(rng, consts, 2, preds=("M",), bounded_only=True, free=free)
          for _ in range(20)]
    s1 = []
    for _ in range(10):
        body = random_formula(rng, consts, 2, scope=("x",), preds=("M",), bounded_only=True,
                              free=free)
        s1.append(Exists("x", body))
    return d0 + s1
