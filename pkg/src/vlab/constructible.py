"""Finite initial segments of the constructible hierarchy over a base structure.

L_0 is the transitive closure of {D} for the base domain D, so the base is an
element.  Over a finite level every subset is definable once parameters are
allowed (a finite disjunction of equalities), so the exact successor is the
power set.  A formula pool can be supplied instead, giving the subsets that
pool defines; that is an under-approximation and is labelled as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .coding import Signature, encode_formula, sequence
from .errors import BudgetError, ClassificationError
from .hf import HFSet, make_set, ordinal, pair, powerset, singleton, transitive_closure
from .semantics import satisfies
from .structures import FiniteStructure
from .syntax import classify, free_vars, is_delta0

LEVEL_CAP = 4
ELEMENT_CAP = 20000
RANK_CAP = 256


@dataclass(frozen=True)
class LLevel:
    index: int
    domain: frozenset
    base: FiniteStructure
    exact: bool = True

    def __contains__(self, x):
        return x in self.domain

    def __len__(self):
        return len(self.domain)

    def structure(self) -> FiniteStructure:
        """The level as a structure; ``M`` is the base domain, extra base
        predicates are carried over."""
        preds = {name: ext for name, ext in self.base.predicates}
        preds["M"] = self.base.domain
        return FiniteStructure.of(self.domain, preds)

    def is_transitive(self) -> bool:
        dom = self.domain
        return all(y in dom for x in dom for y in x)


def level_zero(base: FiniteStructure) -> frozenset:
    return frozenset(transitive_closure(singleton(base.as_set())).elems)


def l_level(base: FiniteStructure, n: int, pool=None, level_cap: int = LEVEL_CAP,
            element_cap: int = ELEMENT_CAP) -> LLevel:
    """L_n over ``base``.  With ``pool`` the successor step keeps only the
    subsets defined by pool formulas (free variable ``x``, parameters from
    the previous level in the remaining free variables)."""
    if n > level_cap:
        raise BudgetError("level", level_cap, n)
    dom = level_zero(base)
    for i in range(n):
        prev = LLevel(i, dom, base, pool is None)
        if pool is None:
            if len(dom) > 30 or 2 ** len(dom) > element_cap:
                raise BudgetError(f"elements at level {i + 1}", element_cap, 2 ** min(len(dom), 64))
            dom = frozenset(powerset(make_set(dom)).elems)
        else:
            dom = dom | definable_subsets(prev, pool, element_cap)
            if len(dom) > element_cap:
                raise BudgetError(f"elements at level {i + 1}", element_cap, len(dom))
    return LLevel(n, dom, base, pool is None)


def definable_subsets(level: LLevel, pool, element_cap: int = ELEMENT_CAP, var: str = "x") -> frozenset:
    """Subsets of the level defined over it by a pool formula in ``var`` with
    every tuple of parameters for its other free variables."""
    struct = level.structure()
    elems = sorted(level.domain)
    out = set()
    for phi in pool:
        params = sorted(free_vars(phi) - {var})
        for values in product(elems, repeat=len(params)):
            asg = dict(zip(params, values))
            members = []
            for x in elems:
                asg[var] = x
                if satisfies(struct, phi, asg):
                    members.append(x)
            out.add(make_set(members))
            if len(out) > element_cap:
                raise BudgetError(f"definable subsets at level {level.index + 1}", element_cap, len(out))
    return frozenset(out)


# --- exact level location ---------------------------------------------------------------

def level_of(x: HFSet, base: FiniteStructure, cap: int = RANK_CAP) -> int:
    """Least n with x in L_n(base) for the exact hierarchy, computed without
    materializing levels: x is in L_(k+1) iff x is a subset of L_k."""
    zero = level_zero(base)
    memo = {}

    def walk(y):
        if y in zero:
            return 0
        hit = memo.get(y)
        if hit is not None:
            return hit
        out = 1 + max((walk(z) for z in y), default=0)
        memo[y] = out
        return out

    n = walk(x)
    if n > cap:
        raise BudgetError("proof rank level", cap, n)
    return n


def proof_code(p, sig: Signature) -> HFSet:
    """Set code of a proof tree: <tag, <formula code, child sequence>>."""
    from .proofs import TAGS

    def walk(node):
        kids = [walk(k) for k in node.children]
        fcode = encode_formula(node.formula, sig)
        return pair(ordinal(TAGS.index(node.tag)), pair(fcode, sequence(kids)))

    return walk(p)


def proof_rank(p, base: FiniteStructure, sig: Signature | None = None, cap: int = RANK_CAP) -> int:
    """Least n such that the code of ``p`` lies in L_n(base)."""
    sig = sig or Signature(base)
    return level_of(proof_code(p, sig), base, cap)


# --- KP instances -----------------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    phi: object
    var: str
    a: HFSet
    params: tuple = ()


@dataclass(frozen=True)
class Collection:
    phi: object
    xvar: str
    yvar: str
    a: HFSet
    params: tuple = ()


def check_kp_instance(level: LLevel, axiom) -> bool:
    if not is_delta0(axiom.phi):
        raise ClassificationError(f"instance formula is {classify(axiom.phi)}, not Delta0")
    struct = level.structure()
    asg = dict(axiom.params)
    if isinstance(axiom, Separation):
        picked = []
        for x in axiom.a:
            asg[axiom.var] = x
            if satisfies(struct, axiom.phi, asg):
                picked.append(x)
        return make_set(picked) in level.domain
    if isinstance(axiom, Collection):
        dom = sorted(level.domain)

        def witnesses(x):
            asg[axiom.xvar] = x
            out = []
            for y in dom:
                asg[axiom.yvar] = y
                if satisfies(struct, axiom.phi, asg):
                    out.append(y)
            return out

        per_x = [witnesses(x) for x in axiom.a]
        if any(not w for w in per_x):
            return True
        for b in dom:
            if all(any(y in b for y in w) for w in per_x):
                return True
        return False
    raise TypeError(f"unknown KP axiom {axiom!r}")
