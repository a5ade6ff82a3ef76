"""Forcing over finite posets.

Conditions are hereditarily finite sets; a poset is usable over a ground
structure M when its condition set is an element of M.  P-names are HF sets
whose members are Kuratowski pairs <sigma, p> with sigma a P-name and p a
condition.  Generic filters of a finite poset are the upward closures of its
atoms, which is checked rather than assumed (see :func:`is_generic`).

The name space of (M, P, cap) is: the check names of elements of M, the
canonical generic name, and every P-name that is an element of M and has
name rank at most ``cap``.  Unbounded quantifiers in the forcing language
range over this space, and the generic extension is the set of its values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product

from .errors import BudgetError, ClassificationError, ParseError
from .hf import EMPTY, HFSet, make_set, ordinal, pair, unpair
from .semantics import satisfies
from .structures import FiniteStructure
from .syntax import (And, Eq, Exists, Forall, Implies, Mem, Not, Or, Pred, Var, classify,
                     free_vars)

NAME_RANK_CAP = 4


# --- posets -------------------------------------------------------------------------------

@dataclass(frozen=True)
class Poset:
    """A finite partial order with a top element.  ``order`` holds the pairs
    (p, q) with p <= q ("p is stronger than q"), reflexive and transitive."""

    conditions: tuple
    order: frozenset
    top: HFSet
    labels: tuple = ()

    @classmethod
    def make(cls, conditions, pairs=(), labels=None) -> "Poset":
        conds = tuple(sorted(set(conditions)))
        rel = {(p, p) for p in conds}
        for p, q in pairs:
            if p not in conds or q not in conds:
                raise ValueError(f"order pair ({p}, {q}) mentions an unknown condition")
            rel.add((p, q))
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(rel), list(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        for a, b in rel:
            if a is not b and (b, a) in rel:
                raise ValueError(f"order is not antisymmetric at {a}, {b}")
        tops = [t for t in conds if all((p, t) in rel for p in conds)]
        if not tops:
            raise ValueError("poset has no top element")
        names = tuple(labels) if labels else tuple(str(i) for i in range(len(conds)))
        return cls(conds, frozenset(rel), tops[0], names)

    def le(self, p, q) -> bool:
        return (p, q) in self.order

    def below(self, p) -> list:
        return [q for q in self.conditions if (q, p) in self.order]

    def above(self, p) -> frozenset:
        return frozenset(q for q in self.conditions if (p, q) in self.order)

    def compatible(self, p, q) -> bool:
        return any(self.le(r, p) and self.le(r, q) for r in self.conditions)

    def as_set(self) -> HFSet:
        return make_set(self.conditions)

    def label(self, p) -> str:
        return self.labels[self.conditions.index(p)]

    def __len__(self):
        return len(self.conditions)


def ordinal_poset(n: int, strict_pairs) -> Poset:
    """Poset on the ordinals 0..n-1 given pairs (i, j) meaning i <= j."""
    conds = [ordinal(i) for i in range(n)]
    return Poset.make(conds, [(conds[i], conds[j]) for i, j in strict_pairs],
                      labels=[str(i) for i in range(n)])


def trivial_poset() -> Poset:
    return ordinal_poset(1, ())


def fan(k: int) -> Poset:
    """Top 0 above k pairwise incompatible atoms 1..k."""
    return ordinal_poset(k + 1, [(i, 0) for i in range(1, k + 1)])


def chain(n: int) -> Poset:
    return ordinal_poset(n, [(j, i) for i in range(n) for j in range(i + 1, n)])


def enumerate_posets(max_size: int) -> list:
    """All posets with a top and at most ``max_size`` conditions, one per
    isomorphism class.  Conditions are the ordinals 0..n-1 with top 0."""
    out = []
    for n in range(1, max_size + 1):
        m = n - 1
        seen = set()
        slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
        for mask in range(1 << len(slots)):
            # (i, j) selected means element j <= element i among the non-top part
            rel = {slots[k] for k in range(len(slots)) if mask >> k & 1}
            if any((a, b) in rel and (b, c) in rel and (a, c) not in rel
                   for a in range(m) for b in range(m) for c in range(m)):
                continue
            canon = min(tuple(sorted((perm[a], perm[b]) for a, b in rel))
                        for perm in permutations(range(m)))
            if canon in seen:
                continue
            seen.add(canon)
            pairs = [(b + 1, a + 1) for a, b in rel] + [(i, 0) for i in range(1, n)]
            out.append(ordinal_poset(n, pairs))
    return out


def format_poset(P: Poset) -> str:
    lines = [f"cond {P.label(p)}" for p in P.conditions]
    for p, q in sorted(P.order):
        if p is not q:
            lines.append(f"{P.label(p)} <= {P.label(q)}")
    return "\n".join(lines) + "\n"


def parse_poset(text: str, source: str | None = None) -> Poset:
    """``cond <label>`` lines declare conditions (the top gets ordinal 0,
    the rest ordinals in declaration order); ``a <= b`` lines give order."""
    labels, pairs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "cond" and len(parts) == 2:
            if parts[1] in labels:
                raise ParseError(f"condition {parts[1]} declared twice", lineno, source)
            labels.append(parts[1])
        elif len(parts) == 3 and parts[1] == "<=":
            pairs.append((parts[0], parts[2], lineno))
        else:
            raise ParseError(f"cannot read poset line {line!r}", lineno, source)
    for a, b, lineno in pairs:
        for lab in (a, b):
            if lab not in labels:
                raise ParseError(f"undeclared condition {lab}", lineno, source)
    # find the top on labels first, then renumber so it is ordinal 0
    above = {lab: {lab} for lab in labels}
    for a, b, _ in pairs:
        above[a].add(b)
    changed = True
    while changed:
        changed = False
        for lab in labels:
            new = set().union(*(above[x] for x in above[lab]))
            if new != above[lab]:
                above[lab] = new
                changed = True
    tops = [t for t in labels if all(t in above[x] for x in labels)]
    if not tops:
        raise ParseError("poset has no top element", None, source)
    ordered = tops[:1] + [lab for lab in labels if lab != tops[0]]
    index = {lab: i for i, lab in enumerate(ordered)}
    P = ordinal_poset(len(ordered), [(index[a], index[b]) for a, b, _ in pairs])
    return Poset(P.conditions, P.order, P.top, tuple(ordered))


# --- filters, dense sets, antichains -------------------------------------------------------

def atoms(P: Poset) -> list:
    return [p for p in P.conditions if P.below(p) == [p]]


def generic_filters(P: Poset) -> list:
    out = {P.above(a) for a in atoms(P)}
    return sorted(out, key=lambda F: sorted(F))


def is_filter(P: Poset, F) -> bool:
    F = frozenset(F)
    if not F or P.top not in F:
        return False
    for p in F:
        if not P.above(p) <= F:
            return False
    return all(any(P.le(r, p) and P.le(r, q) for r in F) for p in F for q in F)


def all_filters(P: Poset) -> list:
    out = []
    conds = P.conditions
    for k in range(1, len(conds) + 1):
        for F in combinations(conds, k):
            if is_filter(P, F):
                out.append(frozenset(F))
    return out


def is_dense(P: Poset, D) -> bool:
    D = frozenset(D)
    return all(any(P.le(d, p) for d in D) for p in P.conditions)


def dense_sets(P: Poset) -> list:
    conds = P.conditions
    return [frozenset(D) for k in range(1, len(conds) + 1)
            for D in combinations(conds, k) if is_dense(P, D)]


def is_generic(P: Poset, F) -> bool:
    """A filter meeting every dense set."""
    F = frozenset(F)
    return is_filter(P, F) and all(F & D for D in dense_sets(P))


def max_antichain(P: Poset) -> tuple:
    conds = P.conditions
    for k in range(len(conds), 0, -1):
        for A in combinations(conds, k):
            if all(not P.compatible(a, b) for a, b in combinations(A, 2)):
                return A
    return ()


def is_ccc(P: Poset) -> tuple:
    """Every antichain of a finite poset is countable; the datum of interest is
    the largest antichain, returned as (True, size, witness)."""
    A = max_antichain(P)
    return True, len(A), A


# --- names ----------------------------------------------------------------------------------

def name_pairs(n: HFSet):
    """The <sigma, p> constituents of a name, or None if ``n`` is not a set of pairs."""
    out = []
    for item in n:
        p = unpair(item)
        if p is None:
            return None
        out.append(p)
    return out


def is_name(n: HFSet, P: Poset) -> bool:
    conds = frozenset(P.conditions)
    memo = {}

    def walk(x):
        if x in memo:
            return memo[x]
        pairs = name_pairs(x)
        ok = pairs is not None and all(p in conds and walk(s) for s, p in pairs)
        memo[x] = ok
        return ok

    return walk(n)


@lru_cache(maxsize=None)
def name_rank(n: HFSet) -> int:
    pairs = name_pairs(n) or []
    return max((name_rank(s) + 1 for s, _ in pairs), default=0)


@lru_cache(maxsize=None)
def check_name(x: HFSet, top: HFSet) -> HFSet:
    return make_set(pair(check_name(y, top), top) for y in x)


def generic_name(P: Poset) -> HFSet:
    return make_set(pair(check_name(p, P.top), p) for p in P.conditions)


def eval_name(n: HFSet, G) -> HFSet:
    return _eval(n, frozenset(G))


@lru_cache(maxsize=1 << 18)
def _eval(n: HFSet, G: frozenset) -> HFSet:
    pairs = name_pairs(n)
    if pairs is None:
        raise ValueError(f"{n} is not a name")
    return make_set(_eval(s, G) for s, p in pairs if p in G)


def names_of_rank(P: Poset, k: int) -> list:
    """All P-names of name rank at most k (exhaustive; small k only)."""
    names = [EMPTY]
    for _ in range(k):
        constituents = [pair(s, p) for s in names for p in P.conditions]
        if len(constituents) > 20:
            raise BudgetError("name enumeration constituents", 20, len(constituents))
        names = [make_set(c for i, c in enumerate(constituents) if mask >> i & 1)
                 for mask in range(1 << len(constituents))]
    return sorted(set(names))


def names_in(M: FiniteStructure, P: Poset, cap: int) -> list:
    return sorted(n for n in M.domain if is_name(n, P) and name_rank(n) <= cap)


def name_space(M: FiniteStructure, P: Poset, cap: int) -> list:
    if cap > NAME_RANK_CAP:
        raise BudgetError("name rank", NAME_RANK_CAP, cap)
    space = {check_name(x, P.top) for x in M.domain}
    space.add(generic_name(P))
    space.update(names_in(M, P, cap))
    return sorted(space)


def _require_ground(M, P):
    if P.as_set() not in M.domain:
        raise ValueError("the poset's condition set is not an element of the ground model")


def extension(M: FiniteStructure, P: Poset, G, cap: int = 2) -> FiniteStructure:
    """M[G]: values of the name space under G.  The ground predicate ``M``
    is carried as a predicate of the result."""
    return _extension(M, P, frozenset(G), cap)


@lru_cache(maxsize=4096)
def _extension(M, P, G, cap):
    _require_ground(M, P)
    if G not in generic_filters(P):
        raise ValueError("filter is not generic")
    dom = frozenset(eval_name(n, G) for n in name_space(M, P, cap))
    assert all(y in dom for x in dom for y in x), "name space values are not transitive"
    return FiniteStructure.of(dom, {"M": M.domain})


# --- forcing relation -----------------------------------------------------------------------

def _supported(phi):
    k = classify(phi)
    if k.level > 1:
        raise ClassificationError(f"forcing pool supports Delta0, Sigma1 and Pi1, got {k}")


def forces_semantic(p, phi, M: FiniteStructure, P: Poset, cap: int = 2, asg=None) -> bool:
    """True iff every generic G containing p gives an extension satisfying
    phi, with free variables assigned the values of the names in ``asg``."""
    _supported(phi)
    asg = dict(asg or {})
    for G in generic_filters(P):
        if p not in G:
            continue
        ext = extension(M, P, G, cap)
        vals = {v: eval_name(n, G) for v, n in asg.items()}
        if not satisfies(ext, phi, vals):
            return False
    return True


class Forcer:
    """The recursive forcing relation of (M, P, cap) with memo tables."""

    def __init__(self, M: FiniteStructure, P: Poset, cap: int = 2):
        _require_ground(M, P)
        self.M, self.P, self.cap = M, P, cap
        self.space = name_space(M, P, cap)
        self.ground_checks = [check_name(x, P.top) for x in sorted(M.domain)]
        self._below = {q: P.below(q) for q in P.conditions}
        self._eq = {}
        self._mem = {}
        self._memo = {}

    def dense_below(self, p, pred) -> bool:
        below = self._below
        return all(any(pred(q) for q in below[r]) for r in below[p])

    def mem(self, p, pi, tau) -> bool:
        key = (p, pi, tau)
        hit = self._mem.get(key)
        if hit is None:
            P = self.P
            cons = name_pairs(tau)
            hit = self.dense_below(p, lambda q: any(P.le(q, s) and self.eq(q, pi, sigma)
                                                    for sigma, s in cons))
            self._mem[key] = hit
        return hit

    def eq(self, p, t1, t2) -> bool:
        if t1 is t2:
            return True
        key = (p, t1, t2)
        hit = self._eq.get(key)
        if hit is None:
            hit = self._half_eq(p, t1, t2) and self._half_eq(p, t2, t1)
            self._eq[key] = hit
            self._eq[(p, t2, t1)] = hit
        return hit

    def _half_eq(self, p, t1, t2):
        P = self.P
        for pi, s in name_pairs(t1):
            for q in self._below[p]:
                if P.le(q, s) and not self.mem(q, pi, t2):
                    return False
        return True

    def _name(self, t, asg):
        if isinstance(t, Var):
            return asg[t.name]
        return check_name(t.value, self.P.top)

    def forces(self, p, phi, asg=None) -> bool:
        asg = dict(asg or {})
        _supported(phi)
        for var, n in asg.items():
            if not is_name(n, self.P):
                raise ValueError(f"{var} is assigned {n}, which is not a {len(self.P)}-condition name")
        return self._f(p, phi, asg)

    def _f(self, p, phi, asg):
        fv = free_vars(phi)
        key = (p, phi, frozenset((k, v) for k, v in asg.items() if k in fv))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._clause(p, phi, asg)
        self._memo[key] = out
        return out

    def _clause(self, p, phi, asg):
        P = self.P
        if isinstance(phi, Mem):
            return self.mem(p, self._name(phi.left, asg), self._name(phi.right, asg))
        if isinstance(phi, Eq):
            return self.eq(p, self._name(phi.left, asg), self._name(phi.right, asg))
        if isinstance(phi, Pred):
            if phi.name != "M":
                raise ClassificationError(f"predicate {phi.name} has no forcing clause")
            tau = self._name(phi.term, asg)
            return self.dense_below(p, lambda q: any(self.eq(q, tau, c) for c in self.ground_checks))
        if isinstance(phi, Not):
            return not any(self._f(q, phi.body, asg) for q in self._below[p])
        if isinstance(phi, And):
            return self._f(p, phi.left, asg) and self._f(p, phi.right, asg)
        if isinstance(phi, Or):
            return self.dense_below(p, lambda q: self._f(q, phi.left, asg) or self._f(q, phi.right, asg))
        if isinstance(phi, Implies):
            return self._f(p, Or(Not(phi.left), phi.right), asg)
        if isinstance(phi, Forall):
            return self._f(p, Not(Exists(phi.var, Not(phi.body), phi.bound)), asg)
        if isinstance(phi, Exists):
            var = phi.var

            def with_(tau):
                inner = dict(asg)
                inner[var] = tau
                return inner

            if phi.bound is None:
                cands = [(tau, P.top) for tau in self.space]
            elif isinstance(phi.bound, str):
                if phi.bound != "M":
                    raise ClassificationError(f"predicate {phi.bound} has no forcing clause")
                cands = [(c, P.top) for c in self.ground_checks]
            else:
                cands = name_pairs(self._name(phi.bound, asg))
            return self.dense_below(p, lambda q: any(P.le(q, s) and self._f(q, phi.body, with_(tau))
                                                     for tau, s in cands))
        raise ClassificationError(f"not a formula: {phi!r}")


def forces_syntactic(p, phi, M: FiniteStructure, P: Poset, cap: int = 2, asg=None,
                     forcer: Forcer | None = None) -> bool:
    forcer = forcer or Forcer(M, P, cap)
    return forcer.forces(p, phi, asg)


# --- Absolute-MA ---------------------------------------------------------------------------

@dataclass
class MAItem:
    formula: object
    var: str
    forced_by: object
    ground_witness: object

    @property
    def antecedent(self) -> bool:
        return self.forced_by is not None

    @property
    def holds(self) -> bool:
        return not self.antecedent or self.ground_witness is not None


@dataclass
class MAReport:
    items: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(i.holds for i in self.items)


def absolute_ma_check(M: FiniteStructure, P: Poset, pool, cap: int = 2) -> MAReport:
    """For each (phi, var) in the pool: if some condition forces
    ``exists var . phi`` then some y in M satisfies phi in M.  Parameters of
    phi are set constants from M."""
    forcer = Forcer(M, P, cap)
    ground = M.with_predicates({"M": M.domain})
    report = MAReport()
    for phi, var in pool:
        sentence = Exists(var, phi)
        forced = next((q for q in P.conditions if forcer.forces(q, sentence)), None)
        witness = None
        for y in sorted(M.domain):
            if satisfies(ground, phi, {var: y}):
                witness = y
                break
        report.items.append(MAItem(phi, var, forced, witness))
    return report
