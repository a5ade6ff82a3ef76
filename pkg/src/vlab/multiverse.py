"""Outer and inner models of finite transitive structures and the relations
between them: IMH, global covering, grounds and the mantle, and the
consistency/outer-model correspondence.

Every model here is a *T_fin model*: a transitive set closed under
  union        x |-> U x
  difference   (x, y) |-> x - y
  separation   (x, y) |-> {z in x : phi(z, y)} for phi in :data:`TFIN_POOL`
T_fin has no pairing (a nonempty finite transitive set is never closed under
pairing) and its separation pool has no formula defining singletons (with
one, every subset of an element would be present and no forcing could add
anything).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .errors import BudgetError
from .forcing import Poset, enumerate_posets, extension, generic_filters, trivial_poset
from .hf import (HFSet, difference, intersection, is_ordinal, make_set, ordinal, rank, stage,
                 union, unpair)
from .semantics import satisfies
from .structures import FiniteStructure
from .syntax import parse_formula

TFIN_POOL = (
    parse_formula("z in y"),
    parse_formula("not z in y"),
)
OUTER_BUDGET_CAP = 4


# --- T_fin ---------------------------------------------------------------------------------

def separation_instance(i: int, x: HFSet, y: HFSet) -> HFSet:
    """{z in x : TFIN_POOL[i](z, y)} evaluated by the satisfaction relation."""
    struct = FiniteStructure.of([x, y])
    return make_set(z for z in x if satisfies(struct, TFIN_POOL[i], {"z": z, "y": y}))


def tfin_products(dom):
    """All one-step T_fin results over ``dom``."""
    dom = list(dom)
    for x in dom:
        yield union(x)
    for x in dom:
        for y in dom:
            yield difference(x, y)
            yield intersection(x, y)


def is_tfin_closed(dom) -> bool:
    dom = frozenset(dom)
    return all(r in dom for r in tfin_products(dom))


def transitive_hull(members) -> frozenset:
    out = set()
    stack = list(members)
    while stack:
        x = stack.pop()
        if x not in out:
            out.add(x)
            stack.extend(x)
    return frozenset(out)


def _products_with(x, dom):
    yield union(x)
    for y in dom:
        yield difference(x, y)
        yield difference(y, x)
        yield intersection(x, y)


def tfin_closure(members, limit: int = 2000, within=None) -> frozenset | None:
    """Least transitive T_fin-closed superset of ``members``.  Worklist: each
    new set is combined with everything seen so far, including itself.  With
    ``within`` the search stops and returns None as soon as a set outside
    ``within`` appears."""
    dom = set()
    work = sorted(transitive_hull(members))
    if within is not None and any(x not in within for x in work):
        return None
    while work:
        x = work.pop()
        if x in dom:
            continue
        dom.add(x)
        if len(dom) > limit:
            raise BudgetError("T_fin closure elements", limit, len(dom))
        for r in _products_with(x, list(dom)):
            if r not in dom:
                if within is not None and r not in within:
                    return None
                work.append(r)
    return frozenset(dom)


def universe_model(members, predicates=None) -> FiniteStructure:
    """The least T_fin model containing ``members``."""
    return FiniteStructure.of(tfin_closure(members), predicates)


def is_universe_model(M: FiniteStructure) -> bool:
    return M.is_transitive() and is_tfin_closed(M.domain)


def naturals(dom) -> frozenset:
    return FiniteStructure.of(dom).naturals()


# --- enumeration -----------------------------------------------------------------------------

def _transitive_supersets(required: frozenset, pool: list):
    """Transitive sets S with required <= S <= required + pool, pool sorted by
    rank so members are decided before the sets containing them."""
    out = []

    def walk(i, chosen):
        if i == len(pool):
            out.append(frozenset(chosen))
            return
        x = pool[i]
        walk(i + 1, chosen)
        if all(y in chosen for y in x):
            chosen.add(x)
            walk(i + 1, chosen)
            chosen.discard(x)

    walk(0, set(required))
    return out


def outer_models(M: FiniteStructure, budget_stage: int) -> list:
    """All T_fin models W with M <= W <= V_budget and the same naturals."""
    if budget_stage > OUTER_BUDGET_CAP:
        raise BudgetError("outer-model stage", OUTER_BUDGET_CAP, budget_stage)
    universe = stage(budget_stage).elems
    if not all(x in universe for x in M.domain):
        raise BudgetError("base outside the outer-model stage", budget_stage, max(rank(x) for x in M.domain) + 1)
    nats = M.naturals()
    pool = sorted((x for x in universe if x not in M.domain and not _is_new_natural(x, nats)),
                  key=lambda x: x.key)
    found = []
    for dom in _transitive_supersets(frozenset(M.domain), pool):
        if is_tfin_closed(dom):
            found.append(FiniteStructure.of(dom))
    return sorted(found, key=_model_key)


def _is_new_natural(x, nats):
    return is_ordinal(x) and x not in nats


def _model_key(W: FiniteStructure):
    return (len(W.domain), tuple(x.key for x in sorted(W.domain)))


def inner_models(M: FiniteStructure) -> list:
    """All T_fin models I <= M with the same naturals."""
    required = transitive_hull(ordinal(n) for n in M.naturals())
    pool = sorted((x for x in M.domain if x not in required), key=lambda x: x.key)
    found = []
    for dom in _transitive_supersets(required, pool):
        if is_tfin_closed(dom):
            found.append(FiniteStructure.of(dom))
    return sorted(found, key=_model_key)


def ordinal_core(M: FiniteStructure) -> FiniteStructure:
    """The least T_fin model with M's naturals (the desk L of M)."""
    return universe_model(ordinal(n) for n in M.naturals())


# --- IMH -------------------------------------------------------------------------------------

@dataclass
class IMHItem:
    sentence: object
    outer: FiniteStructure | None
    outer_inner: FiniteStructure | None
    inner: FiniteStructure | None

    @property
    def antecedent(self):
        return self.outer_inner is not None

    @property
    def holds(self):
        return not self.antecedent or self.inner is not None


@dataclass
class IMHReport:
    mode: str
    outer_count: int
    items: list = field(default_factory=list)

    @property
    def holds(self):
        return all(i.holds for i in self.items)

    @property
    def violations(self):
        return [i for i in self.items if not i.holds]


def forcing_outer_models(M: FiniteStructure, poset_cap: int = 3, name_cap: int = 2) -> list:
    """T_fin generic extensions of M by posets whose condition set lies in M,
    together with M itself."""
    found = {M.domain: M}
    for P in posets_in(M, poset_cap):
        for G in generic_filters(P):
            ext = generic_extension(M, P, G, name_cap)
            if ext.naturals() == M.naturals():
                found.setdefault(ext.domain, ext)
    return sorted(found.values(), key=_model_key)


def imh_check(M: FiniteStructure, pool, budget: int, mode: str = "all", poset_cap: int = 3) -> IMHReport:
    """For each parameter-free sentence: if it holds in an inner model of an
    outer model of M, it holds in an inner model of M.  ``mode`` selects the
    outer models: ``all`` (every T_fin outer model in V_budget) or
    ``forcing`` (generic extensions only)."""
    if mode == "all":
        outers = outer_models(M, budget)
    elif mode == "forcing":
        outers = forcing_outer_models(M, poset_cap)
    else:
        raise ValueError(f"unknown IMH mode {mode}")
    inner_of = {W.domain: inner_models(W) for W in outers}
    mine = inner_models(M)
    report = IMHReport(mode, len(outers))
    for sigma in pool:
        hit_outer = hit_inner = None
        for W in outers:
            for I in inner_of[W.domain]:
                if satisfies(I, sigma):
                    hit_outer, hit_inner = W, I
                    break
            if hit_inner is not None:
                break
        mine_hit = next((I for I in mine if satisfies(I, sigma)), None)
        report.items.append(IMHItem(sigma, hit_outer, hit_inner, mine_hit))
    return report


@dataclass
class PairwiseIMH:
    agree_on_pool: bool
    first: IMHReport
    second: IMHReport

    @property
    def imh_differs(self):
        return self.first.holds != self.second.holds


def imh_pairwise(M1: FiniteStructure, M2: FiniteStructure, pool, budget: int,
                 mode: str = "all") -> PairwiseIMH:
    """Search harness for two models with the same pool truths that differ on
    the IMH; no outcome is presumed."""
    agree = all(satisfies(M1, s) == satisfies(M2, s) for s in pool)
    return PairwiseIMH(agree, imh_check(M1, pool, budget, mode), imh_check(M2, pool, budget, mode))


# --- covering --------------------------------------------------------------------------------

def as_function(f: HFSet):
    """The graph of ``f`` as a dict if ``f`` is a set of Kuratowski pairs with
    distinct first coordinates, else None."""
    out = {}
    for item in f:
        p = unpair(item)
        if p is None or p[0] in out:
            return None
        out[p[0]] = p[1]
    return out


def functions_between(W: FiniteStructure, V: FiniteStructure) -> list:
    """Functions coded in V whose domain is an element of W and whose values lie in W."""
    out = []
    for f in sorted(V.domain):
        g = as_function(f)
        if g is None or not g:
            continue
        if make_set(g) in W.domain and all(v in W.domain for v in g.values()):
            out.append((f, g))
    return out


def global_covers(W: FiniteStructure, V: FiniteStructure, kappa: int) -> bool:
    """Every function in V from an element of W into W is pointwise covered by
    a function with values in [W]^(<kappa).  Every finite subset of W counts as
    available to W, so the cover {f(i)} exists exactly when kappa >= 2."""
    return covering_witness(W, V, kappa) is None


def covering_witness(W, V, kappa):
    """A function with no cover, or None.  The smallest cover of a value is
    its singleton, so a function is uncovered only when kappa <= 1."""
    if kappa >= 2:
        return None
    for f, graph in functions_between(W, V):
        return f
    return None


def forcing_witness(W: FiniteStructure, V: FiniteStructure, cap: int = 3, name_cap: int = 2):
    """A (P, G) in W whose generic extension of W is V, or None."""
    for P in posets_in(W, cap):
        for G in generic_filters(P):
            ext = extension(W, P, G, name_cap).domain
            if tfin_closure(ext, within=V.domain) == V.domain:
                return P, G
    return None


@dataclass
class CoveringAudit:
    kappa: int
    forward: list = field(default_factory=list)
    converse: list = field(default_factory=list)

    @property
    def forward_failures(self):
        return [row for row in self.forward if not row["covers"]]

    def converse_counts(self):
        """(covered pairs, covered pairs that are small-antichain forcing
        extensions); reported, not asserted."""
        covered = [row for row in self.converse if row["covers"]]
        return len(covered), sum(1 for row in covered if row["forcing"])


def covering_audit(W: FiniteStructure, kappa: int, cap: int = 3, budget: int | None = None,
                   name_cap: int = 2) -> CoveringAudit:
    """Forward direction: every extension of W by a poset with maximum
    antichain < kappa is kappa-globally covered by W.  Converse statistics:
    among outer models of W in V_budget, which covered ones are such
    extensions."""
    from .forcing import max_antichain
    audit = CoveringAudit(kappa)
    for P in posets_in(W, cap):
        width = len(max_antichain(P))
        if width >= kappa:
            continue
        for G in generic_filters(P):
            V = generic_extension(W, P, G, name_cap)
            audit.forward.append({"poset": len(P), "antichain": width, "extension": len(V.domain),
                                  "covers": global_covers(W, V, kappa)})
    if budget is not None:
        for V in outer_models(W, budget):
            hit = forcing_witness(W, V, cap, name_cap)
            small = hit is not None and len(max_antichain(hit[0])) < kappa
            audit.converse.append({"outer": len(V.domain), "covers": global_covers(W, V, kappa),
                                   "forcing": small})
    return audit


# --- geology ---------------------------------------------------------------------------------

def posets_in(W: FiniteStructure, cap: int = 3) -> list:
    """Posets (up to relabelling within the condition set) whose condition set
    is an element of W with at most ``cap`` members."""
    shapes = {}
    for P in enumerate_posets(cap):
        shapes.setdefault(len(P), []).append(P)
    out = []
    for X in sorted(W.domain):
        n = len(X)
        if n == 0 or n > cap:
            continue
        conds = sorted(X)
        seen = set()
        for shape in shapes[n]:
            for perm in permutations(conds):
                relabel = dict(zip(shape.conditions, perm))
                order = frozenset((relabel[a], relabel[b]) for a, b in shape.order)
                if order in seen:
                    continue
                seen.add(order)
                out.append(Poset(tuple(conds), order, relabel[shape.top],
                                 tuple(str(c) for c in conds)))
    return out


def generic_extension(W: FiniteStructure, P: Poset, G, name_cap: int = 2) -> FiniteStructure:
    """The T_fin closure of W[G]."""
    return universe_model(extension(W, P, G, name_cap).domain)


@dataclass(frozen=True)
class Ground:
    model: FiniteStructure
    poset: Poset
    generic: frozenset


def trivial_ground(M: FiniteStructure) -> Ground:
    """M over itself by the one-condition poset, which adds nothing.  Listed by
    definition: a model with no nonempty element has no condition set to
    search with."""
    P = trivial_poset()
    return Ground(M, P, frozenset(P.conditions))


def grounds(M: FiniteStructure, cap: int = 3, name_cap: int = 2) -> list:
    """All (W, P, G): W an inner model of M, P a poset in W with at most
    ``cap`` conditions, G generic with the T_fin closure of W[G] equal to M.
    The trivial ground comes first; one-condition posets are not searched."""
    out = [trivial_ground(M)]
    for W in inner_models(M):
        for P in posets_in(W, cap):
            if len(P) == 1:
                continue
            for G in generic_filters(P):
                ext = extension(W, P, G, name_cap).domain
                if tfin_closure(ext, within=M.domain) == M.domain:
                    out.append(Ground(W, P, G))
    return out


def ground_models(M: FiniteStructure, cap: int = 3, name_cap: int = 2) -> list:
    seen = {}
    for g in grounds(M, cap, name_cap):
        seen.setdefault(g.model.domain, g.model)
    return sorted(seen.values(), key=_model_key)


def mantle(M: FiniteStructure, cap: int = 3, name_cap: int = 2) -> FiniteStructure:
    doms = [W.domain for W in ground_models(M, cap, name_cap)]
    core = frozenset.intersection(*doms) if doms else M.domain
    return universe_model(core)


def ground_axiom(M: FiniteStructure, cap: int = 3, name_cap: int = 2) -> bool:
    return all(W.domain == M.domain for W in ground_models(M, cap, name_cap))


def nontrivial_grounds(M: FiniteStructure, cap: int = 3, name_cap: int = 2) -> list:
    return [g for g in grounds(M, cap, name_cap) if g.model.domain != M.domain]


# --- consistency and outer models ------------------------------------------------------------

def outer_structure(M: FiniteStructure, W: FiniteStructure, extra: str = "W0") -> FiniteStructure:
    """W as a structure for a theory over M: ``M`` names the base, ``extra`` names W."""
    return FiniteStructure.of(W.domain, {"M": M.domain, extra: W.domain})


def model_search(th, M: FiniteStructure, budget: int, extra: str = "W0"):
    """First outer model (in canonical order) satisfying every sentence of th."""
    for W in outer_models(M, budget):
        struct = outer_structure(M, W, extra)
        if all(satisfies(struct, s) for s in th.sentences):
            return W
    return None


@dataclass
class Agreement:
    theory: str
    refutation: object
    model: FiniteStructure | None

    @property
    def refuted(self):
        return self.refutation is not None

    @property
    def model_found(self):
        return self.model is not None

    @property
    def forbidden(self):
        return self.refuted and self.model_found


def barwise_correspondence(th, M: FiniteStructure, budget: int = 4, depth: int = 6,
                           extra: str = "W0") -> Agreement:
    """Run the refutation search and the outer-model search and report both."""
    from .coding import Signature
    from .proofs import refutation_search
    sig = Signature(M, (extra,))
    proof = refutation_search(th, sig, depth)
    model = model_search(th, M, budget, extra)
    return Agreement(th.name, proof, model)


def width_theory(extra: str = "W0"):
    """W end-extends M, has the same ordinals, and differs from M."""
    from .proofs import Theory
    ordinal_def = ("((forall y in x . forall z in y . z in x) and "
                   "(forall y in x . forall z in y . forall w in z . w in y))")
    return Theory("width", (
        parse_formula(f"forall x in M . x in {extra}"),
        parse_formula(f"forall x in {extra} . forall y in x . y in {extra}"),
        parse_formula(f"forall x in {extra} . ({ordinal_def} implies x in M)"),
        parse_formula(f"exists x in {extra} . not x in M"),
    ))
