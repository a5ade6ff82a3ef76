"""Seeded corpora: random sets, shuffled coding pairs and their mutants, and
valid proof trees with single-node mutants.

Everything takes an explicit ``random.Random`` so equal seeds give equal
corpora.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .coding import Signature
from .hf import EMPTY, HFSet, make_set, ordinal, stage
from .proofs import BOTTOM, LEAF_TAGS, ProofTree, Theory
from .structures import FiniteStructure
from .syntax import (And, Const, Eq, Forall, Implies, Mem, Not, Pred, Var,
                     parse_formula, substitute)
from .trees import RawTree, encode_set

# --- sets and coding pairs ------------------------------------------------------------------


def random_set(rng: random.Random, max_rank: int = 4, width: int = 3) -> HFSet:
    """A random set of rank at most ``max_rank``."""
    if max_rank <= 0:
        return EMPTY
    n = rng.randint(0, width)
    return make_set(random_set(rng, rng.randint(0, max_rank - 1), width) for _ in range(n))


def shuffled_coding_pair(rng: random.Random, x: HFSet) -> RawTree:
    """encode_set(x) with node identifiers permuted and children reordered."""
    t = encode_set(x)
    ids = list(range(len(t.nodes)))
    rng.shuffle(ids)
    relabel = dict(zip(t.nodes, ids))
    children = {}
    for node in t.nodes:
        ks = [relabel[k] for k in t.kids(node)]
        rng.shuffle(ks)
        children[relabel[node]] = tuple(ks)
    return RawTree(relabel[t.root], children)


def random_coding_pair(rng: random.Random, max_rank: int = 4):
    x = random_set(rng, max_rank)
    return x, shuffled_coding_pair(rng, x)


@dataclass(frozen=True)
class TreeMutant:
    kind: str
    expected: str
    tree: RawTree


def _levels(t: RawTree) -> dict:
    level = {t.root: 0}
    frontier = [t.root]
    while frontier:
        nxt = []
        for n in frontier:
            for k in t.kids(n):
                level[k] = level[n] + 1
                nxt.append(k)
        frontier = nxt
    return level


def _descendants(t: RawTree, node) -> set:
    out, stack = set(), [node]
    while stack:
        n = stack.pop()
        if n not in out:
            out.add(n)
            stack.extend(t.kids(n))
    return out


def _with_edge(t: RawTree, parent, child) -> RawTree:
    children = dict(t.children)
    children[parent] = children[parent] + (child,)
    return RawTree(t.root, children)


def duplicate_subtree(rng, t: RawTree):
    """Copy a child's subtree under the same parent: clause (ii)."""
    parents = [n for n in t.nodes if t.kids(n)]
    if not parents:
        return None
    p = rng.choice(parents)
    k = rng.choice(t.kids(p))
    fresh = max(t.nodes) + 1
    children = dict(t.children)
    mapping = {}
    for n in sorted(_descendants(t, k)):
        mapping[n] = fresh
        fresh += 1
    for n, new in mapping.items():
        children[new] = tuple(mapping[c] for c in t.kids(n))
    children[p] = children[p] + (mapping[k],)
    return TreeMutant("duplicate-subtree", "ii", RawTree(t.root, children))


def share_same_level(rng, t: RawTree):
    """Give a node a child of another node on its level: clause (iii)."""
    level = _levels(t)
    options = []
    for p in t.nodes:
        for q in t.nodes:
            if p != q and level[p] == level[q]:
                options += [(p, k) for k in t.kids(q) if k not in t.kids(p)]
    if not options:
        return None
    p, k = rng.choice(sorted(options))
    return TreeMutant("share-same-level", "iii", _with_edge(t, p, k))


def share_cross_level(rng, t: RawTree):
    """Give a node a child of a node on another level.  The child then has two
    distances from the top, which clause (i) forbids."""
    level = _levels(t)
    options = []
    for p in t.nodes:
        above = {n for n in t.nodes if p in _descendants(t, n)}
        for q in t.nodes:
            if level[p] != level[q]:
                options += [(p, k) for k in t.kids(q) if k not in above and k not in t.kids(p)]
    if not options:
        return None
    p, k = rng.choice(sorted(options))
    return TreeMutant("share-cross-level", "i", _with_edge(t, p, k))


def back_edge(rng, t: RawTree):
    """Point a node at one of its ancestors (or itself): clause (iv)."""
    n = rng.choice(sorted(t.nodes))
    ancestors = sorted(a for a in t.nodes if n in _descendants(t, a))
    return TreeMutant("back-edge", "iv", _with_edge(t, n, rng.choice(ancestors)))


TREE_MUTATORS = (duplicate_subtree, share_same_level, share_cross_level, back_edge)


def tree_mutants(rng, t: RawTree) -> list:
    return [m for m in (f(rng, t) for f in TREE_MUTATORS) if m is not None]


# --- proofs ---------------------------------------------------------------------------------

def small_bases() -> list:
    """Transitive bases used by the proof fuzzer."""
    a = make_set([EMPTY])
    return [
        FiniteStructure.of([EMPTY]),
        FiniteStructure.of(ordinal(2).elems),
        FiniteStructure.of(ordinal(3).elems),
        FiniteStructure.of([EMPTY, a, make_set([a])]),
        FiniteStructure.of(stage(3).elems),
    ]


def true_theory(base: FiniteStructure) -> Theory:
    """A few sentences true in ``base`` for premise leaves."""
    top = max(base.domain)
    return Theory("true", (
        parse_formula("forall x in M . not x in x"),
        parse_formula("{} in M"),
        Forall("x", Pred("M", Var("x")), Const(top)),
        parse_formula("forall x in M . forall y in x . y in M"),
    ))


class ProofFuzzer:
    """Generates accepted proofs over one base and theory.

    Instance templates are formulas in ``x`` provable for each value of x in
    a range by a fixed recipe, which is what Set- and M-rule fans need.
    """

    def __init__(self, rng: random.Random, base: FiniteStructure, theory: Theory | None = None,
                 duplicates: float = 0.2):
        self.rng = rng
        self.base = base
        self.sig = Signature(base)
        self.theory = theory or true_theory(base)
        self.dom = sorted(base.domain)
        self.duplicates = duplicates

    # sentences and templates

    def atom(self):
        a, b = self.rng.choice(self.dom), self.rng.choice(self.dom)
        return self.rng.choice([Mem(Const(a), Const(b)), Eq(Const(a), Const(b))])

    def template(self, var: str, depth: int, within=None):
        """A formula in ``var`` true for every value in ``within`` (the base
        when None), with its recipe kind recorded in the structure."""
        r = self.rng
        kinds = ["in-M", "not-self", "refl"]
        if within is not None:
            kinds.append("in-bound")
        if depth > 0:
            kinds += ["and", "weaken", "forall-in"]
        kind = r.choice(kinds)
        v = Var(var)
        if kind == "in-M":
            return Pred("M", v)
        if kind == "not-self":
            return Not(Mem(v, v))
        if kind == "refl":
            return Eq(v, v)
        if kind == "in-bound":
            return Mem(v, Const(within))
        if kind == "and":
            return And(self.template(var, depth - 1, within), self.template(var, depth - 1, within))
        if kind == "weaken":
            return Implies(self.atom(), self.template(var, depth - 1, within))
        inner = "y" if var != "y" else "z"
        body = self.template(inner, depth - 1, None)
        return Forall(inner, body, v)

    def prove_instance(self, phi):
        """Proof of a closed instance of a template."""
        if isinstance(phi, Pred):
            return ProofTree(phi, "membership")
        if isinstance(phi, Not) or isinstance(phi, Mem):
            return ProofTree(phi, "diagram")
        if isinstance(phi, Eq):
            return ProofTree(phi, "fol")
        if isinstance(phi, And):
            return self.and_intro(self.prove_instance(phi.left), self.prove_instance(phi.right))
        if isinstance(phi, Implies):
            return self.weaken(self.prove_instance(phi.right), phi.left)
        if isinstance(phi, Forall):
            return self.fan(phi)
        raise ValueError(f"no recipe for {phi!r}")

    def fan(self, phi):
        if phi.bound == "M":
            members, tag = self.dom, "mrule"
        else:
            members, tag = phi.bound.value.elems, "set"
        kids = [self.prove_instance(substitute(phi.body, phi.var, Const(b))) for b in members]
        if kids and self.rng.random() < self.duplicates:
            kids.append(self.rng.choice(kids))
        self.rng.shuffle(kids)
        return ProofTree(phi, tag, tuple(kids))

    # rule recipes

    def weaken(self, p: ProofTree, extra):
        """From A infer (X implies A) using A1."""
        a = p.formula
        ax = ProofTree(Implies(a, Implies(extra, a)), "fol")
        return ProofTree(Implies(extra, a), "mp", (p, ax))

    def and_intro(self, p: ProofTree, q: ProofTree):
        a, b = p.formula, q.formula
        ax = ProofTree(Implies(a, Implies(b, And(a, b))), "fol")
        step = ProofTree(Implies(b, And(a, b)), "mp", (p, ax))
        return ProofTree(And(a, b), "mp", (q, step))

    def and_elim(self, p: ProofTree):
        a = p.formula
        ax = ProofTree(Implies(a, a.left), "fol")
        return ProofTree(a.left, "mp", (p, ax))

    def leaf(self):
        r = self.rng
        kind = r.choice(LEAF_TAGS)
        if kind == "membership":
            return ProofTree(Pred("M", Const(r.choice(self.dom))), "membership")
        if kind == "diagram":
            a = self.atom()
            return ProofTree(a if self._true(a) else Not(a), "diagram")
        if kind == "fol":
            a = self.atom()
            return ProofTree(Implies(a, Implies(self.atom(), a)), "fol")
        return ProofTree(r.choice(self.theory.sentences), "premise")

    def _true(self, phi):
        from .semantics import satisfies
        return satisfies(self.base, phi)

    def proof(self, depth: int = 3) -> ProofTree:
        r = self.rng
        if depth <= 0:
            return self.leaf()
        kind = r.choice(["leaf", "weaken", "and", "and-elim", "set", "mrule"])
        if kind == "leaf":
            return self.leaf()
        if kind == "weaken":
            return self.weaken(self.proof(depth - 1), self.atom())
        if kind == "and":
            return self.and_intro(self.proof(depth - 1), self.proof(depth - 1))
        if kind == "and-elim":
            return self.and_elim(self.and_intro(self.proof(depth - 1), self.proof(depth - 1)))
        if kind == "set":
            a = r.choice(self.dom)
            return self.fan(Forall("x", self.template("x", min(depth - 1, 2), a), Const(a)))
        return self.fan(Forall("x", self.template("x", min(depth - 1, 2)), "M"))


def proof_fleet(seed: int, count: int, depth: int = 3):
    """``count`` (proof, theory, signature) triples spread over the small
    bases, with every tag represented."""
    rng = random.Random(seed)
    bases = small_bases()
    out = []
    for i in range(count):
        fz = ProofFuzzer(rng, bases[i % len(bases)])
        out.append((fz.proof(rng.randint(1, depth)), fz.theory, fz.sig))
    return out


# --- proof mutants --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofMutant:
    kind: str
    path: tuple
    proof: ProofTree


def _unique_children(node: ProofTree) -> list:
    counts = {}
    for k in node.children:
        counts[k.formula] = counts.get(k.formula, 0) + 1
    return [i for i, k in enumerate(node.children) if counts[k.formula] == 1]


def proof_mutant(rng: random.Random, p: ProofTree) -> ProofMutant:
    """One single-node mutation: the node's formula becomes the contradiction,
    a premise with a unique instance is dropped, or the tag is swapped between
    leaf and rule kinds."""
    nodes = list(p.nodes())
    while True:
        path, node = rng.choice(nodes)
        kind = rng.choice(["swap-formula", "drop-child", "retag"])
        if kind == "swap-formula" and node.formula != BOTTOM:
            return ProofMutant(kind, path, p.replace(path, ProofTree(BOTTOM, node.tag, node.children)))
        if kind == "drop-child":
            options = _unique_children(node)
            if options:
                i = rng.choice(options)
                kids = node.children[:i] + node.children[i + 1:]
                return ProofMutant(kind, path, p.replace(path, ProofTree(node.formula, node.tag, kids)))
        if kind == "retag":
            if node.children:
                tag = rng.choice(LEAF_TAGS)
            else:
                tag = "mp"
            return ProofMutant(kind, path, p.replace(path, ProofTree(node.formula, tag, node.children)))
