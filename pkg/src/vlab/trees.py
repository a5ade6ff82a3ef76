"""Coding pairs, quotient pairs and the operations on quotient trees.

A coding pair is a rooted tree whose nodes stand for the members of the
transitive closure of {x}, each node's children standing for the members of
its set.  Collapsing isomorphic subtrees yields the quotient pair, an
extensional well-founded graph that is the membership graph of TC({x}).

Isomorphism is decided with bottom-up canonical labels: a node's label is the
interned multiset of its children's labels.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Mapping

from .errors import ArityError, ParseError, ValidationError
from .hf import HFSet, make_set, ordinal, pair, singleton, transitive_closure
from .structures import FiniteStructure
from .syntax import free_vars
from .semantics import satisfies

_CANON: dict = {}


def _intern(key: tuple) -> int:
    label = _CANON.get(key)
    if label is None:
        label = _CANON[key] = len(_CANON)
    return label


class _Graph:
    """Shared read-only interface of raw trees and quotient trees."""

    root: Hashable

    def kids(self, node) -> tuple:
        raise NotImplementedError

    @property
    def nodes(self):
        raise NotImplementedError

    @cached_property
    def labels(self) -> dict:
        return canonical_labels(self)

    @property
    def root_label(self) -> int:
        return self.labels[self.root]

    @cached_property
    def child_labels(self) -> frozenset:
        lab = self.labels
        return frozenset(lab[k] for k in self.kids(self.root))

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class RawTree(_Graph):
    """A finite rooted graph given by child lists; conditions not yet checked."""

    root: Hashable
    children: Mapping = field(default_factory=dict)
    names: Mapping = field(default_factory=dict)

    def __post_init__(self):
        kids = {n: tuple(dict.fromkeys(ks)) for n, ks in self.children.items()}
        for ks in list(kids.values()):
            for k in ks:
                kids.setdefault(k, ())
        kids.setdefault(self.root, ())
        object.__setattr__(self, "children", kids)

    def kids(self, node):
        return self.children[node]

    @property
    def nodes(self):
        return tuple(self.children)


class CodingTree(RawTree):
    """A RawTree known to satisfy conditions (i)-(iv)."""


@dataclass(frozen=True, eq=False)
class QuotientTree(_Graph):
    """Nodes are 0..n-1 in canonical structural order; ``children[i]`` is sorted."""

    root: int
    children: tuple

    def kids(self, node):
        return self.children[node]

    @property
    def nodes(self):
        return tuple(range(len(self.children)))

    def __eq__(self, other):
        return isinstance(other, QuotientTree) and self.root == other.root \
            and self.children == other.children

    def __hash__(self):
        return hash((self.root, self.children))


# --- canonical labels --------------------------------------------------------------

def _postorder(g: _Graph, start=None):
    """Nodes reachable from ``start`` in post-order; raises on cycles."""
    start = g.root if start is None else start
    order, state = [], {}
    stack = [(start, iter(g.kids(start)))]
    state[start] = 1
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            state[node] = 2
            order.append(node)
            continue
        s = state.get(nxt)
        if s == 1:
            raise ValueError(f"cycle through node {nxt!r}")
        if s is None:
            state[nxt] = 1
            stack.append((nxt, iter(g.kids(nxt))))
    return order


def canonical_labels(g: _Graph) -> dict:
    labels = {}
    for node in _postorder(g):
        labels[node] = _intern(tuple(sorted(labels[k] for k in g.kids(node))))
    return labels


def isomorphic(g1: _Graph, n1, g2: _Graph, n2) -> bool:
    return g1.labels[n1] == g2.labels[n2]


# --- validation ------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    clause: str | None = None
    nodes: tuple = ()
    message: str = ""
    violations: tuple = ()

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "clause": self.clause, "nodes": [str(n) for n in self.nodes],
                "message": self.message, "violations": list(self.violations)}


CLAUSE_ORDER = ("iv", "i", "iii", "ii")


def validate_coding_pair(t: _Graph) -> ValidationReport:
    """Check the four coding-pair conditions.

    Reports every violated clause; ``clause`` is the first in the order
    (iv) well-foundedness, (i) unique distance, (iii) no shared children at
    one level, (ii) non-isomorphic siblings.
    """
    found = {}
    cyc = _find_cycle(t)
    if cyc is not None:
        found["iv"] = ((cyc,), f"edge relation has a cycle through {cyc!r}")
        return _report(found)

    dists = _distances(t)
    bad = [n for n in t.nodes if len(dists.get(n, ())) != 1]
    if bad:
        found["i"] = (tuple(bad[:2]), f"node {bad[0]!r} lacks a unique distance from the top")

    by_level = defaultdict(list)
    for n, ds in dists.items():
        if len(ds) == 1:
            by_level[next(iter(ds))].append(n)
    shared = None
    for level in sorted(by_level):
        owner = {}
        for parent in by_level[level]:
            for k in t.kids(parent):
                if k in owner and owner[k] != parent:
                    shared = (owner[k], parent, k)
                    break
                owner[k] = parent
            if shared:
                break
        if shared:
            break
    if shared:
        found["iii"] = (shared, f"nodes {shared[0]!r} and {shared[1]!r} share child {shared[2]!r}")

    labels = canonical_labels_all(t)
    for node in t.nodes:
        seen = {}
        for k in t.kids(node):
            lab = labels[k]
            if lab in seen:
                found["ii"] = ((node, seen[lab], k),
                               f"children {seen[lab]!r} and {k!r} of {node!r} are isomorphic")
                break
            seen[lab] = k
        if "ii" in found:
            break
    return _report(found)


def _report(found):
    if not found:
        return ValidationReport(True)
    first = next(c for c in CLAUSE_ORDER if c in found)
    nodes, msg = found[first]
    return ValidationReport(False, first, nodes, msg,
                            tuple(c for c in CLAUSE_ORDER if c in found))


def _find_cycle(t):
    state = {}
    for start in t.nodes:
        if start in state:
            continue
        stack = [(start, iter(t.kids(start)))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                state[node] = 2
                continue
            s = state.get(nxt)
            if s == 1:
                return nxt
            if s is None:
                state[nxt] = 1
                stack.append((nxt, iter(t.kids(nxt))))
    return None


def _distances(t):
    """All path lengths from the root, per reachable node (graph is acyclic)."""
    order = _postorder(t)
    dists = {t.root: {0}}
    for node in reversed(order):
        for k in t.kids(node):
            dists.setdefault(k, set()).update(d + 1 for d in dists[node])
    return dists


def canonical_labels_all(t) -> dict:
    """Labels for every node, including ones unreachable from the root."""
    labels = {}
    for start in t.nodes:
        if start in labels:
            continue
        for node in _postorder(t, start):
            if node not in labels:
                labels[node] = _intern(tuple(sorted(labels[k] for k in t.kids(node))))
    return labels


def as_coding_pair(t: RawTree) -> CodingTree:
    report = validate_coding_pair(t)
    if not report.ok:
        raise ValidationError(report)
    if isinstance(t, CodingTree):
        return t
    return CodingTree(t.root, t.children, t.names)


# --- encode / quotient / decode ------------------------------------------------------

def encode_set(x: HFSet) -> CodingTree:
    """The unfolded membership tree of x (a coding pair for TC({x}))."""
    children = {}
    counter = 0
    root = 0
    stack = [(x, root)]
    counter = 1
    while stack:
        s, node = stack.pop()
        ks = []
        for member in s.elems:
            ks.append(counter)
            stack.append((member, counter))
            counter += 1
        children[node] = tuple(ks)
    return CodingTree(root, children)


def quotient(t: _Graph, validate: bool = True) -> QuotientTree:
    """Collapse isomorphic subtrees to one canonical representative each.

    Raw trees are validated first; quotient trees are accepted as they are
    (the operation is idempotent on them).
    """
    if validate and not isinstance(t, (QuotientTree, CodingTree)):
        as_coding_pair(t)
    labels = t.labels
    kids_of = {}
    for node in _postorder(t):
        lab = labels[node]
        if lab not in kids_of:
            kids_of[lab] = tuple(sorted({labels[k] for k in t.kids(node)}))
    return _from_label_graph(labels[t.root], kids_of)


def _from_label_graph(root_label, kids_of) -> QuotientTree:
    keys = {}

    def key(lab):
        k = keys.get(lab)
        if k is None:
            ck = sorted(key(c) for c in kids_of[lab])
            height = 1 + max((c[0] for c in ck), default=-1)
            k = keys[lab] = (height, len(ck), tuple(ck))
        return k

    for lab in _label_postorder(root_label, kids_of):
        key(lab)
    ordered = sorted(keys, key=keys.get)
    index = {lab: i for i, lab in enumerate(ordered)}
    children = tuple(tuple(sorted(index[c] for c in kids_of[lab])) for lab in ordered)
    return QuotientTree(index[root_label], children)


def _label_postorder(root_label, kids_of):
    out, seen, stack = [], set(), [(root_label, False)]
    while stack:
        lab, done = stack.pop()
        if done:
            out.append(lab)
            continue
        if lab in seen:
            continue
        seen.add(lab)
        stack.append((lab, True))
        stack.extend((c, False) for c in kids_of[lab] if c not in seen)
    return out


def decode(q: _Graph, node=None) -> HFSet:
    """Read each node as the set of its children's readings."""
    memo = {}
    for n in _postorder(q, q.root if node is None else node):
        memo[n] = make_set(memo[k] for k in q.kids(n))
    return memo[q.root if node is None else node]


def code(x: HFSet) -> QuotientTree:
    """``quotient(encode_set(x))``."""
    return quotient(encode_set(x))


def subtree(q: QuotientTree, node: int) -> QuotientTree:
    kids_of = {}
    labels = q.labels
    for n in _postorder(q, node):
        kids_of[labels[n]] = tuple(sorted({labels[k] for k in q.kids(n)}))
    return _from_label_graph(labels[node], kids_of)


# --- E_T and =_T ------------------------------------------------------------------------

def et_related(q1: _Graph, q2: _Graph) -> bool:
    """q2 is isomorphic to a direct subtree of q1 (decoded: q2 in q1)."""
    return q2.root_label in q1.child_labels


def tt_equal(q1: _Graph, q2: _Graph) -> bool:
    return q1.root_label == q2.root_label


# --- operations on quotient trees --------------------------------------------------

def _combine(roots) -> QuotientTree:
    """Quotient of a fresh top node over the given (graph, node) subtrees."""
    kids_of = {}
    top_kids = set()
    for g, node in roots:
        labels = g.labels
        for n in _postorder(g, node):
            lab = labels[n]
            if lab not in kids_of:
                kids_of[lab] = tuple(sorted({labels[k] for k in g.kids(n)}))
        top_kids.add(labels[node])
    top = _intern(tuple(sorted(top_kids)))
    kids_of[top] = tuple(sorted(top_kids))
    return _from_label_graph(top, kids_of)


def pairing_plus(q1: _Graph, q2: _Graph) -> QuotientTree:
    """A tree with both inputs as direct subtrees: codes {x, y}."""
    return _combine([(q1, q1.root), (q2, q2.root)])


def union_plus(q: _Graph) -> QuotientTree:
    """A tree whose direct subtrees are those of q's direct subtrees: codes the union."""
    return _combine([(q, g) for k in q.kids(q.root) for g in q.kids(k)])


def separation_plus(q: _Graph, phi, ctx: FiniteStructure | None = None, var=None) -> QuotientTree:
    """Keep the direct subtrees whose decoded set satisfies ``phi``.

    Failing subtrees are replaced by one fixed satisfying subtree, after
    which the quotient merges the duplicates; with no satisfying subtree the
    result is the one-node tree.
    """
    fv = free_vars(phi)
    if len(fv) > 1:
        raise ArityError(f"separation formula must have one free variable, has {sorted(fv)}")
    if var is None:
        var = next(iter(fv)) if fv else "x"
    if ctx is None:
        ctx = FiniteStructure.from_set(transitive_closure(singleton(decode(q))))
    kids = q.kids(q.root)
    verdict = {k: satisfies(ctx, phi, {var: decode(q, k)}) for k in kids}
    keep = [k for k in kids if verdict[k]]
    if not keep:
        return quotient(RawTree(0, {0: ()}))
    c0 = keep[0]
    return _combine([(q, k if verdict[k] else c0) for k in kids])


def transitivity_check(q: _Graph) -> bool:
    """Every node directly below a direct subtree's top heads a direct subtree
    of the whole tree, so the decoded set is transitive."""
    top = q.child_labels
    labels = q.labels
    return all(labels[z] in top for y in q.kids(q.root) for z in q.kids(y))


def rep_pair(X: HFSet, Y: HFSet) -> HFSet:
    """{<z, 1> : z in X} union {<z, 2> : z in Y}."""
    one, two = ordinal(1), ordinal(2)
    return make_set([pair(z, one) for z in X] + [pair(z, two) for z in Y])


# --- outline text format -------------------------------------------------------------

def format_tree(t: _Graph, indent: str = "  ") -> str:
    """One node per line, indented by depth.  Shared nodes are printed once
    with their children; later occurrences are bare references."""
    name = {}
    for n in t.nodes:
        name[n] = str(getattr(t, "names", {}).get(n, f"n{n}"))
    lines, printed = [], set()

    def walk(node, depth):
        lines.append(indent * depth + name[node])
        if node in printed:
            return
        printed.add(node)
        for k in t.kids(node):
            walk(k, depth + 1)

    walk(t.root, 0)
    return "\n".join(lines) + "\n"


def parse_tree(text: str, source: str | None = None) -> RawTree:
    """Inverse of :func:`format_tree`.

    A repeated label refers back to the node first introduced with it and
    must not carry children of its own.  A line holding only ``-`` is an
    anonymous fresh node.
    """
    children: dict = {}
    names: dict = {}
    by_label: dict = {}
    stack: list = []  # (indent width, node, is_reference)
    root = None
    fresh = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        label = raw.strip()
        lead = raw[: len(raw) - len(raw.lstrip())]
        if "\t" in lead:
            raise ParseError("tabs are not allowed in indentation", lineno, source)
        width = len(lead)
        while stack and stack[-1][0] >= width:
            stack.pop()
        if root is not None and not stack:
            raise ParseError("a second root or bad indentation", lineno, source)
        if root is None and width:
            raise ParseError("the root must not be indented", lineno, source)
        if label == "-":
            node = ("anon", fresh)
            names[node] = f"_{fresh}"
            fresh += 1
            reference = False
        elif label in by_label:
            node = by_label[label]
            reference = True
        else:
            node = by_label[label] = label
            names[node] = label
            reference = False
        if stack:
            _, parent, parent_is_ref = stack[-1]
            if parent_is_ref:
                raise ParseError("a reference line cannot have children", lineno, source)
            children.setdefault(parent, []).append(node)
        else:
            root = node
        children.setdefault(node, [])
        stack.append((width, node, reference))
    if root is None:
        raise ParseError("empty tree", None, source)
    return RawTree(root, {n: tuple(ks) for n, ks in children.items()}, names)
