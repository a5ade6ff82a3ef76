"""Proof codes over a finite base model and a checker/search for them.

Justification tags
------------------
``membership``  leaf: ``c in M`` for c in the base
``diagram``     leaf: an atomic or negated atomic sentence (no predicates) true in the base
``fol``         leaf: an instance of one of the first-order schemas in :data:`SCHEMAS`
``premise``     leaf: a sentence of the theory
``mp``          two children proving ``A`` and ``(A implies B)``; concludes ``B``
``set``         concludes ``forall x in a . phi``; one child per b in a proving phi(b)
                (no children when a is empty)
``mrule``       concludes ``forall x in M . phi``; one child per b in the base
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coding import Signature
from .errors import BudgetError, MalformedFormulaError, ParseError
from .hf import EMPTY
from .semantics import satisfies
from .syntax import (And, Const, Eq, Exists, Forall, Implies, Mem, Not, Or, Pred,
                     Var, constants, format_formula, free_vars, parse_formula, substitute)

LEAF_TAGS = ("membership", "diagram", "fol", "premise")
RULE_TAGS = ("mp", "set", "mrule")
TAGS = LEAF_TAGS + RULE_TAGS

BOTTOM = And(Mem(Const(EMPTY), Const(EMPTY)), Not(Mem(Const(EMPTY), Const(EMPTY))))

DEFAULT_DEPTH_CAP = 8


@dataclass(frozen=True)
class ProofTree:
    formula: object
    tag: str
    children: tuple = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def nodes(self, path=()):
        """Pre-order (path, node) pairs."""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.nodes(path + (i,))

    def at(self, path):
        node = self
        for i in path:
            node = node.children[i]
        return node

    def replace(self, path, new):
        if not path:
            return new
        i = path[0]
        kids = list(self.children)
        kids[i] = kids[i].replace(path[1:], new)
        return ProofTree(self.formula, self.tag, tuple(kids))


@dataclass(frozen=True)
class Theory:
    name: str
    sentences: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        for s in self.sentences:
            if free_vars(s):
                raise MalformedFormulaError(f"theory sentence has free variables: {format_formula(s)}")


EMPTY_THEORY = Theory("empty")


# --- first-order schemas -------------------------------------------------------------

def _imp(f):
    return isinstance(f, Implies)


def _a1(f):  # A -> (B -> A)
    return _imp(f) and _imp(f.right) and f.right.right == f.left


def _a2(f):  # (A -> (B -> C)) -> ((A -> B) -> (A -> C))
    if not (_imp(f) and _imp(f.left) and _imp(f.left.right) and _imp(f.right)):
        return False
    a, b, c = f.left.left, f.left.right.left, f.left.right.right
    return f.right == Implies(Implies(a, b), Implies(a, c))


def _a3(f):  # (not B -> not A) -> (A -> B)
    if not (_imp(f) and _imp(f.left) and _imp(f.right)):
        return False
    nb, na = f.left.left, f.left.right
    return isinstance(nb, Not) and isinstance(na, Not) and f.right == Implies(na.body, nb.body)


def _efq(f):  # not A -> (A -> B)
    return _imp(f) and isinstance(f.left, Not) and _imp(f.right) and f.right.left == f.left.body


def _dn(f):  # A -> not not A, and not not A -> A
    if not _imp(f):
        return False
    return f.right == Not(Not(f.left)) or f.left == Not(Not(f.right))


def _c1(f):
    return _imp(f) and isinstance(f.left, And) and f.right == f.left.left


def _c2(f):
    return _imp(f) and isinstance(f.left, And) and f.right == f.left.right


def _c3(f):  # A -> (B -> (A and B))
    return (_imp(f) and _imp(f.right) and isinstance(f.right.right, And)
            and f.right.right == And(f.left, f.right.left))


def _d1(f):
    return _imp(f) and isinstance(f.right, Or) and f.right.left == f.left


def _d2(f):
    return _imp(f) and isinstance(f.right, Or) and f.right.right == f.left


def _d3(f):  # (A -> C) -> ((B -> C) -> ((A or B) -> C))
    if not (_imp(f) and _imp(f.left) and _imp(f.right) and _imp(f.right.left) and _imp(f.right.right)):
        return False
    a, cc = f.left.left, f.left.right
    b = f.right.left.left
    return f.right.left.right == cc and f.right.right == Implies(Or(a, b), cc)


def _bound_vars(phi):
    out = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (Forall, Exists)):
            out.add(f.var)
            stack.append(f.body)
        elif isinstance(f, Not):
            stack.append(f.body)
        elif isinstance(f, (And, Or, Implies)):
            stack += [f.left, f.right]
    return out


def _instance(body, var, target):
    """A term t with body[t/var] == target (substitutable), else None."""
    if var not in free_vars(body):
        return Const(EMPTY) if body == target else None
    captured = _bound_vars(body)
    terms = [Const(v) for v in constants(target)]
    terms += [Var(n) for n in sorted(free_vars(target)) if n not in captured]
    for t in terms:
        if substitute(body, var, t) == target:
            return t
    return None


def _q_all(f):  # forall x . A -> A(c)
    return (_imp(f) and isinstance(f.left, Forall) and f.left.bound is None
            and _instance(f.left.body, f.left.var, f.right) is not None)


def _q_ex(f):  # A(c) -> exists x . A
    return (_imp(f) and isinstance(f.right, Exists) and f.right.bound is None
            and _instance(f.right.body, f.right.var, f.left) is not None)


def _guard(bound, value):
    t = value if isinstance(value, (Var, Const)) else Const(value)
    if isinstance(bound, str):
        return Pred(bound, t)
    return Mem(t, bound)


def _guard_term(g):
    if isinstance(g, Pred):
        return g.term
    if isinstance(g, Mem):
        return g.left
    return None


def _qb_all(f):  # forall x in t . A -> (s in t -> A(s))
    if not (_imp(f) and isinstance(f.left, Forall) and f.left.bound is not None and _imp(f.right)):
        return False
    q, g = f.left, f.right.left
    t = _guard_term(g)
    if t is None or g != _guard(q.bound, t):
        return False
    return _substitutable(q, t) and substitute(q.body, q.var, t) == f.right.right


def _qb_ex(f):  # (s in t and A(s)) -> exists x in t . A
    if not (_imp(f) and isinstance(f.right, Exists) and f.right.bound is not None
            and isinstance(f.left, And)):
        return False
    q, g = f.right, f.left.left
    t = _guard_term(g)
    if t is None or g != _guard(q.bound, t):
        return False
    return _substitutable(q, t) and substitute(q.body, q.var, t) == f.left.right


def _substitutable(q, t):
    return not isinstance(t, Var) or t.name not in _bound_vars(q.body)


def _same_quant(a, b, var=None):
    return type(a) is type(b) and a.var == b.var and a.bound == b.bound


def _q_dist(f):  # Qx (A -> B) -> (Qx A -> Qx B), Q universal with any bound
    if not (_imp(f) and isinstance(f.left, Forall) and _imp(f.left.body) and _imp(f.right)):
        return False
    q = f.left
    a, b = f.right.left, f.right.right
    return (isinstance(a, Forall) and isinstance(b, Forall) and _same_quant(q, a) and _same_quant(q, b)
            and a.body == q.body.left and b.body == q.body.right)


def _q_vac(f):  # A -> Qx A with x not free in A
    return (_imp(f) and isinstance(f.right, Forall) and f.right.body == f.left
            and f.right.var not in free_vars(f.left))


def _ex_dual(f):  # (exists x . A) -> not forall x . not A, and the converse
    if not _imp(f):
        return False
    ex, nall = (f.left, f.right) if isinstance(f.left, Exists) else (f.right, f.left)
    if not isinstance(ex, Exists) or not isinstance(nall, Not) or not isinstance(nall.body, Forall):
        return False
    al = nall.body
    return al.var == ex.var and al.bound == ex.bound and al.body == Not(ex.body)


def _e1(f):  # c = c
    return isinstance(f, Eq) and f.left == f.right


def _e2(f):  # c = d -> (A -> A') with A atomic and A' replacing some c by d
    if not (_imp(f) and isinstance(f.left, Eq) and _imp(f.right)):
        return False
    c_, d_ = f.left.left, f.left.right
    a, b = f.right.left, f.right.right
    if type(a) is not type(b) or not isinstance(a, (Mem, Eq, Pred)):
        return False
    if isinstance(a, Pred):
        pairs = [(a.term, b.term)] if a.name == b.name else None
    else:
        pairs = [(a.left, b.left), (a.right, b.right)]
    if pairs is None:
        return False
    return all(x == y or (x == c_ and y == d_) for x, y in pairs)


SCHEMAS = {
    "A1": _a1, "A2": _a2, "A3": _a3, "EFQ": _efq, "DN": _dn,
    "C1": _c1, "C2": _c2, "C3": _c3,
    "D1": _d1, "D2": _d2, "D3": _d3,
    "Q-all": _q_all, "Q-ex": _q_ex, "QB-all": _qb_all, "QB-ex": _qb_ex,
    "Q-dist": _q_dist, "Q-vac": _q_vac, "Ex-dual": _ex_dual,
    "E1": _e1, "E2": _e2,
}


def fol_schema(f) -> str | None:
    """Name of the schema ``f`` instantiates, allowing a prefix of universal
    quantifiers (generalized axioms), or None."""
    while True:
        for name, test in SCHEMAS.items():
            if test(f):
                return name
        if not isinstance(f, Forall):
            return None
        f = f.body


# --- checking ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    path: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"verdict": "accepted" if self.ok else "rejected",
                "path": list(self.path), "diagnostic": self.message}


def _is_diagram(phi) -> bool:
    atom = phi.body if isinstance(phi, Not) else phi
    return isinstance(atom, (Mem, Eq)) and isinstance(atom.left, Const) and isinstance(atom.right, Const)


def leaf_justifies(tag, phi, th: Theory, sig: Signature) -> str | None:
    """Return None if ``phi`` is a valid leaf under ``tag``, else a reason."""
    base = sig.base
    if tag == "membership":
        if isinstance(phi, Pred) and phi.name == "M" and isinstance(phi.term, Const) \
                and phi.term.value in base.domain:
            return None
        return "not of the form c in M for c in the base"
    if tag == "diagram":
        if not _is_diagram(phi):
            return "not an atomic or negated atomic sentence"
        if not satisfies(base, phi):
            return "diagram sentence is false in the base"
        return None
    if tag == "fol":
        return None if fol_schema(phi) else "not an instance of a first-order schema"
    if tag == "premise":
        return None if phi in th.sentences else "not a sentence of the theory"
    return f"unknown leaf tag {tag}"


def check_proof(p: ProofTree, th: Theory = EMPTY_THEORY, sig: Signature | None = None) -> CheckResult:
    """Accept iff every node meets its justification.  Reports the pre-order
    first failing node as a path of child indices."""
    if sig is None:
        raise ValueError("a signature is required")
    for path, node in p.nodes():
        reason = _check_node(node, th, sig)
        if reason:
            return CheckResult(False, path, f"{node.tag} :: {format_formula(node.formula)}: {reason}")
    return CheckResult(True)


def _check_node(node: ProofTree, th, sig) -> str | None:
    phi = node.formula
    try:
        sig.check(phi)
    except MalformedFormulaError as exc:
        return f"malformed: {exc}"
    tag = node.tag
    if tag in LEAF_TAGS:
        if node.children:
            return "axiom leaves have no premises"
        return leaf_justifies(tag, phi, th, sig)
    kids = node.children
    if tag == "mp":
        if len(kids) != 2:
            return f"modus ponens needs 2 premises, has {len(kids)}"
        a, b = kids[0].formula, kids[1].formula
        if b == Implies(a, phi) or a == Implies(b, phi):
            return None
        return "premises are not of the form A and (A implies conclusion)"
    if tag in ("set", "mrule"):
        if not isinstance(phi, Forall) or phi.bound is None:
            return "conclusion is not a bounded universal"
        if tag == "set":
            if not isinstance(phi.bound, Const):
                return "set rule needs a set-constant bound"
            members = phi.bound.value.elems
        else:
            if phi.bound != "M":
                return "M-rule needs the bound M"
            members = sorted(sig.base.domain)
        wanted = {substitute(phi.body, phi.var, Const(b)): b for b in members}
        covered = set()
        for k in kids:
            if k.formula not in wanted:
                return f"premise {format_formula(k.formula)} is not an instance"
            covered.add(wanted[k.formula])
        missing = [b for b in members if b not in covered]
        if missing:
            return f"missing premise for b = {missing[0]}"
        return None
    return f"unknown tag {tag}"


# --- refutation search -----------------------------------------------------------------

@dataclass
class _Search:
    th: Theory
    sig: Signature
    universe: list
    universe_set: frozenset
    proved: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)
    steps: int = 0


def candidate_universe(th: Theory, sig: Signature, goal=BOTTOM, cap: int = 400) -> list:
    """Sentences the search may use as modus-ponens antecedents: subformula
    instances of the theory and goal over base constants, the universal
    duals of existentials, negations, and implications of the goal."""
    base = sorted(sig.base.domain)
    seen: dict = {}

    def add(f):
        if f in seen or len(seen) >= cap:
            return
        seen[f] = None
        if isinstance(f, Not):
            add(f.body)
        elif isinstance(f, (And, Or, Implies)):
            add(f.left)
            add(f.right)
        elif isinstance(f, (Forall, Exists)):
            if f.bound is None:
                rng = base
            elif isinstance(f.bound, str):
                rng = base if f.bound == "M" else []
            else:
                rng = f.bound.value.elems
            for b in rng:
                add(_guard(f.bound, b) if f.bound is not None else Eq(Const(b), Const(b)))
                add(substitute(f.body, f.var, Const(b)))
            if isinstance(f, Exists):
                add(Forall(f.var, Not(f.body), f.bound))

    for s in list(th.sentences) + [goal]:
        add(s)
    base_pool = list(seen)
    for f in base_pool:
        if not isinstance(f, Not):
            if len(seen) >= cap:
                break
            seen.setdefault(Not(f), None)
    # f -> goal lets case splits and contrapositions reach the goal
    for f in base_pool:
        if f != goal and len(seen) < cap:
            seen.setdefault(Implies(f, goal), None)
    return list(seen)


def refutation_search(th: Theory, sig: Signature, depth: int, depth_cap: int = DEFAULT_DEPTH_CAP,
                      goal=BOTTOM, universe_cap: int = 400):
    """Iterative-deepening backward search for a proof of ``goal`` (default
    the fixed contradiction).  Returns a checked ProofTree or None.

    Modus-ponens antecedents are drawn from :func:`candidate_universe`, so the
    search is complete only relative to that pool.
    """
    if depth > depth_cap:
        raise BudgetError("proof depth", depth_cap, depth)
    universe = candidate_universe(th, sig, goal, universe_cap)
    st = _Search(th, sig, universe, frozenset(universe))
    for d in range(1, depth + 1):
        proof = _prove(st, goal, d)
        if proof is not None:
            return proof
    return None


def _leaf(st, phi):
    for tag in LEAF_TAGS:
        if leaf_justifies(tag, phi, st.th, st.sig) is None:
            return ProofTree(phi, tag)
    return None


def _prove(st, goal, d):
    hit = st.proved.get(goal)
    if hit is not None and hit.depth <= d:
        return hit
    if st.failed.get(goal, 0) >= d:
        return None
    st.steps += 1
    proof = _leaf(st, goal) if _closed_ok(st, goal) else None
    if proof is None and d > 1:
        proof = _prove_rule(st, goal, d)
    if proof is None:
        st.failed[goal] = max(d, st.failed.get(goal, 0))
    else:
        st.proved[goal] = proof
    return proof


def _closed_ok(st, phi):
    try:
        st.sig.check(phi)
    except MalformedFormulaError:
        return False
    return True


def _prove_rule(st, goal, d):
    if isinstance(goal, Forall) and goal.bound is not None:
        if isinstance(goal.bound, Const):
            members, tag = goal.bound.value.elems, "set"
        elif goal.bound == "M":
            members, tag = sorted(st.sig.base.domain), "mrule"
        else:
            members, tag = (), None
        if tag is not None:
            kids = []
            for b in members:
                sub = _prove(st, substitute(goal.body, goal.var, Const(b)), d - 1)
                if sub is None:
                    kids = None
                    break
                kids.append(sub)
            if kids is not None:
                return ProofTree(goal, tag, tuple(kids))
    in_universe = goal in st.universe_set
    for f in st.universe:
        imp = Implies(f, goal)
        if in_universe:
            p_imp = _prove(st, imp, d - 1)
        else:
            p_imp = _leaf(st, imp)
        if p_imp is None:
            continue
        p_f = _prove(st, f, d - 1)
        if p_f is not None:
            return ProofTree(goal, "mp", (p_f, p_imp))
    return None


# --- proof file format -------------------------------------------------------------------

def format_proof(p: ProofTree, indent: str = "  ") -> str:
    lines = []

    def walk(node, depth):
        lines.append(f"{indent * depth}{node.tag} :: {format_formula(node.formula)}")
        for k in node.children:
            walk(k, depth + 1)

    walk(p, 0)
    return "\n".join(lines) + "\n"


def parse_proof(text: str, source: str | None = None) -> ProofTree:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        width = len(raw) - len(raw.lstrip(" "))
        body = raw.strip()
        if "::" not in body:
            raise ParseError("expected '<tag> :: <formula>'", lineno, source)
        tag, _, ftext = body.partition("::")
        tag = tag.strip()
        if tag not in TAGS:
            raise ParseError(f"unknown justification tag {tag!r}", lineno, source)
        try:
            phi = parse_formula(ftext.strip())
        except ParseError as exc:
            raise ParseError(str(exc), lineno, source) from None
        entries.append((width, tag, phi, lineno))
    if not entries:
        raise ParseError("empty proof", None, source)
    pos = 0

    def build(width):
        nonlocal pos
        w, tag, phi, lineno = entries[pos]
        pos += 1
        kids = []
        child_width = None
        while pos < len(entries) and entries[pos][0] > w:
            if child_width is None:
                child_width = entries[pos][0]
            elif entries[pos][0] != child_width:
                raise ParseError("inconsistent indentation", entries[pos][3], source)
            kids.append(build(child_width))
        return ProofTree(phi, tag, tuple(kids))

    root = build(entries[0][0])
    if pos != len(entries):
        raise ParseError("more than one root", entries[pos][3], source)
    return root


def format_theory(th: Theory) -> str:
    return "".join(format_formula(s) + "\n" for s in th.sentences)


def parse_theory(text: str, name: str = "theory", source: str | None = None) -> Theory:
    sentences = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            sentences.append(parse_formula(line))
        except ParseError as exc:
            raise ParseError(str(exc), lineno, source) from None
    return Theory(name, tuple(sentences))


# --- consistency verdicts ------------------------------------------------------------------

@dataclass(frozen=True)
class ConsistencyVerdict:
    verdict: str
    proof: ProofTree | None = None
    model: object = None

    def as_dict(self):
        out = {"verdict": self.verdict}
        if self.proof is not None:
            out["proof_depth"] = self.proof.depth
        if self.model is not None:
            out["model_size"] = len(self.model.domain)
        return out


def consistent(th: Theory, sig: Signature, depth: int = 6, budget: int = 4,
               extra: str | None = None) -> ConsistencyVerdict:
    """Refutation search first, then the outer-model search over the base of
    ``sig`` (its first extra predicate names the outer model).  A refutation
    wins, so the verdict is never both."""
    from .multiverse import model_search

    proof = refutation_search(th, sig, depth)
    if proof is not None:
        return ConsistencyVerdict("refuted", proof=proof)
    if extra is None:
        extra = sig.extras[0] if sig.extras else "W0"
    model = model_search(th, sig.base, budget, extra)
    if model is not None:
        return ConsistencyVerdict("model-found", model=model)
    return ConsistencyVerdict("unknown")
