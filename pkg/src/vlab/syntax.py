"""Terms and formulas of the first-order set language with set constants,
the base predicate ``M`` and extra predicates ``W0, W1, ...``.

Text syntax (round-trips through :func:`format_formula`)::

    forall x in {{}} . (x = {} or x in M)
    exists y . not y in y
    (A implies B)     (A and B)     (A or B)     not A
    t in s    t = s    t != s    t in W0
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ClassificationError, MalformedFormulaError, ParseError
from .hf import HFSet, format_set, scan_set


# --- terms -------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: HFSet

    def __str__(self):
        return format_set(self.value)


Term = Union[Var, Const]


# --- formulas --------------------------------------------------------------------

@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Pred:
    name: str
    term: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    """``bound`` is None (unbounded), a term, or a predicate name."""

    var: str
    body: "Formula"
    bound: object = None


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"
    bound: object = None


Formula = Union[Mem, Eq, Pred, Not, And, Or, Implies, Forall, Exists]
ATOMIC = (Mem, Eq, Pred)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Forall, Exists)

PRED_RE = re.compile(r"^(M|W\d+)$")


def is_predicate_name(name: str) -> bool:
    return bool(PRED_RE.match(name))


def c(x: HFSet) -> Const:
    """Shorthand for a set constant."""
    return Const(x)


# --- structural helpers -------------------------------------------------------------

def term_vars(t) -> set:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(phi) -> frozenset:
    if isinstance(phi, (Mem, Eq)):
        return frozenset(term_vars(phi.left) | term_vars(phi.right))
    if isinstance(phi, Pred):
        return frozenset(term_vars(phi.term))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        inner = free_vars(phi.body) - {phi.var}
        if isinstance(phi.bound, (Var, Const)):
            inner = inner | term_vars(phi.bound)
        return inner
    raise MalformedFormulaError(f"not a formula: {phi!r}")


def is_sentence(phi) -> bool:
    return not free_vars(phi)


def substitute(phi, var: str, term):
    """Replace free occurrences of ``var`` by ``term``.

    No capture check: callers substitute constants, or variables that are
    not bound anywhere inside ``phi``.
    """

    def sub_t(t):
        return term if isinstance(t, Var) and t.name == var else t

    if isinstance(phi, Mem):
        return Mem(sub_t(phi.left), sub_t(phi.right))
    if isinstance(phi, Eq):
        return Eq(sub_t(phi.left), sub_t(phi.right))
    if isinstance(phi, Pred):
        return Pred(phi.name, sub_t(phi.term))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, var, term))
    if isinstance(phi, BINARY):
        return type(phi)(substitute(phi.left, var, term), substitute(phi.right, var, term))
    if isinstance(phi, QUANTIFIERS):
        bound = sub_t(phi.bound) if isinstance(phi.bound, (Var, Const)) else phi.bound
        if phi.var == var:
            return type(phi)(phi.var, phi.body, bound)
        return type(phi)(phi.var, substitute(phi.body, var, term), bound)
    raise MalformedFormulaError(f"not a formula: {phi!r}")


def subformulas(phi) -> Iterator:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, BINARY):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, QUANTIFIERS):
        yield from subformulas(phi.body)


def constants(phi) -> set:
    out = set()
    for sub in subformulas(phi):
        if isinstance(sub, (Mem, Eq)):
            terms = (sub.left, sub.right)
        elif isinstance(sub, Pred):
            terms = (sub.term,)
        elif isinstance(sub, QUANTIFIERS):
            terms = (sub.bound,)
        else:
            terms = ()
        out.update(t.value for t in terms if isinstance(t, Const))
    return out


def predicates(phi) -> set:
    out = set()
    for sub in subformulas(phi):
        if isinstance(sub, Pred):
            out.add(sub.name)
        elif isinstance(sub, QUANTIFIERS) and isinstance(sub.bound, str):
            out.add(sub.bound)
    return out


def size(phi) -> int:
    return sum(1 for _ in subformulas(phi))


def quantifier_depth(phi) -> int:
    if isinstance(phi, ATOMIC):
        return 0
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, BINARY):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return 1 + quantifier_depth(phi.body)


def check_well_formed(phi, scope=()):
    """Raise if a variable is bound twice on one path or a free variable is
    outside ``scope``."""

    def walk(f, bound_here):
        if isinstance(f, QUANTIFIERS):
            if f.var in bound_here:
                raise MalformedFormulaError(f"variable {f.var} bound twice on one path")
            if isinstance(f.bound, str) and not is_predicate_name(f.bound):
                raise MalformedFormulaError(f"unknown predicate {f.bound}")
            walk(f.body, bound_here | {f.var})
        elif isinstance(f, Not):
            walk(f.body, bound_here)
        elif isinstance(f, BINARY):
            walk(f.left, bound_here)
            walk(f.right, bound_here)
        elif isinstance(f, Pred) and not is_predicate_name(f.name):
            raise MalformedFormulaError(f"unknown predicate {f.name}")

    walk(phi, frozenset())
    extra = free_vars(phi) - set(scope)
    if extra:
        raise MalformedFormulaError(f"free variables out of scope: {sorted(extra)}")


# --- complexity ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ComplexityClass:
    level: int
    kind: str  # "D" (Delta_0), "S" (Sigma), "P" (Pi)

    def __str__(self):
        if self.level == 0:
            return "Delta0"
        return ("Sigma" if self.kind == "S" else "Pi") + str(self.level)


DELTA0 = ComplexityClass(0, "D")


def sigma(n):
    return ComplexityClass(n, "S")


def pi(n):
    return ComplexityClass(n, "P")


def _dual(k: ComplexityClass) -> ComplexityClass:
    if k.level == 0:
        return k
    return ComplexityClass(k.level, "P" if k.kind == "S" else "S")


def _join(a: ComplexityClass, b: ComplexityClass) -> ComplexityClass:
    if a.level == 0:
        return b
    if b.level == 0:
        return a
    if a.level != b.level:
        return a if a.level > b.level else b
    if a.kind == b.kind:
        return a
    return sigma(a.level + 1)


def classify(phi) -> ComplexityClass:
    """Syntactic Levy class: Delta0 iff every quantifier is bounded by a term.

    Quantifiers bounded by a predicate count as unbounded (the predicate is a
    class, not a set).
    """
    if isinstance(phi, ATOMIC):
        return DELTA0
    if isinstance(phi, Not):
        return _dual(classify(phi.body))
    if isinstance(phi, (And, Or)):
        return _join(classify(phi.left), classify(phi.right))
    if isinstance(phi, Implies):
        return _join(_dual(classify(phi.left)), classify(phi.right))
    if isinstance(phi, QUANTIFIERS):
        inner = classify(phi.body)
        if isinstance(phi.bound, (Var, Const)):
            return inner
        want = "S" if isinstance(phi, Exists) else "P"
        if inner.level == 0:
            return ComplexityClass(1, want)
        if inner.kind == want:
            return inner
        return ComplexityClass(inner.level + 1, want)
    raise ClassificationError(f"not a formula: {phi!r}")


def is_delta0(phi) -> bool:
    return classify(phi).level == 0


# --- printing ------------------------------------------------------------------------

def format_term(t) -> str:
    return str(t)


def format_formula(phi) -> str:
    if isinstance(phi, Mem):
        return f"{phi.left} in {phi.right}"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Pred):
        return f"{phi.term} in {phi.name}"
    if isinstance(phi, Not):
        return "not " + _operand(phi.body)
    if isinstance(phi, BINARY):
        op = {And: "and", Or: "or", Implies: "implies"}[type(phi)]
        return f"({_operand(phi.left)} {op} {_operand(phi.right)})"
    if isinstance(phi, QUANTIFIERS):
        q = "forall" if isinstance(phi, Forall) else "exists"
        bound = ""
        if phi.bound is not None:
            bound = f" in {phi.bound}"
        return f"{q} {phi.var}{bound} . {format_formula(phi.body)}"
    raise MalformedFormulaError(f"not a formula: {phi!r}")


def _operand(phi) -> str:
    text = format_formula(phi)
    if isinstance(phi, QUANTIFIERS):
        return f"({text})"
    return text


# --- parsing --------------------------------------------------------------------------

KEYWORDS = {"not", "and", "or", "implies", "forall", "exists", "in"}
_TOKEN_RE = re.compile(r"\s*(?:(!=)|([().=])|([A-Za-z_][A-Za-z0-9_']*))")


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.toks = []
        self._lex()
        self.i = 0

    def _lex(self):
        text = self.text
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            if text[pos] == "{":
                value, pos = scan_set(text, pos)
                self.toks.append(("set", value))
                continue
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1}")
            tok = m.group(1) or m.group(2) or m.group(3)
            kind = "word" if m.group(3) else "sym"
            self.toks.append((kind, tok))
            pos = m.end()

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {_shown(tok[1])}")
        return tok


def parse_formula(text: str):
    lex = _Lexer(text)
    phi = _parse(lex)
    if lex.peek()[0] != "eof":
        raise ParseError(f"unexpected trailing token {lex.peek()[1]!r}")
    return phi


def _parse(lex):
    kind, val = lex.peek()
    if kind == "word" and val == "not":
        lex.next()
        return Not(_parse(lex))
    if kind == "word" and val in ("forall", "exists"):
        lex.next()
        var = lex.expect("word")[1]
        if var in KEYWORDS or is_predicate_name(var):
            raise ParseError(f"bad variable name {var!r}")
        bound = None
        if lex.peek() == ("word", "in"):
            lex.next()
            bound = _parse_bound(lex)
        lex.expect("sym", ".")
        body = _parse(lex)
        return (Forall if val == "forall" else Exists)(var, body, bound)
    if kind == "sym" and val == "(":
        lex.next()
        left = _parse(lex)
        nk, nv = lex.peek()
        if (nk, nv) == ("sym", ")"):
            lex.next()
            return left
        if nk == "word" and nv in ("and", "or", "implies"):
            lex.next()
            right = _parse(lex)
            lex.expect("sym", ")")
            return {"and": And, "or": Or, "implies": Implies}[nv](left, right)
        raise ParseError(f"expected connective or ')', found {_shown(nv)}")
    return _parse_atom(lex)


def _parse_bound(lex):
    kind, val = lex.peek()
    if kind == "word" and is_predicate_name(val):
        lex.next()
        return val
    return _parse_term(lex)


def _shown(val) -> str:
    return "end of input" if val is None else repr(val)


def _parse_term(lex):
    kind, val = lex.next()
    if kind == "set":
        return Const(val)
    if kind == "word" and val not in KEYWORDS and not is_predicate_name(val):
        return Var(val)
    raise ParseError(f"expected a term, found {_shown(val)}")


def _parse_atom(lex):
    left = _parse_term(lex)
    kind, val = lex.next()
    if (kind, val) == ("word", "in"):
        nk, nv = lex.peek()
        if nk == "word" and is_predicate_name(nv):
            lex.next()
            return Pred(nv, left)
        return Mem(left, _parse_term(lex))
    if (kind, val) == ("sym", "="):
        return Eq(left, _parse_term(lex))
    if (kind, val) == ("sym", "!="):
        return Not(Eq(left, _parse_term(lex)))
    raise ParseError(f"expected 'in', '=' or '!=', found {_shown(val)}")


# --- common constructors -------------------------------------------------------------

def conj(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def neq(a, b):
    return Not(Eq(a, b))
