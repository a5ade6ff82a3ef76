"""Coding formulas as hereditarily finite sets.

A set constant for ``x`` is the pair <x, 3>.  Logical symbols are pairs
<n, 4> for a small numeral ``n``, variables are <i, 5> with ``i`` the
variable's position in the signature's alphabet.  The base predicate ``M``
is coded by the base domain ``D`` itself and ``Wk`` by the (k+1)-fold
singleton of ``D``.  A formula is the set {<i, s_i>} of its symbol codes in
Polish (prefix) order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DecodeError, MalformedFormulaError
from .hf import HFSet, make_set, ordinal, ordinal_value, pair, singleton, unpair
from .structures import FiniteStructure
from .syntax import (And, Const, Eq, Exists, Forall, Implies, Mem, Not, Or, Pred,
                     Var, check_well_formed, constants, predicates)

CONST_TAG = 3
SYMBOL_TAG = 4
VAR_TAG = 5

MEM, EQ, NOT, AND, OR, IMP, ALL, EX, BALL, BEX, PRED, PALL, PEX = range(13)
_BINARY = {AND: And, OR: Or, IMP: Implies}
_BINARY_CODE = {And: AND, Or: OR, Implies: IMP}

DEFAULT_VARIABLES = ("x", "y", "z", "u", "v", "w", "a", "b", "c", "d")


@dataclass(frozen=True)
class Signature:
    """Base structure interpreting ``M`` plus ordered extra predicate names."""

    base: FiniteStructure
    extras: tuple = ()
    variables: tuple = DEFAULT_VARIABLES

    @property
    def predicate_names(self):
        return ("M",) + tuple(self.extras)

    def predicate_code(self, name: str) -> HFSet:
        code = self.base.as_set()
        if name == "M":
            return code
        if name not in self.extras:
            raise MalformedFormulaError(f"predicate {name} not in signature")
        for _ in range(self.extras.index(name) + 1):
            code = singleton(code)
        return code

    def check(self, phi, scope=()):
        check_well_formed(phi, scope)
        for name in predicates(phi):
            if name not in self.predicate_names:
                raise MalformedFormulaError(f"predicate {name} not in signature")
        for x in constants(phi):
            if x not in self.base.domain:
                raise MalformedFormulaError(f"constant {x} is not in the base")


def _sym(n):
    return pair(ordinal(n), ordinal(SYMBOL_TAG))


def const_code(x: HFSet) -> HFSet:
    return pair(x, ordinal(CONST_TAG))


def sequence(items) -> HFSet:
    return make_set(pair(ordinal(i), s) for i, s in enumerate(items))


def unsequence(code: HFSet) -> list:
    slots = {}
    for item in code:
        p = unpair(item)
        idx = None if p is None else ordinal_value(p[0])
        if idx is None:
            raise DecodeError(f"sequence entry {item} is not an indexed pair")
        if idx in slots:
            raise DecodeError(f"sequence index {idx} repeated")
        slots[idx] = p[1]
    if sorted(slots) != list(range(len(slots))):
        raise DecodeError("sequence indices are not contiguous from 0")
    return [slots[i] for i in range(len(slots))]


def encode_formula(phi, sig: Signature, scope=()) -> HFSet:
    sig.check(phi, scope)
    out = []
    _emit(phi, sig, out)
    return sequence(out)


def _term_code(t, sig):
    if isinstance(t, Const):
        return const_code(t.value)
    if t.name not in sig.variables:
        raise MalformedFormulaError(f"variable {t.name} outside the signature alphabet")
    return pair(ordinal(sig.variables.index(t.name)), ordinal(VAR_TAG))


def _emit(phi, sig, out):
    if isinstance(phi, (Mem, Eq)):
        out += [_sym(MEM if isinstance(phi, Mem) else EQ),
                _term_code(phi.left, sig), _term_code(phi.right, sig)]
    elif isinstance(phi, Pred):
        out += [_sym(PRED), sig.predicate_code(phi.name), _term_code(phi.term, sig)]
    elif isinstance(phi, Not):
        out.append(_sym(NOT))
        _emit(phi.body, sig, out)
    elif type(phi) in _BINARY_CODE:
        out.append(_sym(_BINARY_CODE[type(phi)]))
        _emit(phi.left, sig, out)
        _emit(phi.right, sig, out)
    elif isinstance(phi, (Forall, Exists)):
        is_all = isinstance(phi, Forall)
        var = _term_code(Var(phi.var), sig)
        if phi.bound is None:
            out += [_sym(ALL if is_all else EX), var]
        elif isinstance(phi.bound, str):
            out += [_sym(PALL if is_all else PEX), var, sig.predicate_code(phi.bound)]
        else:
            out += [_sym(BALL if is_all else BEX), var, _term_code(phi.bound, sig)]
        _emit(phi.body, sig, out)
    else:
        raise MalformedFormulaError(f"not a formula: {phi!r}")


def decode_formula(code: HFSet, sig: Signature):
    items = unsequence(code)
    if not items:
        raise DecodeError("empty sequence is not a formula code")
    reader = _Reader(items, sig)
    phi = reader.formula()
    if reader.i != len(items):
        raise DecodeError(f"trailing symbols from position {reader.i}")
    return phi


class _Reader:
    def __init__(self, items, sig):
        self.items = items
        self.sig = sig
        self.i = 0

    def _take(self, what):
        if self.i >= len(self.items):
            raise DecodeError(f"code ends where a {what} was expected (position {self.i})")
        item = self.items[self.i]
        self.i += 1
        return item

    def symbol(self):
        pos = self.i
        item = self._take("symbol")
        p = unpair(item)
        if p is None or p[1] is not ordinal(SYMBOL_TAG):
            raise DecodeError(f"position {pos}: expected a logical symbol, found {item}")
        n = ordinal_value(p[0])
        if n is None or n > PEX:
            raise DecodeError(f"position {pos}: unknown symbol numeral {p[0]}")
        return n

    def term(self):
        pos = self.i
        item = self._take("term")
        p = unpair(item)
        if p is not None and p[1] is ordinal(CONST_TAG):
            if p[0] not in self.sig.base.domain:
                raise DecodeError(f"position {pos}: constant {p[0]} is not in the base")
            return Const(p[0])
        if p is not None and p[1] is ordinal(VAR_TAG):
            idx = ordinal_value(p[0])
            if idx is None or idx >= len(self.sig.variables):
                raise DecodeError(f"position {pos}: bad variable index {p[0]}")
            return Var(self.sig.variables[idx])
        raise DecodeError(f"position {pos}: expected a term, found {item}")

    def var(self):
        pos = self.i
        t = self.term()
        if not isinstance(t, Var):
            raise DecodeError(f"position {pos}: expected a variable")
        return t.name

    def predicate(self):
        pos = self.i
        item = self._take("predicate")
        for name in self.sig.predicate_names:
            if item is self.sig.predicate_code(name):
                return name
        raise DecodeError(f"position {pos}: unknown predicate tag {item}")

    def formula(self):
        n = self.symbol()
        if n in (MEM, EQ):
            left, right = self.term(), self.term()
            return Mem(left, right) if n == MEM else Eq(left, right)
        if n == PRED:
            name = self.predicate()
            return Pred(name, self.term())
        if n == NOT:
            return Not(self.formula())
        if n in _BINARY:
            left = self.formula()
            return _BINARY[n](left, self.formula())
        if n in (ALL, EX):
            var = self.var()
            return (Forall if n == ALL else Exists)(var, self.formula())
        if n in (BALL, BEX):
            var = self.var()
            bound = self.term()
            return (Forall if n == BALL else Exists)(var, self.formula(), bound)
        var = self.var()
        bound = self.predicate()
        return (Forall if n == PALL else Exists)(var, self.formula(), bound)
