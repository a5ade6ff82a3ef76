"""Tarskian satisfaction over finite structures."""

from __future__ import annotations

from typing import Mapping

from .errors import InterpretationError, MalformedFormulaError
from .structures import FiniteStructure
from .syntax import And, Const, Eq, Exists, Forall, Implies, Mem, Not, Or, Pred, Var


def term_value(struct: FiniteStructure, t, asg: Mapping):
    if isinstance(t, Var):
        try:
            return asg[t.name]
        except KeyError:
            raise MalformedFormulaError(f"unassigned variable {t.name}") from None
    if isinstance(t, Const):
        if t.value not in struct.domain:
            raise InterpretationError(f"constant {t} is not in the structure")
        return t.value
    raise MalformedFormulaError(f"not a term: {t!r}")


def _range(struct, phi, asg):
    bound = phi.bound
    if bound is None:
        return struct.domain
    if isinstance(bound, str):
        ext = struct.predicate(bound)
        if ext is None:
            raise InterpretationError(f"predicate {bound} has no interpretation")
        return ext
    return term_value(struct, bound, asg).elems


def satisfies(struct: FiniteStructure, phi, asg: Mapping | None = None) -> bool:
    """Truth of ``phi`` in ``struct`` under the assignment ``asg``.

    Unbounded quantifiers range over the domain, term-bounded ones over the
    members of the bound, predicate-bounded ones over the predicate's
    extension.
    """
    return _sat(struct, phi, dict(asg or {}))


def _sat(struct, phi, asg):
    if isinstance(phi, Mem):
        return term_value(struct, phi.left, asg) in term_value(struct, phi.right, asg)
    if isinstance(phi, Eq):
        return term_value(struct, phi.left, asg) is term_value(struct, phi.right, asg)
    if isinstance(phi, Pred):
        ext = struct.predicate(phi.name)
        if ext is None:
            raise InterpretationError(f"predicate {phi.name} has no interpretation")
        return term_value(struct, phi.term, asg) in ext
    if isinstance(phi, Not):
        return not _sat(struct, phi.body, asg)
    if isinstance(phi, And):
        return _sat(struct, phi.left, asg) and _sat(struct, phi.right, asg)
    if isinstance(phi, Or):
        return _sat(struct, phi.left, asg) or _sat(struct, phi.right, asg)
    if isinstance(phi, Implies):
        return (not _sat(struct, phi.left, asg)) or _sat(struct, phi.right, asg)
    if isinstance(phi, (Forall, Exists)):
        want_all = isinstance(phi, Forall)
        saved = asg.get(phi.var, _MISSING)
        try:
            for value in _range(struct, phi, asg):
                asg[phi.var] = value
                if _sat(struct, phi.body, asg) != want_all:
                    return not want_all
            return want_all
        finally:
            if saved is _MISSING:
                asg.pop(phi.var, None)
            else:
                asg[phi.var] = saved
    raise MalformedFormulaError(f"not a formula: {phi!r}")


_MISSING = object()


def defines(struct: FiniteStructure, phi, var: str, params: Mapping | None = None):
    """The subset of the domain defined by ``phi`` in ``var``."""
    asg = dict(params or {})
    out = []
    for x in struct.domain:
        asg[var] = x
        if _sat(struct, phi, asg):
            out.append(x)
    return frozenset(out)
