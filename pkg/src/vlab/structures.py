"""Finite transitive structures used as base models, outer models and levels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .hf import HFSet, make_set, ordinal_value


@dataclass(frozen=True)
class FiniteStructure:
    """A finite domain of sets with membership, plus named unary predicates.

    The predicate ``M`` denotes the base model.  When it is not given
    explicitly it is the domain itself; outer-model structures override it
    with the smaller base so that ``M`` keeps naming the original universe.
    """

    domain: frozenset
    predicates: tuple = ()
    well_order: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.domain, frozenset):
            object.__setattr__(self, "domain", frozenset(self.domain))
        if isinstance(self.predicates, Mapping):
            object.__setattr__(self, "predicates", _freeze_preds(self.predicates))
        if self.well_order is not None:
            order = tuple(self.well_order)
            if frozenset(order) != self.domain or len(order) != len(self.domain):
                raise ValueError("well-order must list every domain element exactly once")
            object.__setattr__(self, "well_order", order)

    @classmethod
    def of(cls, members: Iterable[HFSet], predicates: Mapping | None = None, well_order=None):
        return cls(frozenset(members), _freeze_preds(predicates or {}), well_order)

    @classmethod
    def from_set(cls, x: HFSet, predicates: Mapping | None = None):
        return cls.of(x.elems, predicates)

    def predicate(self, name: str) -> frozenset | None:
        for key, ext in self.predicates:
            if key == name:
                return ext
        if name == "M":
            return self.domain
        return None

    @property
    def predicate_names(self) -> tuple:
        names = [k for k, _ in self.predicates]
        if "M" not in names:
            names.insert(0, "M")
        return tuple(names)

    def as_set(self) -> HFSet:
        return make_set(self.domain)

    def sorted_domain(self) -> list:
        return sorted(self.domain)

    def is_transitive(self) -> bool:
        dom = self.domain
        return all(z in dom for y in dom for z in y)

    def naturals(self) -> frozenset:
        """The von Neumann naturals in the domain, as Python ints."""
        out = set()
        for x in self.domain:
            n = ordinal_value(x)
            if n is not None:
                out.add(n)
        return frozenset(out)

    def with_predicates(self, predicates: Mapping) -> "FiniteStructure":
        merged = dict(self.predicates)
        merged.update(predicates)
        return FiniteStructure(self.domain, _freeze_preds(merged), self.well_order)

    def __len__(self):
        return len(self.domain)

    def __contains__(self, x):
        return x in self.domain


def _freeze_preds(preds) -> tuple:
    if isinstance(preds, tuple):
        return preds
    return tuple(sorted((name, frozenset(ext)) for name, ext in preds.items()))


def canonical_well_order(domain) -> tuple:
    """The canonical set order, used as the default well-order of a base."""
    return tuple(sorted(domain))
