"""Hereditarily finite sets.

Every :class:`HFSet` is hash-consed: two sets with the same members are the
same Python object, so equality is identity and hashing is O(1).  Members are
stored in the canonical order (by rank, then lexicographically on the
ascending member lists), which makes printing and enumeration reproducible.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator

from .errors import BudgetError, ParseError

DEFAULT_STAGE_BUDGET = 5

_INTERN: dict = {}


class HFSet:
    __slots__ = ("elems", "rank", "_key", "_hash")

    elems: tuple
    rank: int

    def __new__(cls, elems: Iterable["HFSet"] = ()):
        uniq = sorted(set(elems), key=_sort_key)
        t = tuple(uniq)
        found = _INTERN.get(t)
        if found is not None:
            return found
        self = object.__new__(cls)
        self.elems = t
        self.rank = 1 + max((e.rank for e in t), default=-1)
        self._key = (self.rank, tuple(e._key for e in t))
        self._hash = hash((self.rank, tuple(e._hash for e in t)))
        _INTERN[t] = self
        return self

    def __reduce__(self):
        return (HFSet, (self.elems,))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self is other or self._key < other._key

    def __gt__(self, other):
        return other._key < self._key

    def __ge__(self, other):
        return self is other or other._key < self._key

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, x):
        # members are few; linear scan beats building a frozenset per set
        return any(x is e for e in self.elems)

    def __bool__(self):
        return bool(self.elems)

    def issubset(self, other: "HFSet") -> bool:
        return all(e in other for e in self.elems)

    def __repr__(self):
        return format_set(self)

    @property
    def key(self):
        """Canonical sort key; equal keys iff equal sets."""
        return self._key


def _sort_key(x: HFSet):
    return x._key


EMPTY = HFSet(())


def from_sorted(t: tuple) -> HFSet:
    """Set from a tuple already in canonical order without duplicates (for
    example a filtered member tuple); skips the sort."""
    found = _INTERN.get(t)
    return found if found is not None else HFSet(t)


@functools.lru_cache(maxsize=1 << 20)
def difference(x: HFSet, y: HFSet) -> HFSet:
    ys = set(y.elems)
    return from_sorted(tuple(z for z in x.elems if z not in ys))


@functools.lru_cache(maxsize=1 << 20)
def intersection(x: HFSet, y: HFSet) -> HFSet:
    ys = set(y.elems)
    return from_sorted(tuple(z for z in x.elems if z in ys))


def make_set(elems: Iterable[HFSet] = ()) -> HFSet:
    """Canonical set with the given members (duplicates dropped)."""
    return HFSet(elems)


def singleton(x: HFSet) -> HFSet:
    return HFSet((x,))


def pair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski ordered pair {{a}, {a, b}}."""
    return HFSet((HFSet((a,)), HFSet((a, b))))


def unpair(p: HFSet):
    """Inverse of :func:`pair`; returns None when ``p`` is not a pair."""
    n = len(p)
    if n == 1:
        (only,) = p.elems
        if len(only) != 1:
            return None
        (a,) = only.elems
        return a, a
    if n != 2:
        return None
    small, big = p.elems
    if len(small) != 1 or len(big) != 2:
        small, big = big, small
        if len(small) != 1 or len(big) != 2:
            return None
    (a,) = small.elems
    if a not in big:
        return None
    b = big.elems[0] if big.elems[1] is a else big.elems[1]
    return a, b


@functools.lru_cache(maxsize=1 << 16)
def union(x: HFSet) -> HFSet:
    return HFSet(itertools.chain.from_iterable(e.elems for e in x.elems))


def union2(a: HFSet, b: HFSet) -> HFSet:
    return HFSet(a.elems + b.elems)


def powerset(x: HFSet) -> HFSet:
    return HFSet(subsets(x))


def subsets(x: HFSet) -> Iterator[HFSet]:
    members = x.elems
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            yield HFSet(combo)


_ORDINALS = [EMPTY]


def ordinal(n: int) -> HFSet:
    """The von Neumann natural ``n``."""
    if n < 0:
        raise ValueError("ordinal index must be non-negative")
    while len(_ORDINALS) <= n:
        _ORDINALS.append(HFSet(_ORDINALS))
    return _ORDINALS[n]


def successor(x: HFSet) -> HFSet:
    return HFSet(x.elems + (x,))


_STAGES = [EMPTY]


def stage(n: int, budget: int = DEFAULT_STAGE_BUDGET) -> HFSet:
    """The cumulative stage V_n."""
    if n < 0:
        raise ValueError("stage index must be non-negative")
    if n > budget:
        raise BudgetError("stage", budget, n)
    while len(_STAGES) <= n:
        _STAGES.append(powerset(_STAGES[-1]))
    return _STAGES[n]


def rank(x: HFSet) -> int:
    return x.rank


def transitive_closure(x: HFSet) -> HFSet:
    """The least transitive set containing ``x`` as a subset."""
    seen = set()
    stack = list(x.elems)
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        stack.extend(y.elems)
    return HFSet(seen)


def is_transitive(x: HFSet) -> bool:
    return all(y.issubset(x) for y in x.elems)


def is_ordinal(x: HFSet) -> bool:
    # well-foundedness is built in, so transitive sets of transitive sets suffice
    return is_transitive(x) and all(is_transitive(y) for y in x.elems)


def ordinal_value(x: HFSet):
    """The natural number ``x`` denotes, or None."""
    if not is_ordinal(x):
        return None
    return len(x)


# --- Ackermann coding (independent oracle for small ranks) -------------------

def ackermann(x: HFSet) -> int:
    return sum(1 << ackermann(e) for e in x.elems)


def from_ackermann(n: int) -> HFSet:
    if n < 0:
        raise ValueError("negative code")
    members = []
    i = 0
    while n:
        if n & 1:
            members.append(from_ackermann(i))
        n >>= 1
        i += 1
    return HFSet(members)


# --- text notation --------------------------------------------------------------

def format_set(x: HFSet) -> str:
    if not x.elems:
        return "{}"
    return "{" + " ".join(format_set(e) for e in x.elems) + "}"


def parse_set(text: str) -> HFSet:
    """Parse brace notation such as ``{{} {{}}}``.  Duplicates are merged."""
    value, pos = _parse_at(text, _skip_ws(text, 0))
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ParseError(f"unexpected trailing input at column {pos + 1}")
    return value


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_at(text, pos):
    if pos >= len(text) or text[pos] != "{":
        raise ParseError(f"expected '{{' at column {pos + 1}")
    pos += 1
    members = []
    while True:
        pos = _skip_ws(text, pos)
        if pos >= len(text):
            raise ParseError("unterminated set literal")
        if text[pos] == "}":
            return HFSet(members), pos + 1
        if text[pos] == ",":
            pos += 1
            continue
        member, pos = _parse_at(text, pos)
        members.append(member)


def scan_set(text: str, pos: int):
    """Parse a set literal starting at ``pos``; returns (set, new_pos)."""
    return _parse_at(text, pos)
