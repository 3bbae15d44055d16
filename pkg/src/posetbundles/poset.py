"""Finite posets, their Alexandrov-style topology and locally constant maps.

Elements are string ids.  Every enumeration iterates in lexicographic
order of the ids so that results are reproducible run to run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .errors import CycleDetected, DuplicateElement, ParseError, UnknownElement


class Poset:
    """Immutable finite partial order.

    The order is stored densely: for every element the set of elements
    below it and the set of elements above it.
    """

    def __init__(self, elements: Iterable[str], leq_pairs: Iterable[tuple[str, str]], name: str = "K"):
        self.name = name
        self.elements: tuple[str, ...] = tuple(sorted(elements))
        below = {a: {a} for a in self.elements}
        for lo, hi in leq_pairs:
            below[hi].add(lo)
        self._below = {a: frozenset(s) for a, s in below.items()}
        above = {a: set() for a in self.elements}
        for hi, s in self._below.items():
            for lo in s:
                above[lo].add(hi)
        self._above = {a: frozenset(s) for a, s in above.items()}
        self._index = {a: i for i, a in enumerate(self.elements)}
        # write-once memo for derived enumerations (simplices, presentations)
        self._cache = {}

    # construction -------------------------------------------------------

    @classmethod
    def from_covers(cls, elements, covers, name="K"):
        return build_poset(elements, covers, name=name)

    # basic queries ------------------------------------------------------

    def __contains__(self, a) -> bool:
        return a in self._below

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._below == other._below

    def __hash__(self):
        return hash((self.elements, frozenset(self.relation())))

    def __repr__(self):
        return f"Poset({self.name!r}, {list(self.elements)}, covers={self.covers()})"

    def check(self, a: str) -> str:
        if a not in self._below:
            raise UnknownElement(f"{a!r} is not an element of poset {self.name!r}")
        return a

    def index(self, a: str) -> int:
        return self._index[self.check(a)]

    def leq(self, a: str, b: str) -> bool:
        return a in self._below[b]

    def lt(self, a: str, b: str) -> bool:
        return a != b and a in self._below[b]

    def comparable(self, a: str, b: str) -> bool:
        return a in self._below[b] or b in self._below[a]

    def below(self, a: str) -> frozenset:
        return self._below[self.check(a)]

    def above(self, a: str) -> frozenset:
        return self._above[self.check(a)]

    def relation(self) -> list[tuple[str, str]]:
        """All pairs (a, b) with a <= b, in canonical order."""
        return [(a, b) for b in self.elements for a in sorted(self._below[b])]

    def covers(self) -> list[tuple[str, str]]:
        """The Hasse diagram: pairs (a, b) with a < b and nothing strictly between."""
        out = []
        for b in self.elements:
            for a in sorted(self._below[b]):
                if a == b:
                    continue
                if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                    out.append((a, b))
        return sorted(out)

    def subposet(self, subset: Iterable[str], name: str | None = None) -> "Poset":
        s = {self.check(a) for a in subset}
        pairs = [(a, b) for (a, b) in self.relation() if a in s and b in s]
        return Poset(s, pairs, name=name or self.name)

    def is_down_closed(self, subset: Iterable[str]) -> bool:
        s = set(subset)
        return all(self._below[a] <= s for a in s)


def build_poset(elements, covers, name: str = "K") -> Poset:
    """Build a poset from its elements and a generating (cover) relation.

    The order is the reflexive-transitive closure of ``covers``.  Raises
    :class:`CycleDetected` when the closure is not antisymmetric.
    """
    elements = list(elements)
    seen = set()
    for a in elements:
        if a in seen:
            raise DuplicateElement(f"element {a!r} listed twice")
        seen.add(a)
    succ = {a: set() for a in elements}
    for lo, hi in covers:
        for x in (lo, hi):
            if x not in seen:
                raise UnknownElement(f"cover relation mentions unknown element {x!r}")
        succ[lo].add(hi)
    # reachability by BFS from each element; fixtures are small
    up = {}
    for a in elements:
        reach = {a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y in succ[x]:
                if y not in reach:
                    reach.add(y)
                    queue.append(y)
        up[a] = reach
    for a in elements:
        for b in up[a]:
            if b != a and a in up[b]:
                raise CycleDetected(f"{a!r} <= {b!r} and {b!r} <= {a!r}")
    pairs = [(a, b) for a in elements for b in up[a]]
    return Poset(elements, pairs, name=name)


def dual(p: Poset, name: str | None = None) -> Poset:
    """The opposite poset: same carrier, reversed order."""
    if name is None:
        name = p.name[:-4] if p.name.endswith("_dual") else p.name + "_dual"
    return Poset(p.elements, [(b, a) for (a, b) in p.relation()], name=name)


@dataclass(frozen=True)
class DownSet:
    anchor: str
    members: frozenset

    def __contains__(self, a):
        return a in self.members

    def sorted(self) -> list[str]:
        return sorted(self.members)


def down_set(p: Poset, a: str) -> DownSet:
    """The basic open neighbourhood ``V_a = {a' : a' <= a}``."""
    return DownSet(a, p.below(a))


def up_set(p: Poset, a: str) -> frozenset:
    """The star ``{o : a <= o}``; chart domains of local trivializations."""
    return p.above(a)


def fundamental_covering(p: Poset) -> list[DownSet]:
    return [down_set(p, a) for a in p.elements]


def is_upward_directed(p: Poset) -> bool:
    return all(
        any(p.leq(a, c) and p.leq(b, c) for c in p.elements)
        for a in p.elements
        for b in p.elements
    )


def is_downward_directed(p: Poset) -> bool:
    return all(
        any(p.leq(c, a) and p.leq(c, b) for c in p.elements)
        for a in p.elements
        for b in p.elements
    )


def connected_components(p: Poset, subset: Iterable[str] | None = None) -> list[list[str]]:
    """Components of the comparability graph, restricted to ``subset`` if given.

    Components are sorted internally and ordered by their least element.
    """
    nodes = sorted(p.elements if subset is None else {p.check(a) for a in subset})
    node_set = set(nodes)
    seen = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in (p.below(x) | p.above(x)) & node_set:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(p: Poset, subset: Iterable[str] | None = None) -> bool:
    return len(connected_components(p, subset)) == 1


def is_locally_constant(p: Poset, f: Mapping[str, Hashable], domain: Iterable[str] | None = None) -> bool:
    """True iff ``f(o) == f(o')`` for every comparable pair inside ``domain``."""
    dom = sorted(p.elements if domain is None else {p.check(a) for a in domain})
    for a in dom:
        if a not in f:
            raise UnknownElement(f"function undefined at {a!r}")
    for i, a in enumerate(dom):
        for b in dom[i + 1:]:
            if p.comparable(a, b) and f[a] != f[b]:
                return False
    return True


def minimal_elements(p: Poset) -> list[str]:
    return [a for a in p.elements if p.below(a) == {a}]


def maximal_elements(p: Poset) -> list[str]:
    return [a for a in p.elements if p.above(a) == {a}]


# text format ------------------------------------------------------------

def parse_poset(text: str) -> Poset:
    """Parse the line-oriented poset format.

    ::

        poset circ4
        elements p q A B
        cover p < A
    """
    name = None
    elements = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if name is None:
            if words[0] != "poset" or len(words) != 2:
                raise ParseError("expected 'poset <name>'", lineno)
            name = words[1]
        elif elements is None:
            if words[0] != "elements":
                raise ParseError("expected 'elements <id> ...'", lineno)
            elements = words[1:]
        else:
            if words[0] != "cover" or len(words) != 4 or words[2] != "<":
                raise ParseError("expected 'cover <id> < <id>'", lineno)
            for w in (words[1], words[3]):
                if w not in elements:
                    raise ParseError(f"unknown element {w!r}", lineno)
            covers.append((words[1], words[3]))
    if name is None:
        raise ParseError("empty poset file")
    if elements is None:
        elements = []
    if len(set(elements)) != len(elements):
        raise ParseError("duplicate element in 'elements' line")
    return build_poset(elements, covers, name=name)


def format_poset(p: Poset) -> str:
    lines = [f"poset {p.name}", "elements " + " ".join(p.elements)]
    lines += [f"cover {a} < {b}" for a, b in p.covers()]
    return "\n".join(lines) + "\n"


def load_poset(path) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset(fh.read())
