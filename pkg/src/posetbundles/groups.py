"""Finite coefficient groups.

A :class:`Group` is a finite set of hashable element values together with
a precomputed Cayley table.  Element values are plain Python data: an
``int`` residue for cyclic groups, a 0-based image tuple for symmetric
groups and a tuple of component values for direct products.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, NotContained, ParseError, SpecMismatch

MAX_ORDER = 10_000


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __str__(self):
        return f"Z{self.n}"


@dataclass(frozen=True)
class Symmetric:
    n: int

    def __str__(self):
        return f"S{self.n}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "prod(" + ",".join(str(f) for f in self.factors) + ")"


GroupSpec = Cyclic | Symmetric | Product


class Group:
    """A finite group given by its elements and multiplication."""

    def __init__(self, name: str, elements: Sequence[Hashable], mul: Callable, spec=None, max_order=MAX_ORDER):
        if len(elements) > max_order:
            raise BudgetExceeded(f"group {name} has order {len(elements)} > {max_order}")
        self.name = name
        self.spec = spec
        self.elements = tuple(elements)
        self._index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        self._table = [[self._index[mul(g, h)] for h in self.elements] for g in self.elements]
        ident = [i for i in range(n) if all(self._table[i][j] == j for j in range(n))]
        self._e = ident[0]
        self._inv = [row.index(self._e) for row in self._table]

    def __repr__(self):
        return f"Group({self.name})"

    def __str__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Group) and self.name == other.name and self.elements == other.elements

    def __hash__(self):
        return hash((self.name, self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[self._e]

    e = identity

    def index(self, g) -> int:
        try:
            return self._index[g]
        except (KeyError, TypeError):
            raise SpecMismatch(f"{g!r} is not an element of {self.name}") from None

    def mul(self, g, h):
        return self.elements[self._table[self.index(g)][self.index(h)]]

    def prod(self, items: Iterable) -> Hashable:
        """Left-to-right product ``g1 g2 ... gn``."""
        acc = self._e
        for g in items:
            acc = self._table[acc][self.index(g)]
        return self.elements[acc]

    def inv(self, g):
        return self.elements[self._inv[self.index(g)]]

    def conj(self, g, h):
        """``ad(g)(h) = g h g^-1``."""
        return self.prod((g, h, self.inv(g)))

    def is_abelian(self) -> bool:
        t = self._table
        n = len(t)
        return all(t[i][j] == t[j][i] for i in range(n) for j in range(i + 1, n))

    # literals -----------------------------------------------------------

    def format(self, g) -> str:
        return format_element(self.spec, g) if self.spec is not None else repr(g)

    def parse(self, text: str):
        if self.spec is None:
            raise ParseError(f"group {self.name} has no literal syntax")
        g = parse_element(self.spec, text)
        if g not in self:
            raise ParseError(f"{text!r} is not an element of {self.name}")
        return g


# constructors ------------------------------------------------------------

def cyclic(n: int) -> Group:
    if n < 1:
        raise SpecMismatch("cyclic group order must be >= 1")
    return Group(f"Z{n}", list(range(n)), lambda a, b: (a + b) % n, spec=Cyclic(n))


def _perm_mul(s, t):
    # (s t)(i) = s(t(i)): apply t first
    return tuple(s[t[i]] for i in range(len(t)))


def symmetric(n: int) -> Group:
    if n < 1:
        raise SpecMismatch("symmetric group degree must be >= 1")
    if _factorial(n) > MAX_ORDER:
        raise BudgetExceeded(f"S{n} has order {_factorial(n)} > {MAX_ORDER}")
    return Group(f"S{n}", list(itertools.permutations(range(n))), _perm_mul, spec=Symmetric(n))


def product(*groups: Group) -> Group:
    size = 1
    for g in groups:
        size *= g.order
    if size > MAX_ORDER:
        raise BudgetExceeded(f"product group has order {size} > {MAX_ORDER}")
    specs = tuple(g.spec for g in groups)
    spec = Product(specs) if all(s is not None for s in specs) else None
    name = "prod(" + ",".join(g.name for g in groups) + ")"
    return Group(
        name,
        list(itertools.product(*(g.elements for g in groups))),
        lambda a, b: tuple(G.mul(x, y) for G, x, y in zip(groups, a, b)),
        spec=spec,
    )


def trivial_group() -> Group:
    return cyclic(1)


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def group_from_spec(spec: GroupSpec) -> Group:
    if isinstance(spec, Cyclic):
        return cyclic(spec.n)
    if isinstance(spec, Symmetric):
        return symmetric(spec.n)
    if isinstance(spec, Product):
        return product(*(group_from_spec(f) for f in spec.factors))
    raise SpecMismatch(f"unknown group spec {spec!r}")


def parse_spec(text: str) -> GroupSpec:
    """Parse ``Z<n>``, ``S<n>`` or ``prod(<spec>,...)``."""
    text = text.strip()
    m = re.fullmatch(r"([ZS])(\d+)", text)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise ParseError(f"bad group order in {text!r}")
        return Cyclic(n) if m.group(1) == "Z" else Symmetric(n)
    if text.startswith("prod(") and text.endswith(")"):
        parts = _split_top(text[5:-1])
        if not parts:
            raise ParseError("prod() needs at least one factor")
        return Product(tuple(parse_spec(p) for p in parts))
    raise ParseError(f"cannot parse group spec {text!r}")


def parse_group(text: str) -> Group:
    return group_from_spec(parse_spec(text))


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return parts


def format_element(spec: GroupSpec, g) -> str:
    if isinstance(spec, Cyclic):
        return str(g)
    if isinstance(spec, Symmetric):
        return "perm(" + " ".join(str(i + 1) for i in g) + ")"
    if isinstance(spec, Product):
        return "(" + ",".join(format_element(s, x) for s, x in zip(spec.factors, g)) + ")"
    raise SpecMismatch(f"unknown group spec {spec!r}")


def parse_element(spec: GroupSpec, text: str):
    """Parse an element literal; permutation literals are 1-based image lists."""
    text = text.strip()
    if isinstance(spec, Cyclic):
        try:
            v = int(text)
        except ValueError:
            raise ParseError(f"expected an integer, got {text!r}") from None
        if not 0 <= v < spec.n:
            raise ParseError(f"residue {v} out of range for Z{spec.n}")
        return v
    if isinstance(spec, Symmetric):
        m = re.fullmatch(r"perm\(([\d\s]*)\)", text)
        if not m:
            raise ParseError(f"expected perm(<i> <j> ...), got {text!r}")
        images = tuple(int(w) - 1 for w in m.group(1).split())
        if sorted(images) != list(range(spec.n)):
            raise ParseError(f"{text!r} is not a permutation of 1..{spec.n}")
        return images
    if isinstance(spec, Product):
        if not (text.startswith("(") and text.endswith(")")):
            raise ParseError(f"expected a tuple literal, got {text!r}")
        parts = _split_top(text[1:-1])
        if len(parts) != len(spec.factors):
            raise ParseError(f"expected {len(spec.factors)} components in {text!r}")
        return tuple(parse_element(s, p) for s, p in zip(spec.factors, parts))
    raise SpecMismatch(f"unknown group spec {spec!r}")


def perm_from_cycles(n: int, *cycles) -> tuple:
    """Build a 0-based image tuple from 1-based cycles, e.g. ``(1, 2)``."""
    img = list(range(n))
    for cyc in cycles:
        for i, a in enumerate(cyc):
            img[a - 1] = cyc[(i + 1) % len(cyc)] - 1
    return tuple(img)


# subgroups ---------------------------------------------------------------

class Subgroup:
    def __init__(self, group: Group, elements: Iterable):
        self.group = group
        self.elements = frozenset(elements)

    def __repr__(self):
        return f"Subgroup({self.group.name}, {self.sorted()!r})"

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group == other.group and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    @property
    def order(self):
        return len(self.elements)

    def sorted(self) -> list:
        return sorted(self.elements, key=self.group.index)

    def is_subgroup(self) -> bool:
        G = self.group
        return G.e in self.elements and all(
            G.mul(g, G.inv(h)) in self.elements for g in self.elements for h in self.elements
        )

    def is_normal_in(self, other: "Subgroup") -> bool:
        G = self.group
        return self.elements <= other.elements and all(
            G.conj(g, h) in self.elements for g in other.elements for h in self.elements
        )

    def conjugate(self, g) -> "Subgroup":
        return Subgroup(self.group, (self.group.conj(g, h) for h in self.elements))

    def is_conjugate_to(self, other: "Subgroup"):
        """Some g with g H g^-1 = other, or None."""
        for g in self.group.elements:
            if self.conjugate(g).elements == other.elements:
                return g
        return None

    def as_group(self) -> Group:
        """The subgroup as a group in its own right (ambient multiplication)."""
        G = self.group
        elems = self.sorted()
        name = G.name + "{" + ",".join(G.format(g) for g in elems) + "}"
        H = Group(name, elems, G.mul)
        H.spec = G.spec
        return H


def subgroup_generated(G: Group, gens: Iterable) -> Subgroup:
    """Closure of ``gens`` under multiplication, by breadth-first products."""
    gens = [g for g in gens]
    for g in gens:
        G.index(g)
    found = {G.e}
    frontier = [G.e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, found)


def normal_closure(G: Group, gens: Iterable, ambient: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup of ``ambient`` containing ``gens`` and normal in it."""
    if ambient is None:
        ambient = Subgroup(G, G.elements)
    gens = list(gens)
    for g in gens:
        if g not in ambient:
            raise NotContained(f"{G.format(g)} is not in the ambient subgroup")
    conjugates = {G.conj(a, g) for a in ambient.elements for g in gens}
    return subgroup_generated(G, sorted(conjugates, key=G.index))


def is_homomorphism(H: Group, G: Group, gamma: Mapping) -> bool:
    return all(G.mul(gamma[a], gamma[b]) == gamma[H.mul(a, b)] for a in H for b in H)


# presentations and homomorphisms -------------------------------------------

def evaluate_word(G: Group, word, assignment) -> Hashable:
    """Evaluate a word ``((gen, +-1), ...)`` left to right."""
    acc = G.e
    for gen, exp in word:
        g = assignment[gen]
        acc = G.mul(acc, g if exp > 0 else G.inv(g))
    return acc


def enumerate_homomorphisms(pres, G: Group, budget: int = 10**7) -> list[dict]:
    """All assignments of the presentation's generators satisfying every relator.

    Backtracking over generators in order; a relator is checked as soon as
    all its generators are assigned.  Output order is lexicographic in the
    group's element order.
    """
    ngen = len(pres.generators)
    if G.order ** ngen > budget:
        # backtracking usually prunes far below this, but keep the contract explicit
        raise BudgetExceeded(f"|G|^#gens = {G.order}^{ngen} exceeds budget {budget}")
    relators = [r for r in pres.relators if r]
    by_last: dict[int, list] = {}
    for r in relators:
        last = max(gen for gen, _ in r)
        by_last.setdefault(last, []).append(r)
    out = []
    assignment: dict = {}

    def rec(i):
        if i == ngen:
            out.append(dict(assignment))
            return
        for g in G.elements:
            assignment[i] = g
            if all(evaluate_word(G, r, assignment) == G.e for r in by_last.get(i, ())):
                rec(i + 1)
        assignment.pop(i, None)

    rec(0)
    return out


def homs_conjugate(h1: Mapping, h2: Mapping, G: Group):
    """Some g with g h1(x) g^-1 = h2(x) for every generator x, else None."""
    if set(h1) != set(h2):
        raise SpecMismatch("homomorphisms are defined on different generator sets")
    for g in G.elements:
        if all(G.conj(g, h1[k]) == h2[k] for k in h1):
            return g
    return None


def hom_classes(homs: Sequence[Mapping], G: Group) -> list[list[dict]]:
    """Partition homomorphisms into conjugacy classes, keeping first-seen order."""
    classes: list[list[dict]] = []
    for h in homs:
        for cls in classes:
            if homs_conjugate(cls[0], h, G) is not None:
                cls.append(h)
                break
        else:
            classes.append([h])
    return classes
