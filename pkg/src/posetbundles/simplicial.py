"""The symmetric simplicial set of a poset, its nerve, paths and pi_1.

An n-simplex is a monotone map from the nonempty subsets of {0..n},
ordered by inclusion, into the poset.  Subsets are encoded as bitmasks
``1 .. 2**(n+1) - 1`` and a simplex stores one value per mask, so the
value at the full mask is the support and the value at ``1 << i`` is the
i-th vertex.  For a 1-simplex ``(o; a, b)`` the 0-face is the vertex 1
value ``a`` and the 1-face is the vertex 0 value ``b``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    DegreeOutOfRange,
    EndpointMismatch,
    IndexOutOfRange,
    NotConnected,
    PatternMismatch,
    UnknownEdge,
    UnknownElement,
)
from .poset import Poset, is_connected

MAX_DEGREE = 3


def _masks(n):
    return range(1, 1 << (n + 1))


@lru_cache(maxsize=None)
def _fill_order(n):
    # masks by increasing size, so every proper subset is filled first
    return tuple(sorted(_masks(n), key=lambda m: (bin(m).count("1"), m)))


@lru_cache(maxsize=None)
def _key_order(n):
    # support first, then larger subsets; for n=1 this gives (support, face0, face1)
    return tuple(sorted(_masks(n), key=lambda m: (-bin(m).count("1"), -m)))


@lru_cache(maxsize=None)
def _face_map(n, i):
    """For the i-th face of an n-simplex: old value index for each new mask."""
    out = []
    for m in _masks(n - 1):
        old = 0
        for j in range(n):
            if m >> j & 1:
                old |= 1 << (j if j < i else j + 1)
        out.append(old - 1)
    return tuple(out)


@dataclass(frozen=True, order=False)
class Simplex:
    degree: int
    values: tuple

    @property
    def support(self) -> str:
        return self.values[-1]

    def vertex(self, i: int) -> str:
        return self.values[(1 << i) - 1]

    def value(self, subset) -> str:
        m = 0
        for j in subset:
            m |= 1 << j
        return self.values[m - 1]

    @property
    def face0(self) -> str:
        return self.vertex(1) if self.degree == 1 else face(self, 0)

    @property
    def face1(self) -> str:
        return self.vertex(0) if self.degree == 1 else face(self, 1)

    def sort_key(self):
        return tuple(self.values[m - 1] for m in _key_order(self.degree))

    def __lt__(self, other):
        return (self.degree, self.sort_key()) < (other.degree, other.sort_key())

    def __str__(self):
        if self.degree == 0:
            return self.values[0]
        if self.degree == 1:
            return f"({self.support}; {self.vertex(1)}, {self.vertex(0)})"
        # values grouped by subset size: vertices | edges | ... | support
        layers = []
        for k in range(1, self.degree + 2):
            ms = [m for m in _masks(self.degree) if bin(m).count("1") == k]
            layers.append(",".join(self.values[m - 1] for m in ms))
        return "<" + " | ".join(layers) + ">"

    __repr__ = __str__


def point(a: str) -> Simplex:
    return Simplex(0, (a,))


def edge(support: str, face0: str, face1: str) -> Simplex:
    """The 1-simplex ``(support; face0, face1)`` (no order check)."""
    return Simplex(1, (face1, face0, support))


def make_edge(p: Poset, support: str, face0: str, face1: str) -> Simplex:
    for a in (support, face0, face1):
        p.check(a)
    if not (p.leq(face0, support) and p.leq(face1, support)):
        raise PatternMismatch(f"faces of ({support}; {face0}, {face1}) must lie below the support")
    return edge(support, face0, face1)


def is_monotone(p: Poset, x: Simplex) -> bool:
    n = x.degree
    for m in _masks(n):
        for j in range(n + 1):
            if m >> j & 1 and m != 1 << j:
                if not p.leq(x.values[(m & ~(1 << j)) - 1], x.values[m - 1]):
                    return False
    return True


def simplices(p: Poset, n: int) -> list[Simplex]:
    """All n-simplices, i.e. monotone maps from the subset poset, in canonical order."""
    if not 0 <= n <= MAX_DEGREE:
        raise DegreeOutOfRange(f"degree {n} not in 0..{MAX_DEGREE}")
    key = ("simplices", n)
    if key in p._cache:
        return p._cache[key]
    order = _fill_order(n)
    size = (1 << (n + 1)) - 1
    vals = [None] * size
    out = []

    def rec(k):
        if k == len(order):
            out.append(Simplex(n, tuple(vals)))
            return
        m = order[k]
        subs = [vals[(m & ~(1 << j)) - 1] for j in range(n + 1) if m >> j & 1 and m != 1 << j]
        if subs:
            cands = set(p.above(subs[0]))
            for s in subs[1:]:
                cands &= p.above(s)
        else:
            cands = p.elements
        for c in sorted(cands):
            vals[m - 1] = c
            rec(k + 1)
        vals[m - 1] = None

    rec(0)
    out.sort(key=Simplex.sort_key)
    p._cache[key] = out
    return out


def iter_simplices(p: Poset, n: int):
    return iter(simplices(p, n))


def face(x: Simplex, i: int) -> Simplex:
    if x.degree < 1:
        raise IndexOutOfRange("0-simplices have no faces")
    if not 0 <= i <= x.degree:
        raise IndexOutOfRange(f"face index {i} not in 0..{x.degree}")
    return Simplex(x.degree - 1, tuple(x.values[j] for j in _face_map(x.degree, i)))


def faces(x: Simplex, *indices: int) -> Simplex:
    """Iterated face: ``faces(x, i, j)`` is ``face(face(x, j), i)``, i.e. d_i d_j."""
    for i in reversed(indices):
        x = face(x, i)
    return x


def degenerate(p: Poset, a: str) -> Simplex:
    p.check(a)
    return edge(a, a, a)


def reverse(b: Simplex) -> Simplex:
    if b.degree != 1:
        raise DegreeOutOfRange("reverse is defined on 1-simplices")
    return edge(b.support, b.face1, b.face0)


# nerve -----------------------------------------------------------------------

@dataclass(frozen=True)
class NerveSimplex:
    """A chain ``v0 <= v1 <= ... <= vn``; for n=1 written ``(v1,v0)``."""

    chain: tuple

    @property
    def degree(self):
        return len(self.chain) - 1

    def __str__(self):
        return "(" + ",".join(reversed(self.chain)) + ")"

    __repr__ = __str__


def nerve_pair(a: str, lower: str) -> NerveSimplex:
    """The nerve 1-simplex ``(a, lower)`` with 0-face ``a`` and 1-face ``lower``."""
    return NerveSimplex((lower, a))


def nerve_simplices(p: Poset, n: int) -> list[NerveSimplex]:
    if not 0 <= n <= MAX_DEGREE:
        raise DegreeOutOfRange(f"nerve degree {n} not in 0..{MAX_DEGREE}")
    out = []

    def rec(chain):
        if len(chain) == n + 1:
            out.append(NerveSimplex(tuple(chain)))
            return
        for c in sorted(p.above(chain[-1])):
            rec(chain + [c])

    for a in p.elements:
        rec([a])
    out.sort(key=lambda s: tuple(reversed(s.chain)))
    return out


def nerve_inclusion(x: NerveSimplex) -> Simplex:
    n = x.degree
    return Simplex(n, tuple(x.chain[m.bit_length() - 1] for m in _masks(n)))


def is_nerve(p: Poset, x: Simplex) -> bool:
    """Whether ``x`` lies in the image of the nerve inclusion."""
    n = x.degree
    verts = [x.vertex(i) for i in range(n + 1)]
    if any(not p.leq(verts[i], verts[i + 1]) for i in range(n)):
        return False
    return all(x.values[m - 1] == verts[m.bit_length() - 1] for m in _masks(n))


# paths -----------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """A path ``b_n * ... * b_1`` stored in traversal order ``(b_1, ..., b_n)``."""

    edges: tuple

    def __post_init__(self):
        if not self.edges:
            raise EndpointMismatch("paths are nonempty")
        for b in self.edges:
            if b.degree != 1:
                raise DegreeOutOfRange("paths are made of 1-simplices")
        for b, c in zip(self.edges, self.edges[1:]):
            if b.face0 != c.face1:
                raise EndpointMismatch(f"{c} does not start where {b} ends")

    @property
    def source(self) -> str:
        return self.edges[0].face1

    @property
    def target(self) -> str:
        return self.edges[-1].face0

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return " * ".join(str(b) for b in reversed(self.edges))


def path(*edges: Simplex) -> Path:
    """Build a path from 1-simplices given in traversal order."""
    return Path(tuple(edges))


def trivial_path(p: Poset, a: str) -> Path:
    return Path((degenerate(p, a),))


def reverse_path(q: Path) -> Path:
    return Path(tuple(reverse(b) for b in reversed(q.edges)))


def compose_paths(p: Path, q: Path) -> Path:
    """``p * q``: traverse ``q`` first, then ``p``."""
    if q.target != p.source:
        raise EndpointMismatch(f"cannot compose: {q} ends at {q.target}, {p} starts at {p.source}")
    return Path(q.edges + p.edges)


EXPAND = "expand"
CONTRACT = "contract"


def homotopy_step(q: Path, i: int, c: Simplex, direction: str) -> Path:
    """One elementary homotopy at position ``i`` (traversal order) using 2-simplex ``c``.

    ``expand`` replaces the edge d1(c) by d0(c) * d2(c); ``contract`` does the
    converse.
    """
    if c.degree != 2:
        raise DegreeOutOfRange("elementary homotopies use 2-simplices")
    d0, d1, d2 = face(c, 0), face(c, 1), face(c, 2)
    e = q.edges
    if direction == EXPAND:
        if not 0 <= i < len(e) or e[i] != d1:
            raise PatternMismatch(f"edge at {i} is not {d1}")
        return Path(e[:i] + (d2, d0) + e[i + 1:])
    if direction == CONTRACT:
        if not 0 <= i < len(e) - 1 or e[i] != d2 or e[i + 1] != d0:
            raise PatternMismatch(f"edges at {i},{i + 1} are not {d2}, {d0}")
        return Path(e[:i] + (d1,) + e[i + 2:])
    raise ValueError(f"unknown direction {direction!r}")


class HomotopyMoves:
    """Index of 2-simplices by the patterns they rewrite, for random walks."""

    def __init__(self, p: Poset):
        self.by_d1 = {}
        self.by_pair = {}
        for c in simplices(p, 2):
            d0, d1, d2 = face(c, 0), face(c, 1), face(c, 2)
            self.by_d1.setdefault(d1, []).append(c)
            self.by_pair.setdefault((d2, d0), []).append(c)

    def moves(self, q: Path):
        """All applicable (i, c, direction) triples, in a deterministic order."""
        out = []
        for i, b in enumerate(q.edges):
            out += [(i, c, EXPAND) for c in self.by_d1.get(b, ())]
        for i in range(len(q.edges) - 1):
            out += [(i, c, CONTRACT) for c in self.by_pair.get((q.edges[i], q.edges[i + 1]), ())]
        return out

    def random_walk(self, q: Path, steps: int, rng, max_len: int = 12) -> Path:
        for _ in range(steps):
            moves = self.moves(q)
            if len(q) >= max_len:
                moves = [m for m in moves if m[2] == CONTRACT] or moves
            i, c, d = moves[rng.randrange(len(moves))]
            q = homotopy_step(q, i, c, d)
        return q


# pi_1 presentation -------------------------------------------------------------

def free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word):
    return tuple((g, -e) for g, e in reversed(word))


def format_word(word) -> str:
    if not word:
        return "1"
    return " ".join(f"g{g}" if e > 0 else f"g{g}^-1" for g, e in word)


def skeleton_edges(p: Poset) -> list[tuple[str, str, str]]:
    """Undirected 1-skeleton: keys ``(support, lo, hi)`` with ``lo < hi`` below ``support``."""
    out = []
    for o in p.elements:
        below = sorted(p.below(o))
        for lo, hi in itertools.combinations(below, 2):
            out.append((o, lo, hi))
    return out


def _oriented(key, start):
    o, lo, hi = key
    return edge(o, hi, lo) if start == lo else edge(o, lo, hi)


@dataclass
class Presentation:
    poset: Poset
    basepoint: str
    tree_paths: dict  # element -> Path from the basepoint
    tree_keys: frozenset
    generators: list  # canonical oriented 1-simplices
    relators: list  # one word per 2-simplex, freely reduced
    _gen_index: dict = field(repr=False, default_factory=dict)

    def generator_index(self, key) -> int | None:
        return self._gen_index.get(key)

    def word(self, b: Simplex):
        """Generator word of a 1-simplex; tree, degenerate and equal-face edges give ()."""
        if b.degree != 1:
            raise DegreeOutOfRange("words are defined for 1-simplices")
        a0, a1 = b.face0, b.face1
        if a0 == a1:
            return ()
        lo, hi = min(a0, a1), max(a0, a1)
        key = (b.support, lo, hi)
        if key in self.tree_keys:
            return ()
        k = self._gen_index.get(key)
        if k is None:
            raise UnknownEdge(f"{b} is not an edge of the 1-skeleton")
        return ((k, 1),) if a1 == lo else ((k, -1),)

    loop_word = word

    def path_word(self, q: Path):
        w = ()
        for b in reversed(q.edges):
            w = w + self.word(b)
        return free_reduce(w)

    def distinct_relators(self):
        seen = []
        for r in self.relators:
            if r and r not in seen:
                seen.append(r)
        return seen


def pi1_presentation(p: Poset, basepoint: str) -> Presentation:
    """Presentation of pi_1(K, basepoint) from a spanning tree of the 1-skeleton."""
    p.check(basepoint)
    if len(p) == 0 or not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not pathwise connected")
    key = ("pi1", basepoint)
    if key in p._cache:
        return p._cache[key]
    keys = skeleton_edges(p)
    adj = {a: [] for a in p.elements}
    for k in keys:
        o, lo, hi = k
        nerve = o in (lo, hi)
        adj[lo].append((not nerve, hi, o, k))
        adj[hi].append((not nerve, lo, o, k))
    for a in adj:
        adj[a].sort()
    tree_paths = {basepoint: trivial_path(p, basepoint)}
    tree_keys = set()
    queue = deque([basepoint])
    while queue:
        x = queue.popleft()
        for _, y, _, k in adj[x]:
            if y in tree_paths:
                continue
            tree_keys.add(k)
            step = _oriented(k, x)
            prev = tree_paths[x]
            edges = (step,) if x == basepoint else prev.edges + (step,)
            tree_paths[y] = Path(edges)
            queue.append(y)
    gen_keys = [k for k in keys if k not in tree_keys]
    gen_index = {k: i for i, k in enumerate(gen_keys)}
    generators = [edge(o, hi, lo) for (o, lo, hi) in gen_keys]
    pres = Presentation(p, basepoint, tree_paths, frozenset(tree_keys), generators, [], gen_index)
    for c in simplices(p, 2):
        w = pres.word(face(c, 0)) + pres.word(face(c, 2)) + invert_word(pres.word(face(c, 1)))
        pres.relators.append(free_reduce(w))
    p._cache[key] = pres
    return pres


def tree_path(pres: Presentation, x: str) -> Path:
    try:
        return pres.tree_paths[x]
    except KeyError:
        raise UnknownElement(f"{x!r} not in poset") from None


def loop_of_edge(pres: Presentation, b: Simplex) -> Path:
    """The loop tree(d0 b)^-1 * b * tree(d1 b) at the basepoint."""
    if b.degree != 1:
        raise UnknownEdge("loops are built from 1-simplices")
    p = pres.poset
    if b.support not in p or not is_monotone(p, b):
        raise UnknownEdge(f"{b} is not a 1-simplex of {p.name}")
    out = tree_path(pres, b.face1).edges + (b,) + reverse_path(tree_path(pres, b.face0)).edges
    return Path(out)
