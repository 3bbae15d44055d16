"""1-cochains, connections, curvature, holonomy and classification.

A 1-cochain assigns a group element to every 1-simplex.  A morphism
``f: vt -> v`` is a 0-cochain with ``f(d0 b) vt(b) = v(b) f(d1 b)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from . import bundles as bd
from .errors import (
    BudgetExceeded,
    Mismatch,
    NotCocycle,
    NotConnected,
    NotConnection,
    PartialCochain,
    SpecMismatch,
    WrongInducedCocycle,
)
from .groups import Group, Subgroup, enumerate_homomorphisms, evaluate_word, hom_classes, normal_closure, subgroup_generated
from .poset import Poset, is_connected
from .simplicial import (
    Path,
    Presentation,
    Simplex,
    edge,
    face,
    faces,
    is_nerve,
    pi1_presentation,
    reverse,
    simplices,
)

ORACLE_LIMIT = 2**24


class Cochain1:
    """A map from the 1-simplices of ``poset`` to ``group``."""

    def __init__(self, poset: Poset, group: Group, values: Mapping[Simplex, object]):
        self.poset = poset
        self.group = group
        self.values = dict(values)

    def __call__(self, b: Simplex):
        try:
            return self.values[b]
        except KeyError:
            raise PartialCochain(f"cochain undefined at {b}") from None

    def __eq__(self, other):
        return (
            isinstance(other, Cochain1)
            and self.poset == other.poset
            and self.group == other.group
            and self.values == other.values
        )

    def __repr__(self):
        return f"Cochain1({self.poset.name}, {self.group.name}, {len(self.values)} values)"

    def items(self):
        return [(b, self.values[b]) for b in simplices(self.poset, 1) if b in self.values]

    def with_values(self, changes: Mapping) -> "Cochain1":
        vals = dict(self.values)
        vals.update(changes)
        return Cochain1(self.poset, self.group, vals)


class Morphism0:
    """A map from the elements of ``poset`` to ``group``."""

    def __init__(self, poset: Poset, group: Group, values: Mapping[str, object]):
        self.poset = poset
        self.group = group
        self.values = dict(values)

    def __call__(self, a: str):
        return self.values[a]

    def __eq__(self, other):
        return isinstance(other, Morphism0) and self.group == other.group and self.values == other.values

    def __repr__(self):
        vals = ", ".join(f"{a}:{self.group.format(self.values[a])}" for a in self.poset.elements)
        return f"Morphism0({vals})"


@dataclass
class Curvature2:
    values: dict  # 2-simplex -> group element
    connection: Cochain1

    def is_flat(self) -> bool:
        e = self.connection.group.e
        return all(g == e for g in self.values.values())

    def nontrivial(self) -> list:
        e = self.connection.group.e
        return [(c, g) for c, g in self.values.items() if g != e]


def constant_cochain(p: Poset, G: Group, g=None) -> Cochain1:
    """The constant cochain; with ``g`` omitted this is the trivial cochain."""
    g = G.e if g is None else g
    return Cochain1(p, G, {b: g for b in simplices(p, 1)})


def trivial_cochain(p: Poset, G: Group) -> Cochain1:
    return constant_cochain(p, G)


def identity_morphism(p: Poset, G: Group) -> Morphism0:
    return Morphism0(p, G, {a: G.e for a in p.elements})


def check_total(v: Cochain1):
    missing = [b for b in simplices(v.poset, 1) if b not in v.values]
    if missing:
        raise PartialCochain(f"cochain undefined at {missing[0]} ({len(missing)} simplices missing)")


# cocycles and connections ----------------------------------------------------------

def cocycle_violations(z: Cochain1, nerve_only: bool = False) -> list:
    """2-simplices where ``z(d0 c) z(d2 c) != z(d1 c)``."""
    check_total(z)
    G = z.group
    vals = z.values
    out = []
    for c in simplices(z.poset, 2):
        if nerve_only and not is_nerve(z.poset, c):
            continue
        if G.mul(vals[face(c, 0)], vals[face(c, 2)]) != vals[face(c, 1)]:
            out.append(c)
    return out


def is_cocycle(z: Cochain1) -> bool:
    return not cocycle_violations(z)


def reverse_violations(u: Cochain1) -> list:
    check_total(u)
    G = u.group
    return [b for b in simplices(u.poset, 1) if u.values[reverse(b)] != G.inv(u.values[b])]


def is_connection_cochain(u: Cochain1) -> bool:
    """Reverse symmetry on all 1-simplices and the cocycle identity on the nerve."""
    return not reverse_violations(u) and not cocycle_violations(u, nerve_only=True)


def _require_connection(u: Cochain1):
    if not is_connection_cochain(u):
        raise NotConnection("cochain is not a connection cochain")


def evaluate_path(v: Cochain1, q: Path):
    """``v(b_n) ... v(b_1)``."""
    G = v.group
    acc = G.e
    for b in q.edges:
        acc = G.mul(v(b), acc)
    return acc


def coboundary0(f: Morphism0) -> Cochain1:
    """``(df)(b) = f(d0 b) f(d1 b)^-1``; ``f`` is a morphism from the trivial cochain to it."""
    G = f.group
    return Cochain1(f.poset, G, {b: G.mul(f(b.face0), G.inv(f(b.face1))) for b in simplices(f.poset, 1)})


def morphism_violations(f: Morphism0, source: Cochain1, target: Cochain1) -> list:
    """1-simplices where ``f(d0 b) source(b) != target(b) f(d1 b)``."""
    G = target.group
    return [
        b
        for b in simplices(target.poset, 1)
        if G.mul(f(b.face0), source(b)) != G.mul(target(b), f(b.face1))
    ]


def is_morphism(f: Morphism0, source: Cochain1, target: Cochain1) -> bool:
    return not morphism_violations(f, source, target)


def gauge_transform(v: Cochain1, f: Morphism0) -> Cochain1:
    """The cochain ``v'`` with ``f: v -> v'``, i.e. ``v'(b) = f(d0 b) v(b) f(d1 b)^-1``."""
    G = v.group
    return Cochain1(
        v.poset, G, {b: G.prod((f(b.face0), g, G.inv(f(b.face1)))) for b, g in v.values.items()}
    )


def compose_morphisms0(f2: Morphism0, f1: Morphism0) -> Morphism0:
    G = f1.group
    return Morphism0(f1.poset, G, {a: G.mul(f2(a), f1(a)) for a in f1.poset.elements})


def induced_cocycle(u: Cochain1) -> Cochain1:
    """The unique cocycle agreeing with ``u`` on the nerve."""
    _require_connection(u)
    G = u.group
    vals = {}
    for b in simplices(u.poset, 1):
        o = b.support
        vals[b] = G.mul(G.inv(u(edge(o, o, b.face0))), u(edge(o, o, b.face1)))
    return Cochain1(u.poset, G, vals)


def curvature(u: Cochain1) -> Curvature2:
    """``w(c) = u(d0 c) u(d2 c) u(d1 c)^-1``."""
    _require_connection(u)
    G = u.group
    vals = {}
    for c in simplices(u.poset, 2):
        vals[c] = G.prod((u(face(c, 0)), u(face(c, 2)), G.inv(u(face(c, 1)))))
    return Curvature2(vals, u)


def bianchi_check(u: Cochain1) -> list:
    """3-simplices violating ``w(d0 d) w(d2 d) = ad(u(d01 d))(w(d3 d)) w(d1 d)``."""
    w = curvature(u).values
    G = u.group
    out = []
    for d in simplices(u.poset, 3):
        lhs = G.mul(w[face(d, 0)], w[face(d, 2)])
        rhs = G.mul(G.conj(u(faces(d, 0, 1)), w[face(d, 3)]), w[face(d, 1)])
        if lhs != rhs:
            out.append(d)
    return out


def pushforward(gamma, v, target: Group):
    """Apply a group homomorphism ``gamma`` (mapping or callable) valuewise."""
    fn = gamma if callable(gamma) else gamma.__getitem__
    if isinstance(v, Cochain1):
        try:
            return Cochain1(v.poset, target, {b: fn(g) for b, g in v.values.items()})
        except KeyError:
            raise SpecMismatch("homomorphism undefined on some value") from None
    if isinstance(v, Morphism0):
        try:
            return Morphism0(v.poset, target, {a: fn(g) for a, g in v.values.items()})
        except KeyError:
            raise SpecMismatch("homomorphism undefined on some value") from None
    raise TypeError("pushforward expects a Cochain1 or Morphism0")


# equivalence -------------------------------------------------------------------------

def _spanning_steps(p: Poset, root: str):
    """BFS steps ``(x, y, b)`` with ``b`` a nerve-type 1-simplex from ``x`` to ``y``."""
    steps = []
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted((p.below(x) | p.above(x)) - seen):
            seen.add(y)
            top = y if p.leq(x, y) else x
            steps.append((x, y, edge(top, y, x)))
            queue.append(y)
    return steps


def cochains_equivalent(u: Cochain1, uh: Cochain1) -> Morphism0 | None:
    """A morphism ``f: uh -> u`` if one exists."""
    p = u.poset
    G = u.group
    if uh.poset != p or uh.group != G:
        raise SpecMismatch("cochains live over different posets or groups")
    if not p.elements:
        return Morphism0(p, G, {})
    if not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not connected")
    check_total(u)
    check_total(uh)
    root = p.elements[0]
    steps = _spanning_steps(p, root)
    for g in G.elements:
        vals = {root: g}
        for x, y, b in steps:
            vals[y] = G.prod((u(b), vals[x], G.inv(uh(b))))
        f = Morphism0(p, G, vals)
        if is_morphism(f, uh, u):
            return f
    return None


# realising homomorphisms ---------------------------------------------------------------

def realize_hom(pres: Presentation, G: Group, chi: Mapping[int, object]) -> Cochain1:
    """The tree-gauge cocycle ``z(b) = chi(word(b))``."""
    p = pres.poset
    return Cochain1(p, G, {b: evaluate_word(G, pres.word(b), chi) for b in simplices(p, 1)})


def tree_gauge(u: Cochain1, pres: Presentation) -> tuple[Morphism0, Cochain1]:
    """``w(x) = u(tree path to x)`` and the gauged cochain ``w(d0 b)^-1 u(b) w(d1 b)``.

    ``w`` is a morphism from the gauged cochain to ``u``.
    """
    G = u.group
    w = Morphism0(u.poset, G, {x: evaluate_path(u, q) for x, q in pres.tree_paths.items()})
    vals = {b: G.prod((G.inv(w(b.face0)), g, w(b.face1))) for b, g in u.values.items()}
    return w, Cochain1(u.poset, G, vals)


def hom_of_cocycle(z: Cochain1, pres: Presentation) -> dict:
    """Generator images of the tree-gauged cocycle."""
    _, zt = tree_gauge(z, pres)
    return {k: zt(b) for k, b in enumerate(pres.generators)}


class Classification(list):
    """Class representatives, with the homomorphisms they realise."""

    def __init__(self, reps, homs, presentation, oracle_count=None):
        super().__init__(reps)
        self.homs = homs
        self.presentation = presentation
        self.oracle_count = oracle_count

    @property
    def oracle_agrees(self):
        return None if self.oracle_count is None else self.oracle_count == len(self)


def classify_cocycles(p: Poset, G: Group, basepoint: str | None = None, oracle: bool = False,
                      budget: int = 10**7) -> Classification:
    """One tree-gauge cocycle per conjugacy class of homomorphisms ``pi_1 -> G``."""
    if not p.elements or not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not pathwise connected")
    pres = pi1_presentation(p, basepoint or p.elements[0])
    homs = enumerate_homomorphisms(pres, G, budget=budget)
    classes = hom_classes(homs, G)
    reps = [realize_hom(pres, G, cls[0]) for cls in classes]
    count = len(brute_force_classes(p, G)) if oracle else None
    return Classification(reps, [cls[0] for cls in classes], pres, count)


def enumerate_cocycles(p: Poset, G: Group, limit: int = ORACLE_LIMIT):
    """Every cocycle, by backtracking over 1-simplex values with early 2-simplex checks."""
    edges = simplices(p, 1)
    if G.order ** len(edges) > limit:
        raise BudgetExceeded(f"{G.order}^{len(edges)} cochains exceed the oracle limit {limit}")
    pos = {b: i for i, b in enumerate(edges)}
    checks = {}
    for c in simplices(p, 2):
        tri = (pos[face(c, 0)], pos[face(c, 2)], pos[face(c, 1)])
        checks.setdefault(max(tri), []).append(tri)
    vals = [None] * len(edges)
    mul = G.mul

    def rec(i):
        if i == len(edges):
            yield Cochain1(p, G, dict(zip(edges, vals)))
            return
        for g in G.elements:
            vals[i] = g
            if all(mul(vals[a], vals[b]) == vals[c] for a, b, c in checks.get(i, ())):
                yield from rec(i + 1)
        vals[i] = None

    yield from rec(0)


def brute_force_classes(p: Poset, G: Group, limit: int = ORACLE_LIMIT) -> list[Cochain1]:
    """Representatives found by enumerating all cocycles and bucketing by equivalence."""
    reps = []
    for z in enumerate_cocycles(p, G, limit):
        if not any(cochains_equivalent(r, z) is not None for r in reps):
            reps.append(z)
    return reps


def class_index(z: Cochain1, reps) -> int | None:
    for i, r in enumerate(reps):
        if cochains_equivalent(r, z) is not None:
            return i
    return None


# holonomy and reduction -----------------------------------------------------------------

def _base_presentation(u: Cochain1, a: str | None) -> Presentation:
    p = u.poset
    if not p.elements or not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not pathwise connected")
    a = p.elements[0] if a is None else p.check(a)
    return pi1_presentation(p, a)


def holonomy(u: Cochain1, a: str | None = None) -> Subgroup:
    """Subgroup generated by the tree-conjugated values of ``u``."""
    _require_connection(u)
    pres = _base_presentation(u, a)
    _, ut = tree_gauge(u, pres)
    return subgroup_generated(u.group, sorted(set(ut.values.values()), key=u.group.index))


def restricted_holonomy(u: Cochain1, a: str | None = None) -> Subgroup:
    """Normal closure in the holonomy of the curvature values transported to ``a``."""
    H = holonomy(u, a)
    pres = _base_presentation(u, a)
    G = u.group
    w, _ = tree_gauge(u, pres)
    gens = set()
    for c, g in curvature(u).values.items():
        x2 = c.vertex(2)
        gens.add(G.prod((G.inv(w(x2)), g, w(x2))))
    return normal_closure(G, sorted(gens, key=G.index), ambient=H)


class Reduction(NamedTuple):
    subgroup: Subgroup
    cochain: Cochain1
    witness: Morphism0  # morphism from ``cochain`` to the original


def reduce_to_holonomy(u: Cochain1, a: str | None = None) -> Reduction:
    H = holonomy(u, a)
    w, ut = tree_gauge(u, _base_presentation(u, a))
    return Reduction(H, ut, w)


def is_reducible(u: Cochain1, a: str | None = None) -> Reduction | None:
    """A reduction to a proper subgroup, or None.

    Equivalent cochains have conjugate holonomy, and an H-valued cochain has
    holonomy inside H, so a reduction exists exactly when the holonomy is
    proper.
    """
    red = reduce_to_holonomy(u, a)
    if red.subgroup.order == u.group.order:
        return None
    return red


# random connections and nonflat search ----------------------------------------------------

def involutions(G: Group) -> list:
    return [g for g in G.elements if G.mul(g, g) == G.e]


def random_morphism(p: Poset, G: Group, rng: random.Random) -> Morphism0:
    return Morphism0(p, G, {a: rng.choice(G.elements) for a in p.elements})


def random_cocycle(p: Poset, G: Group, rng: random.Random, classes: Classification | None = None) -> Cochain1:
    """A gauge transform of a randomly chosen realised homomorphism."""
    if classes is None:
        classes = classify_cocycles(p, G)
    homs = enumerate_homomorphisms(classes.presentation, G)
    z = realize_hom(classes.presentation, G, rng.choice(homs))
    return gauge_transform(z, random_morphism(p, G, rng))


def random_connection(p: Poset, G: Group, rng: random.Random, perturb: float = 0.5,
                      classes: Classification | None = None) -> Cochain1:
    """A random connection cochain.

    Nerve values come from a random cocycle; with probability ``perturb``
    the values on non-nerve simplices are then redrawn subject to reverse
    symmetry, otherwise the result stays flat.
    """
    u = random_cocycle(p, G, rng, classes)
    if rng.random() >= perturb:
        return u
    p_, G_ = u.poset, u.group
    inv = involutions(G_)
    changes = {}
    for b in simplices(p_, 1):
        rb = reverse(b)
        if b in changes or is_nerve(p_, b) or is_nerve(p_, rb):
            continue
        if rng.random() < 0.5:
            continue
        if rb == b:
            changes[b] = rng.choice(inv)
        else:
            g = rng.choice(G_.elements)
            changes[b] = g
            changes[rb] = G_.inv(g)
    return u.with_values(changes)


@dataclass
class NonflatWitness:
    connection: Cochain1
    simplex: Simplex  # a 2-simplex with nontrivial curvature
    value: object


def find_nonflat(p: Poset, G: Group, base: Cochain1 | None = None) -> NonflatWitness | None:
    """Perturb a flat cocycle on a reverse pair of non-nerve simplices until curvature appears."""
    if not p.elements or not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not pathwise connected")
    z = trivial_cochain(p, G) if base is None else base
    inv = involutions(G)
    for b in simplices(p, 1):
        rb = reverse(b)
        if is_nerve(p, b) or is_nerve(p, rb) or rb < b:
            continue
        for g in G.elements:
            if g == G.e or (rb == b and g not in inv):
                continue
            u = z.with_values({b: G.mul(g, z(b)), rb: G.mul(z(rb), G.inv(g))})
            if not is_connection_cochain(u):
                continue
            bad = curvature(u).nontrivial()
            if bad:
                return NonflatWitness(u, bad[0][0], bad[0][1])
    return None


# bundles <-> cochains ------------------------------------------------------------------

def gamma(theta: bd.Trivialization, U: bd.BundleConnection) -> Cochain1:
    """``(d0 b, gamma(b) g) = theta_{d0 b}^-1 U(b) theta_{d1 b}(d1 b, g)``."""
    pb = theta.bundle
    if U.bundle is not pb:
        raise Mismatch("connection and trivialization belong to different bundles")
    G = pb.group
    vals = {}
    for b in simplices(pb.base, 1):
        pt = U(b)[theta.chart(b.face1, b.face1, G.e)]
        o, g = theta.chart_inv(b.face0, pt)
        if o != b.face0:
            raise Mismatch(f"U({b}) does not end over {b.face0}")
        vals[b] = g
    return Cochain1(pb.base, G, vals)


def bundle_cocycle(theta: bd.Trivialization) -> Cochain1:
    return gamma(theta, bd.flat_connection(theta.bundle))


def upsilon(theta: bd.Trivialization, u: Cochain1) -> bd.BundleConnection:
    """``U(b) = theta_{d0 b} o (left mult by u(b)) o theta_{d1 b}^-1``."""
    pb = theta.bundle
    G = pb.group
    if u.poset != pb.base or u.group != G:
        raise Mismatch("cochain and bundle differ in base or group")
    _require_connection(u)
    if induced_cocycle(u) != bundle_cocycle(theta):
        raise WrongInducedCocycle("the cochain does not induce the bundle cocycle of the charts")
    maps = {}
    for b in simplices(pb.base, 1):
        m = {}
        for pt in pb.fibres[b.face1]:
            _, g = theta.chart_inv(b.face1, pt)
            m[pt] = theta.chart(b.face0, b.face0, G.mul(u(b), g))
        maps[b] = m
    return bd.BundleConnection(pb, maps)


def gamma_morphism(theta_src: bd.Trivialization, theta_dst: bd.Trivialization, f: Mapping[str, str]) -> Morphism0:
    """``(a, F_a g) = theta_dst_a^-1 f theta_src_a(a, g)`` for a bundle map ``f``."""
    pb = theta_src.bundle
    G = pb.group
    vals = {}
    for a in pb.base.elements:
        o, g = theta_dst.chart_inv(a, f[theta_src.chart(a, a, G.e)])
        if o != a:
            raise Mismatch(f"bundle map does not preserve the fibre over {a}")
        vals[a] = g
    return Morphism0(pb.base, G, vals)


def upsilon_morphism(theta_src: bd.Trivialization, theta_dst: bd.Trivialization, f: Morphism0) -> dict:
    """The bundle map ``theta_src_a(a, g) -> theta_dst_a(a, f_a g)``."""
    pb = theta_src.bundle
    G = pb.group
    out = {}
    for a in pb.base.elements:
        for pt in pb.fibres[a]:
            _, g = theta_src.chart_inv(a, pt)
            out[pt] = theta_dst.chart(a, a, G.mul(f(a), g))
    return out


def reconstruct_bundle(z: Cochain1) -> tuple[bd.PrincipalNetBundle, bd.Trivialization]:
    """The principal bundle glued from ``z`` and its canonical charts.

    A class ``[o, g, a]`` is stored by its representative with ``a = o``,
    namely ``(o, z(o; o, a) g)``; the point label is ``o#<index of that g>``.
    """
    if not is_cocycle(z):
        raise NotCocycle("reconstruction needs a cocycle")
    p, G = z.poset, z.group
    J = {}
    for a in p.elements:
        for lo in p.below(a):
            if lo != a:
                k = z(edge(a, a, lo))
                J[(a, lo)] = {
                    bd.point_label(lo, i): bd.point_label(a, G.index(G.mul(k, g))) for i, g in enumerate(G.elements)
                }
    fibres = {o: tuple(bd.point_label(o, i) for i in range(len(G))) for o in p.elements}
    pb = bd.PrincipalNetBundle(p, fibres, J, G, bd._translation_action(p, G), name=f"P_{p.name}")
    anchors = {a: bd.point_label(a, G.index(G.e)) for a in p.elements}
    return pb, bd.local_trivialization(pb, anchors)


def is_trivial_bundle(pb: bd.PrincipalNetBundle) -> bool:
    return bd.global_section(pb) is not None
