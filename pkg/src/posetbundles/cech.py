"""Čech cocycles on a poset and locally constant cocycles on a point model.

A Čech cocycle on a poset ``L`` is a family ``xi[(a, at)]`` of maps on the
overlap ``{o : a <= o and at <= o}`` of the stars of ``a`` and ``at``.  In
the main workflow ``L`` is the opposite ``K°`` of a base poset ``K``, so
the overlap is ``{o : o <= a, o <= at}`` in the order of ``K``.

The point model of ``K`` has the minimal elements of ``K`` as points, and
a point ``x`` lies in ``a`` when ``x <= a``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .cohomology import Cochain1, is_cocycle
from .errors import InvalidCech, Mismatch, NotACover, NotCocycle
from .groups import Group
from .poset import Poset, connected_components, dual, is_locally_constant, minimal_elements
from .simplicial import edge, simplices


def overlap(L: Poset, a: str, at: str) -> frozenset:
    return L.above(a) & L.above(at)


def overlap_pairs(L: Poset) -> list[tuple[str, str]]:
    return [(a, at) for a in L.elements for at in L.elements if overlap(L, a, at)]


class CechCocycle:
    def __init__(self, poset: Poset, group: Group, xi):
        self.poset = poset
        self.group = group
        self.xi = {k: dict(v) for k, v in xi.items()}

    def __call__(self, a, at, o):
        try:
            return self.xi[(a, at)][o]
        except KeyError:
            raise InvalidCech(f"xi({a},{at}) undefined at {o}") from None

    def __eq__(self, other):
        return (
            isinstance(other, CechCocycle)
            and self.poset == other.poset
            and self.group == other.group
            and self.xi == other.xi
        )

    def __repr__(self):
        return f"CechCocycle({self.poset.name}, {self.group.name})"


def cech_violations(xi: CechCocycle) -> list[str]:
    L, G = xi.poset, xi.group
    out = []
    for a, at in overlap_pairs(L):
        dom = overlap(L, a, at)
        vals = xi.xi.get((a, at), {})
        if set(vals) != set(dom):
            out.append(f"xi({a},{at}) not defined exactly on its overlap")
        elif not is_locally_constant(L, vals, dom):
            out.append(f"xi({a},{at}) not locally constant")
    if out:
        return out
    for a, at, ah in itertools.product(L.elements, repeat=3):
        for o in sorted(overlap(L, a, at) & L.above(ah)):
            if G.mul(xi(ah, at, o), xi(at, a, o)) != xi(ah, a, o):
                out.append(f"cocycle relation fails for ({ah},{at},{a}) at {o}")
    return out


def validate_cech(xi: CechCocycle):
    bad = cech_violations(xi)
    if bad:
        raise InvalidCech(bad[0])


def to_cech(z: Cochain1) -> CechCocycle:
    """``xi(a, at)(o) = z(a; a, o) z(at; at, o)^-1`` on the opposite poset."""
    if not is_cocycle(z):
        raise NotCocycle("to_cech needs a cocycle")
    K, G = z.poset, z.group
    L = dual(K)
    xi = {}
    for a, at in overlap_pairs(L):
        xi[(a, at)] = {o: G.mul(z(edge(a, a, o)), G.inv(z(edge(at, at, o)))) for o in overlap(L, a, at)}
    return CechCocycle(L, G, xi)


def to_net(xi: CechCocycle) -> Cochain1:
    """``xi_n(b) = xi(d0 b, d1 b)(|b|)``, a cocycle on the same poset."""
    validate_cech(xi)
    L = xi.poset
    return Cochain1(L, xi.group, {b: xi(b.face0, b.face1, b.support) for b in simplices(L, 1)})


def circle_map(z: Cochain1) -> Cochain1:
    return to_net(to_cech(z))


def verify_double_circle(z: Cochain1) -> bool:
    return circle_map(circle_map(z)) == z


def cech_equivalent(xi: CechCocycle, xi2: CechCocycle) -> dict | None:
    """Constants ``u[a]`` with ``xi2(a,at)(o) u[at] = u[a] xi(a,at)(o)``, or None.

    Each star has a least element, so a locally constant family on stars
    is one group element per index.
    """
    L, G = xi.poset, xi.group
    if xi2.poset != L or xi2.group != G:
        raise Mismatch("Čech cocycles over different posets or groups")
    if not L.elements:
        return {}
    comps = connected_components(L)
    steps = []
    roots = [c[0] for c in comps]
    for root in roots:
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted((L.below(x) | L.above(x)) - seen):
                seen.add(y)
                steps.append((x, y))
                queue.append(y)

    def check(u):
        for a, at in overlap_pairs(L):
            for o in overlap(L, a, at):
                if G.mul(xi2(a, at, o), u[at]) != G.mul(u[a], xi(a, at, o)):
                    return False
        return True

    for choice in itertools.product(G.elements, repeat=len(roots)):
        u = dict(zip(roots, choice))
        for x, y in steps:
            o = y if L.leq(x, y) else x
            # u[y] = xi2(y,x) u[x] xi(y,x)^-1 at a common point o
            u[y] = G.prod((xi2(y, x, o), u[x], G.inv(xi(y, x, o))))
        if check(u):
            return u
    return None


def _components_of_overlaps(L: Poset):
    return {(a, at): connected_components(L, overlap(L, a, at)) for a, at in overlap_pairs(L)}


def enumerate_cech_cocycles(L: Poset, G: Group):
    """Every Čech cocycle on ``L``: one value per (pair, overlap component), checked on triples."""
    comps = _components_of_overlaps(L)
    variables = [(k, tuple(c)) for k, cs in sorted(comps.items()) for c in cs]
    where = {}
    for i, (k, c) in enumerate(variables):
        for o in c:
            where[(k, o)] = i
    triples = []
    for a, at, ah in itertools.product(L.elements, repeat=3):
        for o in overlap(L, a, at) & L.above(ah):
            tri = (where[((ah, at), o)], where[((at, a), o)], where[((ah, a), o)])
            triples.append(tri)
    checks = {}
    for tri in set(triples):
        checks.setdefault(max(tri), []).append(tri)
    vals = [None] * len(variables)

    def rec(i):
        if i == len(variables):
            xi = {}
            for (k, c), g in zip(variables, vals):
                xi.setdefault(k, {}).update({o: g for o in c})
            yield CechCocycle(L, G, xi)
            return
        for g in G.elements:
            vals[i] = g
            if all(G.mul(vals[x], vals[y]) == vals[w] for x, y, w in checks.get(i, ())):
                yield from rec(i + 1)
        vals[i] = None

    yield from rec(0)


def cech_classes(L: Poset, G: Group) -> list[CechCocycle]:
    reps = []
    for xi in enumerate_cech_cocycles(L, G):
        if not any(cech_equivalent(r, xi) is not None for r in reps):
            reps.append(xi)
    return reps


# locally constant cocycles on the point model ----------------------------------------

def points_of(K: Poset, a: str) -> frozenset:
    return frozenset(x for x in minimal_elements(K) if K.leq(x, a))


def point_components(K: Poset, a: str, at: str) -> list[list[str]]:
    """Components of the points of ``a`` ∩ ``at``: x ~ y when one open below both contains them."""
    pts = sorted(points_of(K, a) & points_of(K, at))
    parent = {x: x for x in pts}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for o in K.below(a) & K.below(at):
        inside = [x for x in pts if K.leq(x, o)]
        for x in inside[1:]:
            parent[find(x)] = find(inside[0])
    groups = {}
    for x in pts:
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


@dataclass
class LocallyConstantCocycle:
    poset: Poset  # the base K
    cover: tuple
    group: Group
    f: dict  # (a, a') -> {point: g}

    def __call__(self, a, a2, x):
        return self.f[(a, a2)][x]


def check_cover(K: Poset, cover) -> tuple:
    cover = tuple(sorted({K.check(a) for a in cover}))
    missing = [x for x in minimal_elements(K) if not any(K.leq(x, a) for a in cover)]
    if missing:
        raise NotACover(f"points {missing} are not covered by {list(cover)}")
    return cover


def lc_violations(c: LocallyConstantCocycle) -> list[str]:
    K, G = c.poset, c.group
    out = []
    for a in c.cover:
        for a2 in c.cover:
            pts = points_of(K, a) & points_of(K, a2)
            vals = c.f.get((a, a2), {})
            if set(vals) != pts:
                out.append(f"f({a},{a2}) not defined exactly on the common points")
                continue
            for comp in point_components(K, a, a2):
                if len({vals[x] for x in comp}) > 1:
                    out.append(f"f({a},{a2}) not locally constant")
    if out:
        return out
    for a, a1, a2 in itertools.product(c.cover, repeat=3):
        for x in sorted(points_of(K, a) & points_of(K, a1) & points_of(K, a2)):
            if G.mul(c(a2, a1, x), c(a1, a, x)) != c(a2, a, x):
                out.append(f"cocycle relation fails for ({a2},{a1},{a}) at {x}")
    return out


def to_locally_constant(xi: CechCocycle, cover) -> LocallyConstantCocycle:
    """``f(a, a')(x) = xi(a, a')(o)`` for any ``o`` in the overlap containing ``x``; ``o = x`` works."""
    validate_cech(xi)
    K = dual(xi.poset)
    cover = check_cover(K, cover)
    f = {}
    for a in cover:
        for a2 in cover:
            f[(a, a2)] = {x: xi(a, a2, x) for x in points_of(K, a) & points_of(K, a2)}
    return LocallyConstantCocycle(K, cover, xi.group, f)


def cover_change_witness(xi: CechCocycle, cover, other_cover) -> dict:
    """``v(a, at)(x) = xi(a, at)(x)`` relating the two lc-cocycles of ``xi``."""
    K = dual(xi.poset)
    cover = check_cover(K, cover)
    other_cover = check_cover(K, other_cover)
    return {
        (a, at): {x: xi(a, at, x) for x in points_of(K, a) & points_of(K, at)}
        for a in cover
        for at in other_cover
    }


def lc_witness_violations(c: LocallyConstantCocycle, ct: LocallyConstantCocycle, v: dict) -> list[str]:
    """Check ``v(a,at)(x) ct(at,at')(x) = c(a,a')(x) v(a',at')(x)`` on quadruple overlaps."""
    K, G = c.poset, c.group
    out = []
    for a in c.cover:
        for at in ct.cover:
            for comp in point_components(K, a, at):
                if len({v[(a, at)][x] for x in comp}) > 1:
                    out.append(f"v({a},{at}) not locally constant")
    for a, a2 in itertools.product(c.cover, repeat=2):
        for at, at2 in itertools.product(ct.cover, repeat=2):
            pts = points_of(K, a) & points_of(K, a2) & points_of(K, at) & points_of(K, at2)
            for x in sorted(pts):
                if G.mul(v[(a, at)][x], ct(at, at2, x)) != G.mul(c(a, a2, x), v[(a2, at2)][x]):
                    out.append(f"witness fails for ({a},{a2};{at},{at2}) at {x}")
    return out


def lc_equivalent(c: LocallyConstantCocycle, ct: LocallyConstantCocycle) -> dict | None:
    """Witness maps ``v[(a, at)]`` showing ``ct`` equivalent to ``c``, or None.

    Every constraint ties two values at one point bijectively, so each
    connected block of unknowns is fixed by one choice.
    """
    K, G = c.poset, c.group
    if ct.poset != K or ct.group != G:
        raise Mismatch("lc-cocycles over different point models or groups")
    # one unknown per (a, at, component)
    var_of = {}
    variables = []
    for a in c.cover:
        for at in ct.cover:
            for comp in point_components(K, a, at):
                for x in comp:
                    var_of[(a, at, x)] = len(variables)
                variables.append((a, at, tuple(comp)))
    # arcs: value of var j = f(a,a')(x)^-1 value(i) ct(at,at')(x)
    arcs = {i: [] for i in range(len(variables))}
    for a, a2 in itertools.product(c.cover, repeat=2):
        for at, at2 in itertools.product(ct.cover, repeat=2):
            pts = points_of(K, a) & points_of(K, a2) & points_of(K, at) & points_of(K, at2)
            for x in sorted(pts):
                i, j = var_of[(a, at, x)], var_of[(a2, at2, x)]
                left, right = c(a, a2, x), ct(at, at2, x)
                arcs[i].append((j, left, right, 1))
                arcs[j].append((i, left, right, -1))
    value = [None] * len(variables)
    for start in range(len(variables)):
        if value[start] is not None:
            continue
        for g in G.elements:
            trial = {start: g}
            queue = deque([start])
            ok = True
            while queue and ok:
                i = queue.popleft()
                for j, left, right, sign in arcs[i]:
                    if sign > 0:
                        want = G.prod((G.inv(left), trial[i], right))
                    else:
                        want = G.prod((left, trial[i], G.inv(right)))
                    if j not in trial:
                        trial[j] = want
                        queue.append(j)
                    elif trial[j] != want:
                        ok = False
                        break
            if ok:
                for i, g2 in trial.items():
                    value[i] = g2
                break
        else:
            return None
    v = {}
    for (a, at, comp), g in zip(variables, value):
        v.setdefault((a, at), {}).update({x: g for x in comp})
    for a in c.cover:
        for at in ct.cover:
            v.setdefault((a, at), {})
    return v


def enumerate_lc_cocycles(K: Poset, cover, G: Group):
    """Every lc-cocycle for a fixed cover, one value per (pair, point component)."""
    cover = check_cover(K, cover)
    variables = []
    where = {}
    for a in cover:
        for a2 in cover:
            for comp in point_components(K, a, a2):
                for x in comp:
                    where[(a, a2, x)] = len(variables)
                variables.append((a, a2, tuple(comp)))
    checks = {}
    for a, a1, a2 in itertools.product(cover, repeat=3):
        for x in points_of(K, a) & points_of(K, a1) & points_of(K, a2):
            tri = (where[(a2, a1, x)], where[(a1, a, x)], where[(a2, a, x)])
            checks.setdefault(max(tri), set()).add(tri)
    vals = [None] * len(variables)

    def rec(i):
        if i == len(variables):
            f = {(a, a2): {} for a in cover for a2 in cover}
            for (a, a2, comp), g in zip(variables, vals):
                f[(a, a2)].update({x: g for x in comp})
            yield LocallyConstantCocycle(K, cover, G, f)
            return
        for g in G.elements:
            vals[i] = g
            if all(G.mul(vals[x], vals[y]) == vals[w] for x, y, w in checks.get(i, ())):
                yield from rec(i + 1)
        vals[i] = None

    yield from rec(0)


def lc_classes(K: Poset, cover, G: Group) -> list[LocallyConstantCocycle]:
    reps = []
    for c in enumerate_lc_cocycles(K, cover, G):
        if not any(lc_equivalent(r, c) is not None for r in reps):
            reps.append(c)
    return reps
