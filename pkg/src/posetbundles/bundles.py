"""Net bundles and principal net bundles over a finite poset.

Fibre points are string tokens ``"<element>#<index>"``.  The net structure
``J`` is stored for strict nerve pairs ``(a, lo)`` with ``lo < a`` as a
bijection from the fibre over ``lo`` to the fibre over ``a``; reflexive
pairs are the identity.

Local charts live on stars: ``theta_a`` is defined on ``{o : a <= o}``
(where ``J_(o,a)`` makes sense) and is extended to elements below ``a`` by
inverting the net structure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    BadAnchor,
    EmptyFibre,
    EndpointMismatch,
    InvalidBundle,
    NotConnected,
    NotOpen,
    UnknownElement,
)
from .groups import Group, Subgroup
from .poset import Poset, is_connected, is_locally_constant
from .simplicial import Path, Simplex, face, is_nerve, nerve_simplices, reverse, simplices


def point_label(o: str, i: int) -> str:
    return f"{o}#{i}"


def split_point(pt: str) -> tuple[str, int]:
    o, _, i = pt.rpartition("#")
    return o, int(i)


class NetBundle:
    """Fibres over a poset together with a composing family of bijections."""

    def __init__(self, base: Poset, fibres: Mapping[str, tuple], J: Mapping[tuple, Mapping], name: str = "B"):
        self.base = base
        self.name = name
        self.fibres = {a: tuple(fibres.get(a, ())) for a in base.elements}
        self.J = {k: dict(v) for k, v in J.items()}
        self.proj = {pt: a for a, pts in self.fibres.items() for pt in pts}

    def points(self) -> list[str]:
        return [pt for a in self.base.elements for pt in self.fibres[a]]

    def fibre(self, a: str) -> tuple:
        self.base.check(a)
        return self.fibres[a]

    def transport(self, a: str, lo: str) -> dict:
        """``J_(a, lo)``: fibre over ``lo`` to fibre over ``a`` (``lo <= a``)."""
        if a == lo:
            return {pt: pt for pt in self.fibres[a]}
        try:
            return self.J[(a, lo)]
        except KeyError:
            raise InvalidBundle(f"no net structure for ({a},{lo})") from None

    def chart_transport(self, o: str, a: str) -> dict:
        """Fibre over ``a`` to fibre over ``o`` for comparable ``o``, ``a``."""
        if self.base.leq(a, o):
            return self.transport(o, a)
        if self.base.leq(o, a):
            return {v: k for k, v in self.transport(a, o).items()}
        raise InvalidBundle(f"{o} and {a} are not comparable")


class PrincipalNetBundle(NetBundle):
    """A net bundle with a free, fibrewise transitive right action of ``group``.

    ``action[pt]`` lists ``pt . g`` for ``g`` in the group's element order.
    """

    def __init__(self, base, fibres, J, group: Group, action: Mapping[str, tuple], name: str = "P"):
        super().__init__(base, fibres, J, name=name)
        self.group = group
        self.action = {pt: tuple(v) for pt, v in action.items()}

    def act(self, pt: str, g) -> str:
        return self.action[pt][self.group.index(g)]

    def translation(self, pt: str, target: str):
        """The unique ``g`` with ``pt . g == target``."""
        row = self.action[pt]
        for i, q in enumerate(row):
            if q == target:
                return self.group.elements[i]
        raise InvalidBundle(f"{target} is not in the orbit of {pt}")


# constructors --------------------------------------------------------------

def product_bundle(p: Poset, X) -> NetBundle:
    X = list(X)
    if not X:
        raise EmptyFibre("product bundle needs a nonempty fibre")
    fibres = {o: tuple(point_label(o, i) for i in range(len(X))) for o in p.elements}
    J = {}
    for a in p.elements:
        for lo in p.below(a):
            if lo != a:
                J[(a, lo)] = {point_label(lo, i): point_label(a, i) for i in range(len(X))}
    return NetBundle(p, fibres, J, name=f"{p.name}x{len(X)}")


def _translation_action(p: Poset, G: Group) -> dict:
    act = {}
    for o in p.elements:
        for i, g in enumerate(G.elements):
            act[point_label(o, i)] = tuple(point_label(o, G.index(G.mul(g, h))) for h in G.elements)
    return act


def product_principal(p: Poset, G: Group) -> PrincipalNetBundle:
    base = product_bundle(p, G.elements)
    return PrincipalNetBundle(p, base.fibres, base.J, G, _translation_action(p, G), name=f"{p.name}x{G.name}")


def principal_from_left_mults(p: Poset, G: Group, J_values: Mapping[tuple, object], name="P") -> PrincipalNetBundle:
    """Principal bundle with fibres ``G`` and ``J_(a,lo)`` left multiplication by a given element.

    Pairs missing from ``J_values`` are the identity.
    """
    fibres = {o: tuple(point_label(o, i) for i in range(len(G))) for o in p.elements}
    J = {}
    for a in p.elements:
        for lo in p.below(a):
            if lo != a:
                k = J_values.get((a, lo), G.e)
                J[(a, lo)] = {
                    point_label(lo, i): point_label(a, G.index(G.mul(k, g))) for i, g in enumerate(G.elements)
                }
    return PrincipalNetBundle(p, fibres, J, G, _translation_action(p, G), name=name)


# validation --------------------------------------------------------------------

def _strict_chains(p: Poset):
    for x in nerve_simplices(p, 2):
        v0, v1, v2 = x.chain
        if v0 != v1 and v1 != v2:
            yield v0, v1, v2


def validate_net_bundle(b: NetBundle) -> list[str]:
    """Every violated axiom instance, as text; empty means valid."""
    out = []
    p = b.base
    for a in p.elements:
        if not b.fibres[a]:
            out.append(f"empty fibre over {a}")
    expected = {(a, lo) for a in p.elements for lo in p.below(a) if lo != a}
    for k in sorted(set(b.J) - expected):
        out.append(f"J given for non-nerve pair ({k[0]},{k[1]})")
    for a, lo in sorted(expected):
        m = b.J.get((a, lo))
        if m is None:
            out.append(f"J missing for ({a},{lo})")
            continue
        if set(m) != set(b.fibres[lo]):
            out.append(f"J({a},{lo}) not total on fibre over {lo}")
        if sorted(m.values()) != sorted(b.fibres[a]):
            out.append(f"J({a},{lo}) not a bijection onto fibre over {a}")
    if out:
        return out
    for v0, v1, v2 in _strict_chains(p):
        j01, j12, j02 = b.J[(v1, v0)], b.J[(v2, v1)], b.J[(v2, v0)]
        for pt in b.fibres[v0]:
            if j12[j01[pt]] != j02[pt]:
                out.append(f"J does not compose on nerve 2-simplex ({v2},{v1},{v0}) at {pt}")
                break
    return out


def validate_principal(pb: PrincipalNetBundle) -> list[str]:
    out = validate_net_bundle(pb)
    G = pb.group
    for a in pb.base.elements:
        fib = pb.fibres[a]
        if len(fib) != len(G):
            out.append(f"fibre over {a} has {len(fib)} points, group has order {len(G)}")
            continue
        for pt in fib:
            row = pb.action.get(pt)
            if row is None or len(row) != len(G):
                out.append(f"action undefined at {pt}")
                continue
            if any(q not in fib for q in row):
                out.append(f"action moves {pt} out of its fibre")
                continue
            if row[G.index(G.e)] != pt:
                out.append(f"identity does not fix {pt}")
            if len(set(row)) != len(row):
                out.append(f"action not free at {pt}")
            for g in G.elements:
                for h in G.elements:
                    if pb.act(pb.act(pt, g), h) != pb.act(pt, G.mul(g, h)):
                        out.append(f"not a right action at {pt}")
                        break
                else:
                    continue
                break
    if out:
        return out
    for (a, lo), m in sorted(pb.J.items()):
        for pt in pb.fibres[lo]:
            if any(m[pb.act(pt, g)] != pb.act(m[pt], g) for g in G.elements):
                out.append(f"J({a},{lo}) does not commute with the action at {pt}")
                break
    return out


def check_bundle(b: NetBundle):
    rep = validate_principal(b) if isinstance(b, PrincipalNetBundle) else validate_net_bundle(b)
    if rep:
        raise InvalidBundle("; ".join(rep))


# derived structure ---------------------------------------------------------------

def total_order(b: NetBundle) -> Poset:
    """The order ``psi <= phi`` iff ``pi(psi) <= pi(phi)`` and ``J`` carries psi to phi."""
    check_bundle(b)
    pairs = []
    for a in b.base.elements:
        for lo in b.base.below(a):
            m = b.transport(a, lo)
            pairs += [(pt, m[pt]) for pt in b.fibres[lo]]
    return Poset(b.points(), pairs, name=f"{b.name}_total")


def restrict(b: NetBundle, U) -> NetBundle:
    U = {b.base.check(a) for a in U}
    if not b.base.is_down_closed(U):
        raise NotOpen(f"{sorted(U)} is not down-closed")
    if not is_connected(b.base, U):
        raise NotConnected(f"{sorted(U)} is not connected")
    sub = b.base.subposet(U)
    fibres = {a: b.fibres[a] for a in U}
    J = {k: v for k, v in b.J.items() if k[0] in U and k[1] in U}
    if isinstance(b, PrincipalNetBundle):
        action = {pt: b.action[pt] for a in U for pt in b.fibres[a]}
        return PrincipalNetBundle(sub, fibres, J, b.group, action, name=b.name)
    return NetBundle(sub, fibres, J, name=b.name)


# connections ---------------------------------------------------------------------

@dataclass
class BundleConnection:
    """A fibre bijection ``U(b)`` over every 1-simplex, from ``d1 b`` to ``d0 b``."""

    bundle: NetBundle
    maps: dict  # Simplex -> {pt: pt}

    def __call__(self, b: Simplex) -> dict:
        return self.maps[b]


def flat_connection(b: NetBundle) -> BundleConnection:
    """``Z(b) = J_(|b|, d0 b)^-1 o J_(|b|, d1 b)``."""
    check_bundle(b)
    maps = {}
    for x in simplices(b.base, 1):
        up = b.transport(x.support, x.face1)
        down = {v: k for k, v in b.transport(x.support, x.face0).items()}
        maps[x] = {pt: down[up[pt]] for pt in b.fibres[x.face1]}
    return BundleConnection(b, maps)


def validate_connection(U: BundleConnection) -> list[str]:
    b = U.bundle
    out = []
    for x in simplices(b.base, 1):
        m = U.maps.get(x)
        if m is None:
            out.append(f"U undefined at {x}")
            continue
        if set(m) != set(b.fibres[x.face1]) or sorted(m.values()) != sorted(b.fibres[x.face0]):
            out.append(f"U({x}) is not a bijection between the fibres")
            continue
        r = U.maps.get(reverse(x), {})
        if any(r.get(m[pt]) != pt for pt in m):
            out.append(f"U({x}) and U of its reverse are not inverse")
        if is_nerve(b.base, x) and m != b.transport(x.face0, x.face1):
            out.append(f"U({x}) differs from J")
        if isinstance(b, PrincipalNetBundle):
            G = b.group
            if any(m[b.act(pt, g)] != b.act(m[pt], g) for pt in m for g in G.elements):
                out.append(f"U({x}) is not equivariant")
    return out


def connection_is_flat(U: BundleConnection) -> bool:
    for c in simplices(U.bundle.base, 2):
        d0, d1, d2 = U.maps[face(c, 0)], U.maps[face(c, 1)], U.maps[face(c, 2)]
        if any(d0[d2[pt]] != d1[pt] for pt in d1):
            return False
    return True


def parallel_transport(U: BundleConnection, q: Path) -> dict:
    """``U(b_n) o ... o U(b_1)`` as a map from the fibre over the source."""
    if not isinstance(q, Path):
        raise EndpointMismatch("parallel transport needs a Path")
    out = {pt: pt for pt in U.bundle.fibres[q.source]}
    for b in q.edges:
        m = U.maps[b]
        out = {k: m[v] for k, v in out.items()}
    return out


def bundle_holonomy(pb: PrincipalNetBundle, U: BundleConnection, psi: str) -> Subgroup:
    """``{g : psi.g reachable from psi}`` in the graph with arcs ``phi -> U(b) phi``."""
    if not is_connected(pb.base):
        raise NotConnected(f"poset {pb.base.name!r} is not connected")
    if psi not in pb.proj:
        raise UnknownElement(f"{psi!r} is not a point of the bundle")
    out_arcs = {}
    for b, m in U.maps.items():
        out_arcs.setdefault(b.face1, []).append(m)
    seen = {psi}
    queue = deque([psi])
    while queue:
        x = queue.popleft()
        for m in out_arcs.get(pb.proj[x], ()):
            y = m[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    a = pb.proj[psi]
    H = Subgroup(pb.group, [pb.translation(psi, pt) for pt in pb.fibres[a] if pt in seen])
    if not H.is_subgroup():
        raise InvalidBundle("reachable set is not a subgroup; connection is not equivariant")
    return H


# trivializations -----------------------------------------------------------------

class Trivialization:
    """Charts ``theta_a(o, g) = J_(o,a)(phi_a) . g`` for a choice of anchors ``phi_a``."""

    def __init__(self, pb: PrincipalNetBundle, anchors: Mapping[str, str]):
        self.bundle = pb
        self.anchors = dict(anchors)
        self._chart = {}
        self._inv = {}
        for a, phi in self.anchors.items():
            for o in pb.base.elements:
                if not pb.base.comparable(a, o):
                    continue
                base_pt = pb.chart_transport(o, a)[phi]
                for g in pb.group.elements:
                    pt = pb.act(base_pt, g)
                    self._chart[(a, o, g)] = pt
                    self._inv[(a, pt)] = (o, g)

    def chart(self, a: str, o: str, g) -> str:
        try:
            return self._chart[(a, o, g)]
        except KeyError:
            raise UnknownElement(f"chart {a} undefined at ({o}, {g!r})") from None

    def chart_inv(self, a: str, pt: str) -> tuple:
        try:
            return self._inv[(a, pt)]
        except KeyError:
            raise UnknownElement(f"{pt} not in the range of chart {a}") from None

    def domain(self, a: str) -> frozenset:
        """The star of ``a``, where the chart formula applies literally."""
        return self.bundle.base.above(a)


def local_trivialization(pb: PrincipalNetBundle, anchors: Mapping[str, str] | None = None) -> Trivialization:
    """Charts from one anchor point per fibre; default anchor is the first point."""
    check_bundle(pb)
    if anchors is None:
        anchors = {a: pb.fibres[a][0] for a in pb.base.elements}
    for a in pb.base.elements:
        if a not in anchors:
            raise BadAnchor(f"no anchor over {a}")
        if pb.proj.get(anchors[a]) != a:
            raise BadAnchor(f"anchor {anchors[a]} does not lie over {a}")
    return Trivialization(pb, anchors)


def transition_functions(theta: Trivialization) -> dict:
    """``{(at, a): {o: z}}`` with ``theta_at^-1 theta_a (o, g) = (o, z g)`` on the star overlap."""
    pb = theta.bundle
    G = pb.group
    out = {}
    for a in pb.base.elements:
        for at in pb.base.elements:
            common = pb.base.above(a) & pb.base.above(at)
            if not common:
                continue
            out[(at, a)] = {o: theta.chart_inv(at, theta.chart(a, o, G.e))[1] for o in sorted(common)}
    return out


# sections ------------------------------------------------------------------------

@dataclass
class Section:
    domain: frozenset
    values: dict  # element -> fibre point

    def __call__(self, o):
        return self.values[o]


def validate_section(b: NetBundle, s: Section) -> list[str]:
    out = []
    for o in sorted(s.domain):
        if b.proj.get(s.values.get(o)) != o:
            out.append(f"section value at {o} is not over {o}")
    if out:
        return out
    for a in sorted(s.domain):
        for lo in sorted(b.base.below(a) & s.domain):
            if lo != a and b.transport(a, lo)[s.values[lo]] != s.values[a]:
                out.append(f"section not compatible with J({a},{lo})")
    return out


def section_from_point(b: NetBundle, a: str, phi: str) -> Section:
    """``sigma_a(o) = J_(a,o)^-1(phi)`` on the down-set of ``a``."""
    b.base.check(a)
    if b.proj.get(phi) != a:
        raise UnknownElement(f"{phi!r} is not a point over {a}")
    dom = b.base.below(a)
    return Section(dom, {o: b.chart_transport(o, a)[phi] for o in dom})


def global_section(b: NetBundle) -> Section | None:
    """A global section if one exists.

    Sections are rigid along comparabilities, so fixing the value at the
    first element and propagating over a spanning tree leaves one fibre of
    candidates to try.
    """
    p = b.base
    if not p.elements:
        return Section(frozenset(), {})
    if not is_connected(p):
        raise NotConnected(f"poset {p.name!r} is not connected")
    root = p.elements[0]
    order = []
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted((p.below(x) | p.above(x)) - seen):
            seen.add(y)
            order.append((x, y))
            queue.append(y)
    for phi in b.fibres[root]:
        vals = {root: phi}
        for x, y in order:
            vals[y] = b.chart_transport(y, x)[vals[x]]
        s = Section(frozenset(p.elements), vals)
        if not validate_section(b, s):
            return s
    return None


def local_representative(s: Section, theta: Trivialization, a: str) -> dict:
    """``s_a(o)`` with ``s(o) = theta_a(o, s_a(o))`` wherever the chart reaches."""
    pb = theta.bundle
    pb.base.check(a)
    out = {}
    for o in sorted(s.domain):
        if pb.base.comparable(o, a):
            out[o] = theta.chart_inv(a, s.values[o])[1]
    return out


def representative_is_locally_constant(s: Section, theta: Trivialization, a: str) -> bool:
    rep = local_representative(s, theta, a)
    return is_locally_constant(theta.bundle.base, rep, rep.keys())


# morphisms -----------------------------------------------------------------------

def validate_morphism(f: Mapping[str, str], b1: NetBundle, b2: NetBundle) -> list[str]:
    """Check ``f: b1 -> b2`` preserves fibres and commutes with J (and the action)."""
    out = []
    if b1.base != b2.base:
        return ["bundles have different bases"]
    for pt in b1.points():
        if pt not in f:
            out.append(f"morphism undefined at {pt}")
        elif b2.proj.get(f[pt]) != b1.proj[pt]:
            out.append(f"morphism moves {pt} to another fibre")
    if out:
        return out
    for (a, lo), m in sorted(b1.J.items()):
        m2 = b2.transport(a, lo)
        for pt in b1.fibres[lo]:
            if f[m[pt]] != m2[f[pt]]:
                out.append(f"morphism does not commute with J({a},{lo}) at {pt}")
                break
    if isinstance(b1, PrincipalNetBundle) and isinstance(b2, PrincipalNetBundle):
        G = b1.group
        for pt in b1.points():
            if any(f[b1.act(pt, g)] != b2.act(f[pt], g) for g in G.elements):
                out.append(f"morphism not equivariant at {pt}")
        if len(set(f.values())) != len(f) or set(f.values()) != set(b2.points()):
            out.append("principal morphism is not bijective")
    return out


def compose_morphisms(f2: Mapping, f1: Mapping) -> dict:
    return {pt: f2[q] for pt, q in f1.items()}


def morphism_from_section(pb: PrincipalNetBundle, s: Section) -> dict:
    """The map ``(o, g) -> s(o) . g`` from the product bundle onto ``pb``."""
    G = pb.group
    return {
        point_label(o, i): pb.act(s.values[o], g) for o in pb.base.elements for i, g in enumerate(G.elements)
    }
