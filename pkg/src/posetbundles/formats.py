"""Text formats for cochains, Čech cocycles and bundles.

Each file starts with a header naming the base poset, optionally followed
by ``dual`` to mean its opposite, and the group::

    cochain z over circ4 group Z2
    val (A; p, q) = 1

    cech xi over circ4 dual group Z2
    xi (A,B) at p = 0

    bundle P over circ4 group Z2
    J (A,p) : p#0 -> A#1

Blank lines and ``#`` comments are ignored.  The poset itself is looked
up by the caller (see :func:`resolve_poset`).
"""

from __future__ import annotations

import os
import re

from . import bundles as bd
from .cech import CechCocycle, overlap, overlap_pairs
from .cohomology import Cochain1
from .errors import ParseError, PartialCochain
from .groups import Group, format_element, group_from_spec, parse_element, parse_spec
from .poset import Poset, dual, load_poset
from .simplicial import edge, simplices

_HEADER = re.compile(r"(cochain|cech|bundle)\s+(\S+)\s+over\s+(\S+)(\s+dual)?\s+(group|fibre)\s+(.+)")
_VAL = re.compile(r"val\s*\(\s*([^;\s]+)\s*;\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*=\s*(.+)")
_XI = re.compile(r"xi\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*at\s+(\S+)\s*=\s*(.+)")
_J = re.compile(r"J\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*:\s*(\S+)\s*->\s*(\S+)")


class Header:
    def __init__(self, kind, name, poset_name, is_dual, group_kind, group_text):
        self.kind = kind
        self.name = name
        self.poset_name = poset_name
        self.dual = is_dual
        self.group_kind = group_kind
        self.group_text = group_text.strip()


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        # '#' inside point tokens like A#1 is not a comment
        line = re.split(r"(?<!\S)#", raw, maxsplit=1)[0].strip()
        if line:
            yield lineno, line


def read_header(text: str) -> Header:
    for lineno, line in _lines(text):
        m = _HEADER.fullmatch(line)
        if not m:
            raise ParseError("expected '<cochain|cech|bundle> <name> over <poset> [dual] group <spec>'", lineno)
        kind, name, pname, d, gk, gt = m.groups()
        if gk == "fibre" and kind != "bundle":
            raise ParseError("only bundles may declare a plain fibre", lineno)
        return Header(kind, name, pname, bool(d), gk, gt)
    raise ParseError("empty file")


def resolve_poset(header: Header, source_path=None, poset_path=None) -> Poset:
    """Load the named poset from ``poset_path`` or next to ``source_path``."""
    if poset_path is None:
        base = os.path.dirname(os.path.abspath(source_path)) if source_path else os.getcwd()
        poset_path = os.path.join(base, header.poset_name + ".poset")
    if not os.path.exists(poset_path):
        raise ParseError(f"cannot find poset file {poset_path!r}")
    p = load_poset(poset_path)
    if p.name != header.poset_name:
        raise ParseError(f"poset file names {p.name!r}, header wants {header.poset_name!r}")
    return dual(p) if header.dual else p


def _group(header: Header, lineno=1) -> Group:
    try:
        return group_from_spec(parse_spec(header.group_text))
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def _elem(G: Group, text: str, lineno: int):
    try:
        g = parse_element(G.spec, text)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None
    if g not in G:
        raise ParseError(f"{text!r} is not an element of {G.name}", lineno)
    return g


def _poset_label(p: Poset):
    if p.name.endswith("_dual"):
        return p.name[:-5] + " dual"
    return p.name


# cochains ----------------------------------------------------------------------

def parse_cochain(text: str, poset: Poset) -> Cochain1:
    header = read_header(text)
    if header.kind != "cochain":
        raise ParseError(f"expected a cochain file, found {header.kind}")
    G = _group(header)
    vals = {}
    first = True
    for lineno, line in _lines(text):
        if first:
            first = False
            continue
        m = _VAL.fullmatch(line)
        if not m:
            raise ParseError("expected 'val (<support>; <face0>, <face1>) = <element>'", lineno)
        o, a0, a1, lit = m.groups()
        for x in (o, a0, a1):
            if x not in poset:
                raise ParseError(f"unknown element {x!r}", lineno)
        if not (poset.leq(a0, o) and poset.leq(a1, o)):
            raise ParseError(f"({o}; {a0}, {a1}) is not a 1-simplex", lineno)
        b = edge(o, a0, a1)
        if b in vals:
            raise ParseError(f"duplicate value for {b}", lineno)
        vals[b] = _elem(G, lit, lineno)
    z = Cochain1(poset, G, vals)
    missing = [b for b in simplices(poset, 1) if b not in vals]
    if missing:
        raise PartialCochain(f"cochain {header.name} has no value at {missing[0]}")
    return z


def format_cochain(z: Cochain1, name: str = "z") -> str:
    G = z.group
    lines = [f"cochain {name} over {_poset_label(z.poset)} group {G.spec}"]
    for b in simplices(z.poset, 1):
        lines.append(f"val ({b.support}; {b.face0}, {b.face1}) = {format_element(G.spec, z(b))}")
    return "\n".join(lines) + "\n"


# Čech cocycles ------------------------------------------------------------------

def parse_cech(text: str, poset: Poset) -> CechCocycle:
    header = read_header(text)
    if header.kind != "cech":
        raise ParseError(f"expected a cech file, found {header.kind}")
    G = _group(header)
    xi = {}
    first = True
    for lineno, line in _lines(text):
        if first:
            first = False
            continue
        m = _XI.fullmatch(line)
        if not m:
            raise ParseError("expected 'xi (<a>,<a~>) at <o> = <element>'", lineno)
        a, at, o, lit = m.groups()
        for x in (a, at, o):
            if x not in poset:
                raise ParseError(f"unknown element {x!r}", lineno)
        if o not in overlap(poset, a, at):
            raise ParseError(f"{o} is not in the overlap of {a} and {at}", lineno)
        slot = xi.setdefault((a, at), {})
        if o in slot:
            raise ParseError(f"duplicate value for xi({a},{at}) at {o}", lineno)
        slot[o] = _elem(G, lit, lineno)
    return CechCocycle(poset, G, xi)


def format_cech(xi: CechCocycle, name: str = "xi") -> str:
    G = xi.group
    lines = [f"cech {name} over {_poset_label(xi.poset)} group {G.spec}"]
    for a, at in overlap_pairs(xi.poset):
        for o in sorted(overlap(xi.poset, a, at)):
            lines.append(f"xi ({a},{at}) at {o} = {format_element(G.spec, xi(a, at, o))}")
    return "\n".join(lines) + "\n"


# bundles --------------------------------------------------------------------------

def parse_bundle(text: str, poset: Poset) -> bd.NetBundle:
    """Bundle with fibres ``o#0 .. o#(n-1)``; principal when a group is declared.

    In the principal case ``o#i`` stands for the i-th group element and the
    group acts by right translation.
    """
    header = read_header(text)
    if header.kind != "bundle":
        raise ParseError(f"expected a bundle file, found {header.kind}")
    if header.group_kind == "group":
        G = _group(header)
        n = len(G)
    else:
        G = None
        try:
            n = int(header.group_text)
        except ValueError:
            raise ParseError("fibre size must be an integer", 1) from None
        if n < 1:
            raise ParseError("fibre size must be positive", 1)
    fibres = {o: tuple(bd.point_label(o, i) for i in range(n)) for o in poset.elements}
    J = {}
    first = True
    for lineno, line in _lines(text):
        if first:
            first = False
            continue
        m = _J.fullmatch(line)
        if not m:
            raise ParseError("expected 'J (<a>,<a~>) : <point> -> <point>'", lineno)
        a, lo, src, dst = m.groups()
        for x in (a, lo):
            if x not in poset:
                raise ParseError(f"unknown element {x!r}", lineno)
        if a == lo or not poset.leq(lo, a):
            raise ParseError(f"({a},{lo}) is not a nerve pair between distinct elements", lineno)
        if src not in fibres[lo] or dst not in fibres[a]:
            raise ParseError(f"points must lie over {lo} and {a}", lineno)
        slot = J.setdefault((a, lo), {})
        if src in slot:
            raise ParseError(f"J({a},{lo}) given twice at {src}", lineno)
        slot[src] = dst
    if G is None:
        return bd.NetBundle(poset, fibres, J, name=header.name)
    return bd.PrincipalNetBundle(poset, fibres, J, G, bd._translation_action(poset, G), name=header.name)


def format_bundle(b: bd.NetBundle) -> str:
    if isinstance(b, bd.PrincipalNetBundle):
        head = f"bundle {b.name} over {b.base.name} group {b.group.spec}"
    else:
        head = f"bundle {b.name} over {b.base.name} fibre {len(b.fibres[b.base.elements[0]])}"
    lines = [head]
    for (a, lo) in sorted(b.J):
        for src in b.fibres[lo]:
            lines.append(f"J ({a},{lo}) : {src} -> {b.J[(a, lo)][src]}")
    return "\n".join(lines) + "\n"


def load_with_poset(path, poset_path=None):
    """Read a cochain, cech or bundle file and its poset; returns ``(header, object)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    header = read_header(text)
    p = resolve_poset(header, path, poset_path)
    if header.kind == "cochain":
        return header, parse_cochain(text, p)
    if header.kind == "cech":
        return header, parse_cech(text, p)
    return header, parse_bundle(text, p)
