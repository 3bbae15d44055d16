"""Command line front end.

Exit codes: 0 success, 1 parse or usage error, 2 validation failure,
3 search budget exceeded.  ``--format records`` prints one record per line
as space separated ``key=value`` tokens (values shell-quoted when needed).
"""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import shlex
import sys
import time

from . import bundles as bd
from . import cech as ch
from . import cohomology as co
from . import formats
from .errors import BudgetExceeded, NotConnected, NotConnection, ParseError, PosetBundleError, ValidationError
from .fixtures import FIXTURES
from .groups import enumerate_homomorphisms, parse_group
from .poset import Poset, load_poset
from .simplicial import format_word, pi1_presentation, simplices, skeleton_edges

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


class Output:
    """Collects records and renders them as text or key=value lines."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.records = []

    def add(self, kind, **fields):
        self.records.append((kind, fields))

    def render(self) -> str:
        lines = []
        for kind, fields in self.records:
            if self.fmt == "records":
                toks = [f"record={kind}"] + [f"{k}={shlex.quote(str(v))}" for k, v in fields.items()]
                lines.append(" ".join(toks))
            elif len(fields) == 1:
                lines.append(f"{kind}: {next(iter(fields.values()))}")
            else:
                lines.append(f"{kind}: " + ", ".join(f"{k} {v}" for k, v in fields.items()))
        return "\n".join(lines) + ("\n" if lines else "")


def _digest(paths) -> str:
    h = hashlib.sha256()
    for path in paths:
        if path and os.path.exists(path):
            with open(path, "rb") as fh:
                h.update(fh.read())
        else:
            h.update(str(path).encode())
    return h.hexdigest()[:12]


def _load_poset(arg: str) -> Poset:
    if os.path.exists(arg):
        return load_poset(arg)
    if arg in FIXTURES:
        return FIXTURES[arg]()
    raise ParseError(f"no such poset file or fixture: {arg!r}")


def _flag(b) -> str:
    return "true" if b else "false"


def _fmt_subgroup(H) -> str:
    return "{" + ",".join(H.group.format(g) for g in H.sorted()) + "}"


# commands ------------------------------------------------------------------------

def cmd_simplices(args, out):
    p = _load_poset(args.poset)
    xs = simplices(p, args.n)
    for x in xs:
        out.add("simplex", value=str(x))
    out.add("count", value=len(xs))


def cmd_pi1(args, out):
    p = _load_poset(args.poset)
    base = args.base or (p.elements[0] if p.elements else None)
    if base is None:
        raise NotConnected("empty poset")
    pres = pi1_presentation(p, base)
    out.add("basepoint", value=base)
    for k, b in enumerate(pres.generators):
        out.add("generator", name=f"g{k}", edge=str(b))
    for r in pres.distinct_relators():
        out.add("relator", word=format_word(r))
    for n in (2, 3):
        G = parse_group(f"Z{n}")
        out.add("homs", group=G.name, count=len(enumerate_homomorphisms(pres, G, budget=args.budget)))


def cmd_classify(args, out):
    p = _load_poset(args.poset)
    G = parse_group(args.group)
    cl = co.classify_cocycles(p, G, oracle=args.oracle, budget=args.budget)
    for i, (z, chi) in enumerate(zip(cl, cl.homs)):
        images = " ".join(f"g{k}->{G.format(chi[k])}" for k in sorted(chi)) or "-"
        H = co.holonomy(z)
        out.add("class", index=i, hom=images, holonomy=_fmt_subgroup(H))
    out.add("classes", value=len(cl))
    if args.oracle:
        out.add("oracle", count=cl.oracle_count, agrees=_flag(cl.oracle_agrees))


def _load_cochain(args):
    header, obj = formats.load_with_poset(args.file, args.poset)
    if header.kind != "cochain":
        raise ParseError(f"{args.file}: expected a cochain file")
    return obj


def cmd_connection(args, out):
    u = _load_cochain(args)
    action = args.action
    conn = co.is_connection_cochain(u)
    if action == "check":
        out.add("connection", value=_flag(conn))
        out.add("cocycle", value=_flag(co.is_cocycle(u)))
        if conn:
            out.add("flat", value=_flag(co.induced_cocycle(u) == u))
        return
    if not conn:
        raise NotConnection(f"{args.file} is not a connection cochain")
    if action == "curvature":
        w = co.curvature(u)
        bad = w.nontrivial()
        for c, g in bad:
            out.add("curvature", simplex=str(c), value=u.group.format(g))
        out.add("nontrivial", value=len(bad))
        out.add("flat", value=_flag(not bad))
    elif action == "bianchi":
        viol = co.bianchi_check(u)
        for d in viol:
            out.add("violation", simplex=str(d))
        out.add("checked", value=len(simplices(u.poset, 3)))
        out.add("violations", value=len(viol))
    elif action == "holonomy":
        H = co.holonomy(u, args.base)
        R = co.restricted_holonomy(u, args.base)
        out.add("base", value=args.base or u.poset.elements[0])
        out.add("holonomy", order=H.order, elements=_fmt_subgroup(H))
        out.add("restricted", order=R.order, elements=_fmt_subgroup(R))
        out.add("normal", value=_flag(R.is_normal_in(H)))
    elif action == "reduce":
        red = co.reduce_to_holonomy(u, args.base)
        out.add("subgroup", order=red.subgroup.order, elements=_fmt_subgroup(red.subgroup))
        out.add("proper", value=_flag(red.subgroup.order < u.group.order))
        out.add("witness", value=_flag(co.is_morphism(red.witness, red.cochain, u)))
        out.add("values_in_subgroup", value=_flag(all(g in red.subgroup for g in red.cochain.values.values())))
        if args.emit:
            out.raw_after = formats.format_cochain(red.cochain, "reduced")


def cmd_cech(args, out):
    header, obj = formats.load_with_poset(args.file, args.poset)
    action = args.action
    if action in ("to-cech", "roundtrip"):
        if header.kind != "cochain":
            raise ParseError(f"{args.file}: {action} expects a cochain file")
        if action == "to-cech":
            out.raw = formats.format_cech(ch.to_cech(obj), header.name + "_c")
        else:
            zc = ch.circle_map(obj)
            out.add("circle_is_cocycle", value=_flag(co.is_cocycle(zc)))
            out.add("double_circle_equals_input", value=_flag(ch.verify_double_circle(obj)))
        return
    if header.kind != "cech":
        raise ParseError(f"{args.file}: {action} expects a cech file")
    ch.validate_cech(obj)
    if action == "to-net":
        out.raw = formats.format_cochain(ch.to_net(obj), header.name + "_n")
    elif action == "to-lc":
        if not args.cover:
            raise UsageError("to-lc needs --cover")
        cover = [c for c in args.cover.split(",") if c]
        lc = ch.to_locally_constant(obj, cover)
        for (a, a2), vals in sorted(lc.f.items()):
            for x in sorted(vals):
                out.add("f", pair=f"({a},{a2})", point=x, value=lc.group.format(vals[x]))
        out.add("cover", value=",".join(lc.cover))
        out.add("points", value=",".join(sorted({x for v in lc.f.values() for x in v})))


def cmd_bundle(args, out):
    header, b = formats.load_with_poset(args.file, args.poset)
    if header.kind != "bundle":
        raise ParseError(f"{args.file}: expected a bundle file")
    principal = isinstance(b, bd.PrincipalNetBundle)
    report = bd.validate_principal(b) if principal else bd.validate_net_bundle(b)
    if args.action == "check":
        for line in report:
            out.add("violation", value=line)
        out.add("valid", value=_flag(not report))
        return
    if report:
        raise ValidationError(report[0])
    if args.action == "section":
        s = bd.global_section(b)
        out.add("global_section", value=_flag(s is not None))
        if s is not None:
            for o in b.base.elements:
                out.add("value", element=o, point=s.values[o])
    elif args.action == "cocycle":
        if not principal:
            raise ValidationError("bundle cocycles need a principal bundle")
        z = co.bundle_cocycle(bd.local_trivialization(b))
        out.raw = formats.format_cochain(z, header.name + "_cocycle")


def cmd_random(args, out):
    p = _load_poset(args.poset)
    G = parse_group(args.group)
    rng = random.Random(args.seed)
    u = co.random_connection(p, G, rng, perturb=args.perturb)
    out.raw = formats.format_cochain(u, "u")


def cmd_nonflat(args, out):
    p = _load_poset(args.poset)
    G = parse_group(args.group)
    res = co.find_nonflat(p, G)
    out.add("found", value=_flag(res is not None))
    if res is not None:
        out.add("witness", simplex=str(res.simplex), curvature=G.format(res.value))
        if args.emit:
            out.raw_after = formats.format_cochain(res.connection, "nonflat")


def cmd_export(args, out):
    p = _load_poset(args.poset)
    lines = []
    if args.what == "hasse":
        lines.append(f'digraph "{p.name}" {{')
        lines += [f'  "{a}";' for a in p.elements]
        lines += [f'  "{a}" -> "{b}";' for a, b in p.covers()]
    else:
        lines.append(f'graph "{p.name}_skeleton" {{')
        lines += [f'  "{a}";' for a in p.elements]
        lines += [f'  "{lo}" -- "{hi}" [label="{o}"];' for o, lo, hi in skeleton_edges(p)]
    lines.append("}")
    out.raw = "\n".join(lines) + "\n"


# parser -------------------------------------------------------------------------

def _global_flags(ap, default):
    ap.add_argument("--seed", type=int, default=default, help="seed for randomized commands (default 0)")
    ap.add_argument("--budget", type=int, default=default, help="search budget for enumerations")
    ap.add_argument("--format", choices=["text", "records"], default=default, help="output style (default text)")
    ap.add_argument("--timing", action="store_true", default=default,
                    help="append elapsed time (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    ap = ArgumentParser(prog="posetbundles", description="Bundles, connections and cohomology over finite posets.")
    _global_flags(ap, argparse.SUPPRESS)
    ap.set_defaults(seed=0, budget=10**7, format="text", timing=False)
    # the same flags are accepted after the subcommand name
    common = ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", parser_class=ArgumentParser)
    sub.required = True
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("simplices", help="list the n-simplices of a poset")
    s.add_argument("poset")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_simplices)

    s = sub.add_parser("pi1", help="presentation of the fundamental group")
    s.add_argument("poset")
    s.add_argument("--base")
    s.set_defaults(func=cmd_pi1)

    s = sub.add_parser("classify", help="cocycle classes for a group")
    s.add_argument("poset")
    s.add_argument("group")
    s.add_argument("--oracle", action="store_true", help="cross-check by brute-force enumeration")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("connection", help="analyse a connection cochain file")
    s.add_argument("action", choices=["check", "curvature", "bianchi", "holonomy", "reduce"])
    s.add_argument("file")
    s.add_argument("--base")
    s.add_argument("--poset", help="poset file (default: <dir of file>/<name>.poset)")
    s.add_argument("--emit", action="store_true", help="also print the reduced cochain")
    s.set_defaults(func=cmd_connection)

    s = sub.add_parser("cech", help="Čech cocycle conversions")
    s.add_argument("action", choices=["to-cech", "to-net", "roundtrip", "to-lc"])
    s.add_argument("file")
    s.add_argument("--cover", help="comma separated cover elements for to-lc")
    s.add_argument("--poset")
    s.set_defaults(func=cmd_cech)

    s = sub.add_parser("bundle", help="check a bundle file or extract its cocycle")
    s.add_argument("action", choices=["check", "section", "cocycle"])
    s.add_argument("file")
    s.add_argument("--poset")
    s.set_defaults(func=cmd_bundle)

    s = sub.add_parser("random-connection", help="print a seeded random connection cochain")
    s.add_argument("poset")
    s.add_argument("group")
    s.add_argument("--perturb", type=float, default=0.5, help="probability of a nonflat sample")
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("nonflat", help="search for a connection with curvature")
    s.add_argument("poset")
    s.add_argument("group")
    s.add_argument("--emit", action="store_true", help="also print the connection")
    s.set_defaults(func=cmd_nonflat)

    s = sub.add_parser("export", help="dot graph of the Hasse diagram or 1-skeleton")
    s.add_argument("poset")
    s.add_argument("--what", choices=["hasse", "skeleton"], default="hasse")
    s.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = Output(args.format)
    out.raw = None
    out.raw_after = None
    start = time.perf_counter()
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"posetbundles: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"posetbundles: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"posetbundles: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValidationError as exc:
        print(f"posetbundles: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PosetBundleError as exc:
        print(f"posetbundles: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.format == "records" and out.raw is None:
        inputs = [getattr(args, k, None) for k in ("poset", "file") if getattr(args, k, None)]
        out.records.insert(0, ("run", {"command": args.command, "inputs": _digest(inputs)}))
    if args.timing:
        out.add("elapsed", seconds=f"{time.perf_counter() - start:.3f}")
    text = out.raw if out.raw is not None else ""
    text += out.render() if out.records else ""
    if out.raw_after:
        text += out.raw_after
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
