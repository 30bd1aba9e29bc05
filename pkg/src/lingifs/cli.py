"""Command-line interface: ``lingifs <command> ...``."""

from __future__ import annotations

import argparse
import sys

from . import catalogue
from .chain import chain_check, diameter_bound, heads_tails, linearity_probe
from .errors import GifsError
from .lattice import assess_marking, build_gifs, mark_enumerate
from .parametrize import Parametrization
from .render import approximate, default_pattern, point_pattern, to_svg, vertex_colour, write_svg
from .render import InitialPattern
from .spectral import cylinder_mass, spectral_data
from .textio import format_gifs, parse_gifs, parse_path, parse_pattern, read_text


def _load(args):
    if args.file:
        return parse_gifs(read_text(args.file)), None
    entry = catalogue.get(args.name)
    return entry.system, entry


def _source(p: argparse.ArgumentParser):
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--name", help="catalogue curve name")
    grp.add_argument("--file", help="system file")


def _cz(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def cmd_list(args, out):
    for name in catalogue.names():
        e = catalogue.get(name)
        tag = " (reconstructed)" if e.reconstructed else ""
        out.write(f"{name:18s} {len(e.system)} vertices  {e.description}{tag}\n")
    return 0


def cmd_show(args, out):
    g, entry = _load(args)
    comment = None
    if entry is not None:
        comment = entry.name + ": " + entry.description
    out.write(format_gifs(g, comment))
    return 0


def cmd_check(args, out):
    g, _ = _load(args)
    ht = heads_tails(g)
    report = chain_check(g, tol=args.tol, ht=ht)
    status = 0
    if report.passed:
        out.write(f"PASS  max gap {report.max_gap:.3e}  tol {report.tol:.3e}\n")
    else:
        out.write(f"FAIL  {len(report.violations)} violation(s), tol {report.tol:.3e}\n")
        out.write("vertex\tleft\tright\tgap\n")
        for v in report.violations:
            out.write(f"{v.vertex}\t{v.left}\t{v.right}\t{v.gap:.6e}\n")
        status = 1
    if args.probe:
        probe = linearity_probe(g, args.probe, args.sample_depth)
        verdict = "PASS" if probe.passed else "FAIL"
        out.write(f"probe k={probe.k} sample depth {probe.sample_depth}: {verdict}  "
                  f"{probe.pairs_checked} pairs, max distance {probe.max_distance:.3e}, "
                  f"threshold {probe.threshold:.3e}\n")
        for s in probe.separated[:20]:
            out.write(f"  {s.vertex} {s.left} | {s.right}  distance {s.distance:.6e}\n")
        if not probe.passed:
            status = 1
    return status


def cmd_dim(args, out):
    g, _ = _load(args)
    sd = spectral_data(g)
    out.write(f"delta {sd.delta:.12f}\n")
    for v, h in zip(g.vertices, sd.h):
        out.write(f"h {v} {h:.12f}\n")
    for v, row, ps in zip(g.vertices, g.edges, sd.p):
        for k, (e, p) in enumerate(zip(row, ps)):
            out.write(f"p {v} {k} -> {e.target} {p:.12f}\n")
    return 0


def cmd_measure(args, out):
    g, _ = _load(args)
    sd = spectral_data(g)
    vertex = args.vertex or g.vertices[0]
    out.write("path,mass\n")
    for w in g.paths(vertex, args.depth):
        word = ".".join(str(k) for k in w.edges)
        out.write(f"{word},{cylinder_mass(g, sd, vertex, w.edges):.12g}\n")
    return 0


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_eval(args, out):
    g, _ = _load(args)
    par = Parametrization(g)
    vertex = args.vertex or g.vertices[0]
    g.index(vertex)
    out.write("t,re,im\n")
    for t in args.t:
        z = par.psi(vertex, t, args.tol)
        out.write(f"{t!r},{z.real!r},{z.imag!r}\n")
    return 0


def cmd_render(args, out):
    g, entry = _load(args)
    if args.depth < 0:
        raise GifsError("depth must be non-negative")
    if args.pattern == "default":
        pat = default_pattern(g)
    elif args.pattern == "point":
        pat = point_pattern(g, entry.point_pattern if entry is not None else None)
    else:
        if not args.pattern_file:
            raise GifsError("--pattern file needs --pattern-file")
        pat = InitialPattern(parse_pattern(read_text(args.pattern_file)))
    if args.shrink:
        pat = pat.shrunk(args.shrink)
    if args.vertex == "all":
        verts = list(g.vertices)
    else:
        verts = [args.vertex or g.vertices[0]]
    polylines = []
    for v in verts:
        k = g.index(v)
        polylines.append((approximate(g, pat, v, args.depth), vertex_colour(k, len(g))))
    svg = to_svg(polylines)
    if args.out == "-":
        out.write(svg)
    else:
        write_svg(args.out, svg)
        out.write(f"wrote {args.out}: {sum(len(p) for p, _ in polylines)} points\n")
    return 0


def cmd_lattice(args, out):
    path = parse_path(read_text(args.path))
    g = build_gifs(path)
    text = format_gifs(g)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise GifsError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    return 0


def cmd_enumerate(args, out):
    trace = parse_path(read_text(args.trace))
    accepted = 0
    total = 0
    for p in mark_enumerate(trace, reflection_free=args.reflection_free):
        rep = assess_marking(p, args.depth)
        total += 1
        accepted += rep.accepted
        marks = ",".join(f"{x:+d}" for x in p.v)
        refl = "" if args.reflection_free else " refl=" + "".join(str(int(x)) for x in p.refl)
        overlap = rep.reptile.first_flag_depth
        flag = f"flagged@{overlap}" if overlap is not None else "clean"
        last = rep.reptile.overlap[-1]
        out.write(f"v={marks}{refl} chain={'pass' if rep.chain_pass else 'fail'} "
                  f"reptile={'yes' if rep.reptile.reptile_arithmetic else 'no'} "
                  f"overlap={flag} dup={last.duplicate_maps} coll={last.collisions}"
                  f"{'  ACCEPT' if rep.accepted else ''}\n")
    sys.stderr.write(f"{accepted} of {total} markings accepted\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lingifs",
                                     description="Linear graph-directed IFS and their space-filling curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalogue curves")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("show", help="print a system in the text format")
    _source(p)
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("check", help="chain condition (and optional linearity probe)")
    _source(p)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--probe", type=int, default=0, metavar="K", help="also probe depth-K neighbours")
    p.add_argument("--sample-depth", type=int, default=6)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dim", help="dimension, measure vector and Markov weights")
    _source(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("measure", help="measure of every cylinder at a depth")
    _source(p)
    p.add_argument("--vertex")
    p.add_argument("--depth", type=int, default=1)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("eval", help="evaluate the parametrization, CSV t,re,im")
    _source(p)
    p.add_argument("--vertex")
    p.add_argument("--t", type=_floats, required=True, help="comma-separated parameters")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="write the n-th approximation curve as SVG")
    _source(p)
    p.add_argument("--vertex", help="vertex label or 'all'")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--pattern", choices=("default", "point", "file"), default="default")
    p.add_argument("--pattern-file")
    p.add_argument("--shrink", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("lattice", help="lattice path tools")
    lsub = p.add_subparsers(dest="lattice_command", required=True)
    b = lsub.add_parser("build", help="convert a marked path file to a system file")
    b.add_argument("path")
    b.add_argument("--out")
    b.set_defaults(func=cmd_lattice)

    p = sub.add_parser("enumerate", help="assess every marking of a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--reflection-free", action="store_true")
    p.add_argument("--depth", type=int, default=4, help="deepest overlap probe")
    p.set_defaults(func=cmd_enumerate)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (GifsError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
