"""Command-line front end.

Exit codes: 0 success, 1 certificate rejected by ``verify``, 2 bad input or
failed precondition, 3 result would leave the coordinate field, 4 a
reproduction check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import alphastar, dataset, graph, ops, report, symmetry
from .field import parse_elem
from .geometry import ORIGIN
from .mwis import InfeasibleForcing

log = logging.getLogger("unitdist")

EXIT_OK, EXIT_REJECTED, EXIT_PRECONDITION, EXIT_FIELD, EXIT_VERIFY = 0, 1, 2, 3, 4

M1_TARGET = Fraction("0.25646")
CHI_TARGET = Fraction("3.8992")
FALLBACK_TARGET = Fraction("0.26")
# alpha* of the 102-vertex sector graph (its geometric symmetry group is trivial,
# so orbits are singletons); pinned from the first full run, 581 rounds
QUICK_ALPHA = Fraction(116, 411)


class Precondition(Exception):
    pass


def _scratch() -> Path:
    return Path(os.environ.get("UNITDIST_SCRATCH", "."))


def _load_graph(path) -> graph.UDGraph:
    try:
        return graph.load_json(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise Precondition(f"cannot read graph {path}: {exc}") from None


def _scalar(text: str):
    """A rational like 3/2 or a field element '(a, b, c, d)'."""
    text = text.strip()
    if text.startswith("("):
        return parse_elem(text)
    return Fraction(text)


def _vertex_arg(g: graph.UDGraph, text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise Precondition(f"vertex must be an index, got {text!r}") from None
    if not 0 <= v < g.n:
        raise Precondition(f"vertex {v} out of range 0..{g.n - 1}")
    return v


# ------------------------------------------------------------------ commands

def cmd_build(a) -> int:
    pts = dataset.load_points(a.points)
    if a.with_origin:
        pts = [ORIGIN] + pts
    g = graph.build(pts)
    if a.minkowski_with:
        g = ops.minkowski_sum(g, graph.build(dataset.load_points(a.minkowski_with)))
    if a.minkowski_self:
        g = ops.iterated_self_sum(g, a.minkowski_self)
    graph.save_json(g, a.out)
    print(f"{g.n} vertices, {g.num_edges()} edges -> {a.out}")
    return EXIT_OK


def cmd_transform(a) -> int:
    g = _load_graph(a.graph)
    op, *args = a.op
    extra = None
    if op == "trim" and len(args) == 1:
        out = ops.trim(g, _scalar(args[0]))
    elif op == "circle" and not args:
        out = ops.circle(g)
    elif op == "spindle" and len(args) == 2:
        out = ops.spindle(g, _vertex_arg(g, args[0]), _vertex_arg(g, args[1]))
    elif op == "reduce" and len(args) == 1:
        if not a.certificate:
            raise Precondition("reduce needs --certificate")
        cert = alphastar.AlphaStarCertificate.load(a.certificate)
        if cert.graph_hash != alphastar.graph_hash(g):
            raise Precondition("certificate belongs to a different graph")
        out, eps = alphastar.reduce(g, cert, Fraction(args[0]))
        extra = {"reduction": {"eps": report.fraction_text(eps), "tau": args[0]}}
        print(f"eps = {eps} ({float(eps):.6g})")
    else:
        raise Precondition("--op must be one of: trim R2 | circle | spindle U V | reduce TAU")
    graph.save_json(out, a.out, extra)
    print(f"{g.n} -> {out.n} vertices, {out.num_edges()} edges -> {a.out}")
    return EXIT_OK


def _summary(cert) -> list[str]:
    lines = alphastar.report_bounds(cert).lines()
    lines.append(f"{len(cert.trace)} iterations, {cert.orbits.num_orbits} orbits")
    return lines


def cmd_alphastar(a) -> int:
    g = _load_graph(a.graph)
    if a.threads and a.threads > 1:
        log.info("--threads %d requested; the solver runs single-threaded", a.threads)
    orbits = symmetry.orbits_for(g, a.orbits)
    run = alphastar.AlphaStarRun(g, orbits)
    cert = run.run(a.time_budget)
    if cert is None:
        print(f"not converged: optlow = {float(run.optlow):.8f}, best optup = {float(run.best_up):.8f}")
        return EXIT_VERIFY
    out = Path(a.out or Path(a.graph).with_suffix(".cert.json"))
    cert.save(out)
    for line in _summary(cert):
        print(line)
    print(f"certificate -> {out}")
    if not a.no_figures:
        for p in report.write_figures(g, out, cert.weights.vertex_weights(), cert.trace):
            print(f"figure -> {p}")
    return EXIT_OK


def cmd_verify(a) -> int:
    g = _load_graph(a.graph)
    try:
        cert = alphastar.AlphaStarCertificate.load(a.certificate)
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"rejected: unreadable certificate ({exc})")
        return EXIT_REJECTED
    try:
        alphastar.check_certificate(g, cert)
    except alphastar.CertificateError as exc:
        print(f"rejected: {exc}")
        return EXIT_REJECTED
    print(f"verified: alpha* = {cert.alpha}")
    return EXIT_OK


def cmd_reproduce(a) -> int:
    outdir = Path(a.out) if a.out else _scratch()
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        if a.quick:
            g = graph.build(dataset.final_102())
            name = "sector102"
        else:
            g = dataset.final_graph()
            name = "final607"
    except (RuntimeError, dataset.PointListError) as exc:
        print(f"dataset check failed: {exc}")
        return EXIT_PRECONDITION
    print(f"{name}: {g.n} vertices, {g.num_edges()} edges")
    orbits = symmetry.orbits_for(g, "geometric")
    run = alphastar.AlphaStarRun(g, orbits, solve_cap=a.solve_cap, bound_every=a.bound_every or None)
    trace_path = outdir / f"{name}-trace.jsonl"
    with open(trace_path, "w") as fh:
        def record(it):
            fh.write(json.dumps({"iteration": it.index, "optlow": str(it.optlow),
                                 "best_up": str(it.best_up),
                                 "optup": None if it.optup is None else str(it.optup),
                                 "bound": None if it.bound is None else str(it.bound),
                                 "seconds": round(it.seconds, 3)}) + "\n")
            fh.flush()
        cert = run.run(a.time_budget, record)
    graph_path = outdir / f"{name}.json"
    graph.save_json(g, graph_path)
    if cert is None:
        up = run.best_up
        why = "no improving set found within the solve cap" if run.stalled else "budget exhausted"
        print(f"{why} after {len(run.trace)} iterations")
        print(f"best optup = {up} ({float(up):.8f}); optlow = {float(run.optlow):.8f}")
        if run.best_up_weights is not None and not a.no_figures:
            report.write_figures(g, graph_path, run.best_up_weights.vertex_weights(), run.trace)
        ok = up <= FALLBACK_TARGET
        print(f"fallback optup <= {FALLBACK_TARGET}: {'yes' if ok else 'no'}")
        return EXIT_OK if ok and not a.quick else EXIT_VERIFY
    cert_path = outdir / f"{name}.cert.json"
    cert.save(cert_path)
    for line in _summary(cert):
        print(line)
    if not a.no_figures:
        for p in report.write_figures(g, cert_path, cert.weights.vertex_weights(), cert.trace):
            print(f"figure -> {p}")
    if not alphastar.verify_certificate(g, cert):
        print("independent verification failed")
        return EXIT_VERIFY
    if a.quick:
        if QUICK_ALPHA is not None and cert.alpha != QUICK_ALPHA:
            print(f"alpha* differs from the pinned value {QUICK_ALPHA}")
            return EXIT_VERIFY
        return EXIT_OK
    if cert.alpha <= M1_TARGET and cert.chi_f >= CHI_TARGET:
        print("bounds reproduced: m1 <= 0.25646 and chi_f >= 3.8992")
        return EXIT_OK
    print("certificate is valid but does not reach the published bounds")
    return EXIT_VERIFY


def cmd_export(a) -> int:
    g = _load_graph(a.graph)
    if a.format == "json":
        graph.save_json(g, a.out)
    elif a.format == "dimacs":
        Path(a.out).write_text(graph.to_dimacs(g))
    else:
        weights = None
        if a.certificate:
            cert = alphastar.AlphaStarCertificate.load(a.certificate)
            if cert.graph_hash != alphastar.graph_hash(g):
                raise Precondition("certificate belongs to a different graph")
            weights = cert.weights.vertex_weights()
        Path(a.out).write_text(report.to_svg(g, weights))
    print(f"{a.format} -> {a.out}")
    return EXIT_OK


def cmd_plot(a) -> int:
    g = _load_graph(a.graph)
    weights, trace = None, None
    if a.certificate:
        cert = alphastar.AlphaStarCertificate.load(a.certificate)
        if cert.graph_hash != alphastar.graph_hash(g):
            raise Precondition("certificate belongs to a different graph")
        weights, trace = cert.weights.vertex_weights(), cert.trace
    for p in report.write_figures(g, a.out, weights, trace):
        print(f"figure -> {p}")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitdist", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="unit-distance graph from a point list")
    b.add_argument("--points", required=True)
    b.add_argument("--minkowski-self", type=int, default=0, metavar="N",
                   help="add the graph to itself N times (centre: the origin if present)")
    b.add_argument("--minkowski-with", metavar="FILE",
                   help="first add the graph built from another point list")
    b.add_argument("--with-origin", action="store_true", help="add the origin as a vertex")
    b.add_argument("-o", "--out", default="graph.json")
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("transform", help="trim, circle, spindle or reduce a graph")
    t.add_argument("--graph", required=True)
    t.add_argument("--op", nargs="+", required=True, metavar="ARG",
                   help="trim R2 | circle | spindle U V | reduce TAU")
    t.add_argument("--certificate", help="certificate whose weights drive reduce")
    t.add_argument("-o", "--out", default="transformed.json")
    t.set_defaults(func=cmd_transform)

    s = sub.add_parser("alphastar", help="optimal weighted independence ratio with certificate")
    s.add_argument("--graph", required=True)
    s.add_argument("--orbits", choices=("geometric", "full", "none"), default="geometric")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    s.add_argument("--no-figures", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_alphastar)

    v = sub.add_parser("verify", help="re-check a certificate (exit 0 valid, 1 rejected)")
    v.add_argument("--graph", required=True)
    v.add_argument("--certificate", required=True)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reproduce-theorem2", help="rebuild the 607-vertex graph and bound alpha*")
    r.add_argument("--quick", action="store_true", help="use the 102-vertex sector graph")
    r.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    r.add_argument("--solve-cap", type=float, default=None, metavar="SECONDS",
                   help="cap each exact MWIS solve; a capped solve still tightens the upper bound")
    r.add_argument("--bound-every", type=int, default=25, metavar="K",
                   help="record a proven root bound every K heuristic rounds (0 = never)")
    r.add_argument("--no-figures", action="store_true")
    r.add_argument("-o", "--out", metavar="DIR", help="output directory (default $UNITDIST_SCRATCH or .)")
    r.set_defaults(func=cmd_reproduce)

    e = sub.add_parser("export", help="write json, dimacs or svg")
    e.add_argument("--graph", required=True)
    e.add_argument("--format", choices=("json", "dimacs", "svg"), required=True)
    e.add_argument("--certificate", help="shade svg vertices by certified weight")
    e.add_argument("-o", "--out", required=True)
    e.set_defaults(func=cmd_export)

    pl = sub.add_parser("plot", help="render graph (and convergence) figures")
    pl.add_argument("--graph", required=True)
    pl.add_argument("--certificate")
    pl.add_argument("-o", "--out", default="plot.png")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    start = time.monotonic()
    try:
        code = a.func(a)
    except ops.FieldClosureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except dataset.PointListError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (Precondition, ops.DegeneratePairError, alphastar.EverythingDeleted,
            alphastar.NoValidPair, InfeasibleForcing, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    log.info("done in %.1fs", time.monotonic() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
