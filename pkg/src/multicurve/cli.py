"""Command-line front end.

Exit codes: 0 success, 1 falsified, 2 undetermined, 3 usage or schema error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import serialize as ser
from .certificate import verify_certificate
from .decomposition import PantsDecomposition, chart_of
from .diameter import diameter_path
from .errors import InsufficientWindow, InvalidVertex, MulticurveError, SchemaError, Undetermined
from .farey import Slope, adjacent_slopes, triangle_path
from .g0lab import classify_loop
from .lemmas import lemma_suite
from .metric import bounds_table
from .surface import SurfaceSpec, build_surface

OK, FALSIFIED, UNDETERMINED, USAGE = 0, 1, 2, 3


class Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _surface_arg(text: str):
    """A surface file, inline JSON, or ``ladder:W`` / ``lochness:W`` / ``finite:G,B``."""
    if text.startswith("{"):
        return ser.surface_from_json(ser.loads(text, "surface"))
    if ":" in text and not text.endswith(".json"):
        kind, rest = text.split(":", 1)
        try:
            if kind == "finite":
                g, b = (int(x) for x in rest.split(","))
                return build_surface(SurfaceSpec.finite(g, b))
            if kind in ("ladder", "lochness"):
                return build_surface(SurfaceSpec(kind, window=int(rest)))
        except ValueError as exc:
            raise Usage(f"bad surface {text!r}: {exc}") from exc
        raise Usage(f"unknown surface kind {kind!r}")
    return ser.surface_from_json(ser.load_file(text, "surface"))


def _emit(args, data, text: str):
    """Write JSON to ``--out`` if given; print JSON or text to stdout."""
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(data))
    if args.format == "json":
        sys.stdout.write(ser.dumps(data))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# commands


def cmd_surface_build(args):
    surf = _surface_arg(args.surface)
    if args.dot:
        sys.stdout.write(surf.to_dot())
        return OK
    data = surf.to_json()
    text = [f"{surf.spec}: {len(surf.pants)} pants, {len(surf.curves)} curves, frontier {sorted(surf.frontier)}"]
    for p, cuffs in data["pants"].items():
        text.append(f"  {p}: {' '.join(cuffs)}")
    _emit(args, data, "\n".join(text))
    return OK


def cmd_farey_path(args):
    a, b = Slope.parse(args.a), Slope.parse(args.b)
    chain = triangle_path(a, b)
    tris = [sorted(str(s) for s in t) for t in chain]
    _emit(args, {"from": str(a), "to": str(b), "triangles": tris}, "\n".join(" ".join(t) for t in tris))
    return OK


def cmd_g0_neighbors(args):
    if args.decomposition:
        X = ser.decomposition_from_json(ser.load_file(args.decomposition, "decomposition"))
    else:
        X = PantsDecomposition.base(_surface_arg(args.surface))
    charts = [args.chart] if args.chart else list(X.surface.interior_curves)
    out, lines = [], []
    for c in charts:
        try:
            ch = chart_of(X, c)
        except MulticurveError as exc:
            lines.append(f"{c}: {exc}")
            continue
        for s in adjacent_slopes(ch.slope, args.bound):
            Y = X.with_values({c: s})
            out.append({"chart": c, "slope": str(s), "decomposition": ser.decomposition_to_json(Y)})
            lines.append(f"{c}: {ch.slope} -> {s}")
    _emit(args, {"neighbors": out}, "\n".join(lines))
    return OK


def cmd_g0_classify(args):
    loop = ser.loop_from_json(ser.load_file(args.loop, "loop"))
    cls = classify_loop(loop)
    witness = None if cls.witness is None else sorted(str(c) for c in cls.witness)
    data = {"class": cls.kind, "k": cls.k, "deficiency": cls.deficiency if cls.deficiency != float("inf") else "inf",
            "witness": witness, "failed": cls.failed}
    text = [cls.kind, f"deficiency: {data['deficiency']}"]
    if witness is not None:
        text.append("mu: " + " ".join(witness))
    text += [f"failed: {f}" for f in cls.failed]
    _emit(args, data, "\n".join(text))
    return OK


def cmd_ginf_path(args):
    surf = _surface_arg(args.surface)
    metric = ser.metric_from_json(ser.load_file(args.metric, "metric"))
    metric.check_surface(surf)
    mu = ser.multicurve_from_json(ser.load_file(args.mu, "multicurve"), surf, metric)
    nu = ser.multicurve_from_json(ser.load_file(args.nu, "multicurve"), surf, metric)
    try:
        cert = diameter_path(mu, nu, metric, full=args.full, gamma0=args.gamma0)
    except InvalidVertex as exc:
        sys.stderr.write(f"not a vertex: {exc}\n")
        return FALSIFIED
    except InsufficientWindow as exc:
        sys.stderr.write(f"UNDETERMINED: {exc}; try window {exc.minimal_window}\n")
        return UNDETERMINED
    data = cert.to_json()
    lines = [f"path of length {cert.length} ({cert.kind}), L = {cert.L:.6g}"]
    for i, x in enumerate(cert.path):
        lines.append(f"  {i}: " + " ".join(str(c) for c in sorted(x.curves)))
    _emit(args, data, "\n".join(lines))
    return OK


def cmd_ginf_verify(args):
    cert = ser.load_file(args.certificate, "certificate")
    ok, reason = verify_certificate(cert)
    _emit(args, {"valid": ok, "reason": reason}, ("VALID" if ok else "INVALID") + f": {reason}")
    return OK if ok else FALSIFIED


def cmd_metric_bounds(args):
    surf = _surface_arg(args.surface)
    metric = ser.metric_from_json(ser.load_file(args.metric, "metric"))
    metric.check_surface(surf)
    if args.pairs:
        pairs = [tuple(p.split(":")) for p in args.pairs.split(",")]
        for p in pairs:
            if len(p) != 2 or not all(c in surf.curves for c in p):
                raise Usage(f"bad curve pair {':'.join(p)}")
    else:
        cs = list(surf.interior_curves)
        pairs = [(a, b) for i, a in enumerate(cs) for b in cs[i + 1:]]
    sys.stdout.write(bounds_table(surf, metric, pairs))
    return OK


def cmd_lemma_suite(args):
    surf = _surface_arg(args.surface)
    results = lemma_suite(surf, depth=args.depth, seed=args.seed, trials=args.trials)
    data = {"surface": surf.spec.to_json(), "seed": args.seed, "results": [r.to_json() for r in results]}
    lines = []
    for r in results:
        status = "UNDETERMINED" if r.passed is None else ("PASS" if r.passed else "FAIL")
        lines.append(f"{status} {r.name} ({r.checked} checked)")
    _emit(args, data, "\n".join(lines))
    if any(r.passed is False for r in results):
        return FALSIFIED
    if any(r.passed is None for r in results):
        return UNDETERMINED
    return OK


# parsers


def _common(p):
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")


def _ginf_path_args(p):
    p.add_argument("--surface", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--out")
    p.add_argument("--full", action="store_true", help="always build the generic 3-path")
    p.add_argument("--gamma0")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multicurve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("surface-build", help="build a surface and print its dual graph")
    p.add_argument("--surface", required=True)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_surface_build)

    p = sub.add_parser("farey-path", help="chain of Farey triangles between two slopes")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_farey_path)

    p = sub.add_parser("g0-neighbors", help="1-edge neighbours of a decomposition")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--decomposition")
    g.add_argument("--surface")
    p.add_argument("--chart")
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(func=cmd_g0_neighbors)

    p = sub.add_parser("g0-classify", help="classify a loop")
    p.add_argument("loop")
    p.set_defaults(func=cmd_g0_classify)

    p = sub.add_parser("ginf-path", help="certified path of length at most 3")
    _ginf_path_args(p)
    p.set_defaults(func=cmd_ginf_path)

    p = sub.add_parser("ginf-verify", help="re-check a path certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_ginf_verify)

    p = sub.add_parser("metric-bounds", help="CSV of distance bounds between base curves")
    p.add_argument("--surface", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--pairs", help="comma-separated a:b pairs")
    p.set_defaults(func=cmd_metric_bounds)

    p = sub.add_parser("lemma-suite", help="run every lemma checker")
    p.add_argument("--surface", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--trials", type=int, default=30)
    p.set_defaults(func=cmd_lemma_suite)

    for p in sub.choices.values():
        _common(p)
    return parser


def build_ginf_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ginf", description="diameter paths in G-infinity")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("path")
    _ginf_path_args(p)
    p.set_defaults(func=cmd_ginf_path)
    p = sub.add_parser("verify")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_ginf_verify)
    for p in sub.choices.values():
        _common(p)
    return parser


def _run(parser, argv) -> int:
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (Usage, SchemaError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except Undetermined as exc:
        sys.stderr.write(f"UNDETERMINED: {exc}\n")
        return UNDETERMINED
    except (MulticurveError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


def main(argv=None) -> int:
    return _run(build_parser(), argv)


def ginf_main(argv=None) -> int:
    return _run(build_ginf_parser(), argv)


if __name__ == "__main__":
    sys.exit(main())
