"""Command-line entry point: ``polyglue <command> ...``.

Exit codes: 0 every check passed, 1 a check failed, 2 undecided or the
development was too shallow, 3 bad input.
"""
import argparse
import json
import os
import sys
import time
import warnings
from fractions import Fraction

from . import catalog, complex as cx, developer as dv, fixtures as fx, io, render
from .errors import ConeLikeCell, ConsistencyError, InputError, NeedsDeeperDevelopment
from .polytope import SphericalPolytope, dual, dual_triangularity_criterion, is_cone_like, \
    is_thin, is_triangular

PASS, FAIL, UNDECIDED, BAD_INPUT = 0, 1, 2, 3
_VERDICT = {PASS: "pass", FAIL: "fail", UNDECIDED: "undecided", BAD_INPUT: "input error"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(BAD_INPUT, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, Fraction):
        return io.format_rational(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- input resolution ------------------------------------------------------------------------

def _read_document(source, backend=None):
    try:
        with open(source, encoding="utf-8") as fh:
            return io.parse(fh.read(), backend)
    except UnicodeDecodeError:
        raise InputError("document is not UTF-8", "$") from None
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def load(source, eps=1e-9, backend=None):
    """A GluingSpec or a list of polytopes from a path, fixture name or catalog name."""
    if source is not None and os.path.exists(source):
        doc = _read_document(source, backend)
        if isinstance(doc, io.SpecDocument):
            return doc.to_spec(eps)
        docs = doc if isinstance(doc, list) else [doc]
        out = []
        for i, d in enumerate(docs):
            try:
                out.append(d.build(eps))
            except InputError:
                raise
            except Exception as exc:
                where = f"$.polytopes[{i}]" if isinstance(doc, list) else "$"
                raise InputError(str(exc), where) from None
        return out
    if source in fx.SPECS:
        return fx.fixture(source)
    if source in catalog.NAMES:
        return [catalog.polytope(source, eps)]
    raise InputError(f"{source!r} is neither a file, a fixture nor a catalog polytope")


def _spec(source, eps):
    spec = load(source, eps)
    if not isinstance(spec, cx.GluingSpec):
        raise InputError(f"{source} is a polytope document, not a gluing spec")
    return spec


def _base(spec, base):
    if base is None:
        return 0
    if base in spec.names:
        return spec.names.index(base)
    try:
        idx = int(base)
    except ValueError:
        raise InputError(f"unknown polytope {base!r}", "--base") from None
    if not 0 <= idx < len(spec.polytopes):
        raise InputError(f"no polytope with index {idx}", "--base")
    return idx


def _backend_used(args, exact):
    used = exact if exact == "mixed" else ("exact" if exact else "float")
    note = None
    if args.backend == "float" and exact is True:
        note = "rational input: the exact backend is authoritative"
    return used, note


# -- commands ----------------------------------------------------------------------------------

def classify_polytope(p: SphericalPolytope):
    tri, tri_w = is_triangular(p)
    cone, cone_w = is_cone_like(p)
    thin, thin_w = is_thin(p)
    row = {"name": p.name, "dim": p.dim, "f_vector": list(p.f_vector()),
           "backend": "exact" if p.arith.exact else "float",
           "triangular": tri, "triangular_witness": list(tri_w) if tri else None,
           "cone_like": cone, "cone_like_facet": cone_w if cone else None,
           "thin": thin, "cutting_covector": list(thin_w) if thin else None}
    if p.cone.is_full:
        row["dual_thin"] = is_thin(dual(p))[0]
        row["dual_criterion"] = dual_triangularity_criterion(p)
    return row


def cmd_classify(args):
    if args.source is None:
        polys = list(catalog.catalog(args.eps).values())
    else:
        polys = load(args.source, args.eps, args.backend)
        if isinstance(polys, cx.GluingSpec):
            polys = polys.polytopes
    rows = [classify_polytope(p) for p in polys]
    kinds = {r["backend"] for r in rows}
    return PASS, {"polytopes": rows}, "mixed" if len(kinds) > 1 else kinds != {"float"}


def check_spec(spec):
    report = cx.validate(spec)
    out = {"validate": report.to_json()}
    if not report.valid:
        return FAIL, out
    pc = cx.poincare_check(spec)
    out["poincare"] = [r.to_json() for r in pc]
    rc = cx.residual_convexity_check(spec)
    out["residual_convexity"] = [r.to_json() for r in rc]
    out["triangular_cells"] = [{"polytope": spec.names[pid], "witness": list(w)}
                               for pid, w in cx.triangular_scan(spec)]
    out["thick_dual"] = [{"polytope": spec.names[pid], "thick": t}
                         for pid, t in cx.thickness_scan(spec)]
    out["hypotheses"] = cx.hypotheses(spec)
    if any(not r.agree for r in rc):
        raise ConsistencyError("ridge-link and hull routes disagree on a facet union")
    ok = all(r.passed for r in pc) and all(r.convex for r in rc)
    out["residually_convex"] = all(r.convex for r in rc)
    return (PASS if ok else FAIL), out


def cmd_check(args):
    spec = _spec(args.source, args.eps)
    code, out = check_spec(spec)
    return code, out, True


def develop_report(spec, base, depth, cap=10000, strong=True):
    dc = dv.develop(spec, base, depth)
    out = {"base": spec.names[base], "depth": depth, "cells": len(dc.levels[-1]),
           "per_level_cells": [len(lv) for lv in dc.levels],
           "overlaps": [o.to_json() for o in dc.overlaps]}
    code = PASS if dc.injective else FAIL
    per_depth = []
    for k in range(1, depth + 1):
        cells = dc.levels[k]
        entry = {"k": k}
        try:
            ball = dv.polyball_check(dc, cells)
            conv = dv.union_convexity(dc, cells) if ball else dv.ConvexityReport(False, False)
            entry.update(polyball=ball, convex=conv.convex, ridge_route=conv.ridge_route,
                         direct_route=conv.direct_route,
                         proper=dv.antipodal_proper(dc, cells))
            if not (ball and conv.convex and entry["proper"]):
                code = max(code, FAIL)
        except NeedsDeeperDevelopment as exc:
            entry["undecided"] = str(exc)
            code = max(code, UNDECIDED) if code != FAIL else code
        per_depth.append(entry)
    out["per_depth"] = per_depth
    if dc.injective:
        audit = dv.residual_convexity_audit(dc, depth)
        out["audit"] = audit.to_json()
        if not audit.agree:
            raise ConsistencyError("residual convexity audit conditions disagree")
        if strong:
            sr = dv.strong_residual_convexity_check(dc, depth, cap)
            out["strong_audit"] = sr.to_json()
            if sr.undecided and code == PASS:
                code = UNDECIDED
    else:
        out["audit"] = out["strong_audit"] = None
    return code, out, dc


def cmd_develop(args):
    spec = _spec(args.source, args.eps)
    if not cx.validate(spec).valid:
        return FAIL, {"validate": cx.validate(spec).to_json()}, True
    code, out, dc = develop_report(spec, _base(spec, args.base), args.depth, args.cap,
                                   not args.skip_strong)
    if args.svg:
        _write_svg(args.svg, dc, render.RenderOptions(depth=args.depth))
    return code, out, True


def cmd_certify(args):
    spec = _spec(args.source, args.eps)
    base = _base(spec, args.base)
    verdict = dv.certify_convexity(spec, base, args.depth)
    out = {"base": spec.names[base], "depth": args.depth, "verdict": verdict.to_json(),
           "hypotheses": cx.hypotheses(spec) if verdict.valid else None}
    code = PASS if verdict.certified else FAIL
    if verdict.certified and args.depth >= 1:
        dc = dv.develop(spec, base, args.depth)
        try:
            cert = dv.proper_convexity_certificate(dc, None, args.depth)
            out["proper_convexity"] = cert.to_json()
        except ConeLikeCell as exc:
            out["proper_convexity"] = {"status": f"inapplicable: {exc}"}
    return code, out, True


def cmd_gallery(args):
    spec = _spec(args.source, args.eps)
    base = _base(spec, args.base)
    dc = dv.develop(spec, base, args.steps)
    try:
        gal = dv.gallery_trace(dc, None, args.facet, args.steps)
    except ConeLikeCell as exc:
        return FAIL, {"error": str(exc), "cell": exc.cell, "facet": exc.facet}, True
    rep = dv.supporting_hyperplane(dc, gal)
    out = {"gallery": gal.to_json(), "ok": gal.ok, "support": rep.to_json()}
    if args.svg:
        _write_svg(args.svg, dc, render.RenderOptions(depth=args.steps, galleries=[gal]))
    return (PASS if gal.ok and rep.ok else FAIL), out, True


def _write_svg(path, dc, options):
    text = render.render_svg(dc, options)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_render(args):
    spec = _spec(args.source, args.eps)
    if spec.dimension != 2:
        raise InputError("render supports 2-dimensional specs only", "$.dimension")
    base = _base(spec, args.base)
    dc = dv.develop(spec, base, args.depth)
    opts = render.RenderOptions(depth=args.depth, labels=args.labels)
    if args.gallery is not None:
        opts.galleries.append(dv.gallery_trace(dc, None, args.gallery, args.depth, check=False))
    if args.bad_ridges and dc.injective:
        sr = dv.strong_residual_convexity_check(dc, args.depth)
        opts.bad_ridges = [r.ridge for r in sr.ridges if r.status == "bad"]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", render.ClippedWarning)
        text = render.render_svg(dc, opts)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out = {"cells": len(dc.levels[-1]), "depth": args.depth,
           "clipped": any(issubclass(w.category, render.ClippedWarning) for w in caught),
           "bad_ridges": [list(r) for r in opts.bad_ridges]}
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(text)
        out["svg"] = args.svg
    else:
        sys.stdout.write(text)
        return PASS, out, None
    return PASS, out, True


def fixture_document(name, eps=1e-9):
    if name in fx.SPECS:
        return io.spec_document(fx.fixture(name))
    if name in catalog.NAMES:
        return io.polytope_document(catalog.polytope(name, eps), name)
    raise InputError(f"unknown fixture {name!r}")


def cmd_fixtures(args):
    if args.export:
        os.makedirs(args.export, exist_ok=True)
        written = []
        for name in list(fx.SPECS) + list(catalog.NAMES):
            path = os.path.join(args.export, f"{name}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(io.serialize(fixture_document(name, args.eps)) + "\n")
            written.append(path)
        return PASS, {"written": written}, True
    if args.name:
        doc = fixture_document(args.name, args.eps)
        return PASS, doc.to_json(), True
    return PASS, {"specs": list(fx.SPECS), "polytopes": list(catalog.NAMES)}, True


# -- plumbing ----------------------------------------------------------------------------------

def build_parser():
    def global_flags(suppress):
        # Subcommand copies must not overwrite values given before the subcommand.
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--backend", choices=("exact", "float"), default=d("exact"))
        g.add_argument("--eps", type=float, default=d(1e-9), help="float backend tolerance")
        g.add_argument("--json-out", metavar="PATH", default=d(None),
                       help="also write the JSON report here")
        g.add_argument("--svg", metavar="PATH", default=d(None),
                       help="write an SVG picture (2-dimensional specs)")
        g.add_argument("--timing", action="store_true", default=d(False),
                       help="add wall-clock timing to the report")
        return g

    common = global_flags(True)
    parser = _Parser(prog="polyglue", description="Glue spherical polytopes and certify "
                     "convexity of the resulting projective structure.",
                     parents=[global_flags(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="triangular / cone-like / thin table")
    p.add_argument("source", nargs="?", help="polytope document or catalog name; whole catalog if omitted")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("check", parents=[common], help="validity, Poincaré and residual convexity")
    p.add_argument("source")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("develop", parents=[common], help="explore the universal cover")
    p.add_argument("source")
    p.add_argument("--base", help="polytope name or index (default 0)")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--cap", type=int, default=10000, help="candidate cap for the good-ridge check")
    p.add_argument("--skip-strong", action="store_true", help="skip the good-ridge audit")
    p.set_defaults(run=cmd_develop)

    p = sub.add_parser("certify", parents=[common], help="certify convexity up to a depth")
    p.add_argument("source")
    p.add_argument("--base")
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("gallery", parents=[common], help="trace a directed gallery")
    p.add_argument("source")
    p.add_argument("--base")
    p.add_argument("--facet", type=int, default=0)
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(run=cmd_gallery)

    p = sub.add_parser("render", parents=[common], help="draw a developed 2-complex as SVG")
    p.add_argument("source")
    p.add_argument("--base")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--gallery", type=int, metavar="FACET", help="stroke the gallery through this facet")
    p.add_argument("--bad-ridges", action="store_true", help="mark bad ridges")
    p.add_argument("--labels", action="store_true", help="print cell ids")
    p.set_defaults(run=cmd_render)

    p = sub.add_parser("fixtures", parents=[common], help="list or export built-in fixtures")
    p.add_argument("name", nargs="?")
    p.add_argument("--export", metavar="DIR", help="write every fixture document to DIR")
    p.set_defaults(run=cmd_fixtures)
    return parser


def _echo(args):
    skip = {"run", "json_out", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.eps <= 0:
        print("polyglue: error: --eps must be positive", file=sys.stderr)
        return BAD_INPUT
    start = time.perf_counter()
    exact = args.backend != "float"
    try:
        code, result, exact = args.run(args)
    except InputError as exc:
        code, result = BAD_INPUT, {"error": str(exc), "path": exc.path}
        print(f"input error: {exc}", file=sys.stderr)
    except NeedsDeeperDevelopment as exc:
        code, result = UNDECIDED, {"error": str(exc)}
    except ConsistencyError as exc:
        code, result = FAIL, {"error": f"consistency: {exc}"}
    report = {"command": _echo(args), "verdict": _VERDICT[code], "exit_code": code}
    if exact is not None:
        used, note = _backend_used(args, exact)
        report["backend"] = used
        if note:
            report["backend_note"] = note
    report["result"] = result
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 3)
    text = json.dumps(report, indent=2, default=_jsonable)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if exact is not None:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
