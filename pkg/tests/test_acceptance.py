"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists a
PASS/FAIL line for each criterion.
"""
import time

import pytest

from conftest import developed, random_covectors
from polyglue import catalog, fixtures, kernel
from polyglue.complex import (hypotheses, poincare_check, residual_convexity_check,
                              thickness_scan, triangular_scan, validate)
from polyglue.developer import (certify_convexity, develop, gallery_trace,
                                proper_convexity_certificate, residual_convexity_audit,
                                residue, strong_residual_convexity_check, supporting_hyperplane)
from polyglue.polytope import (dual_triangularity_criterion, face_in_link, is_cone_like, is_thin,
                               is_triangular, link)


def report(number, ok, detail):
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


# name: (triangular, cone-like or None when unspecified, thin)
TABLE = {
    "triangle": (True, True, True),
    "square": (False, None, True),
    "pentagon": (False, None, False),
    "hexagon": (False, None, False),
    "tetrahedron": (True, True, True),
    "square-pyramid": (True, True, True),
    "cube": (False, None, True),
    "octahedron": (False, None, True),
    "icosahedron": (False, None, True),
    "dodecahedron": (False, None, False),
}
FLOAT_NAMES = {"icosahedron", "dodecahedron"}


def _row(p):
    return is_triangular(p)[0], is_cone_like(p)[0], is_thin(p)[0]


def _matches(row, want):
    return all(w is None or w == got for got, w in zip(row, want))


@pytest.mark.criterion(1, "classification table, exact where rational, float stable")
def test_classification_table():
    start = time.perf_counter()
    wrong = []
    for name, want in TABLE.items():
        p = catalog.polytope(name)
        if p.arith.exact == (name in FLOAT_NAMES):
            wrong.append(f"{name}: backend")
        if not _matches(_row(p), want):
            wrong.append(name)
    elapsed = time.perf_counter() - start
    unstable = []
    for name in sorted(FLOAT_NAMES):
        for eps in (1e-12, 1e-10, 1e-8, 1e-6):
            if not _matches(_row(catalog.polytope(name, eps)), TABLE[name]):
                unstable.append((name, eps))
    report(1, not wrong and not unstable and elapsed < 10,
           f"{len(TABLE)} polytopes in {elapsed:.2f}s, wrong={wrong}, unstable={unstable}")


@pytest.mark.criterion(2, "residual convexity conditions agree cell by cell at depth 3")
def test_audit_conditions_agree_per_cell():
    details = []
    ok = True
    for name in ("square-torus", "cube-3-torus"):
        rep = residual_convexity_audit(developed(name, 3))
        agree = rep.agree and not rep.disagreements and rep.per_cell
        for triple in rep.per_cell.values():
            agree = agree and len({v for v in triple if v is not None}) == 1
        ok = ok and bool(agree)
        details.append(f"{name}: {len(rep.per_cell)} cells, {rep.evaluated} residues")
    report(2, ok, "; ".join(details))


@pytest.mark.criterion(3, "no bad ridges without triangles; wallpaper 4-valent ridges bad")
def test_no_bad_ridges_without_triangles():
    details = []
    ok = True
    for name in sorted(fixtures.SPECS):
        spec = fixtures.fixture(name)
        if not validate(spec).valid or not all(r.passed for r in poincare_check(spec)):
            continue
        if not all(r.convex for r in residual_convexity_check(spec)) or triangular_scan(spec):
            continue
        rep = strong_residual_convexity_check(developed(name, 3))
        ok = ok and bool(rep.ridges) and not rep.bad and not rep.undecided
        details.append(f"{name}: {len(rep.ridges)} ridges, {len(rep.bad)} bad")
    dc = developed("right-isosceles-wallpaper", 2)
    rep = strong_residual_convexity_check(dc)
    four = [r for r in rep.ridges if len(residue(dc, *r.ridge)) == 4]
    ok = ok and bool(four) and all(r.status == "bad" for r in four)
    details.append(f"wallpaper: {sum(r.status == 'bad' for r in four)}/{len(four)} "
                   "4-valent ridges bad")
    report(3, ok, "; ".join(details))


@pytest.mark.criterion(4, "theorem and direct certification agree, under 60 s")
def test_certification_cross_check():
    start = time.perf_counter()
    details = []
    ok = True
    for name, depth in (("square-torus", 5), ("cube-3-torus", 3)):
        v = certify_convexity(fixtures.fixture(name), 0, depth)
        levels_ok = len(v.levels) == depth and all(all(lv[1:]) for lv in v.levels)
        ok = ok and v.theorem_path == "certified" and v.direct_path and levels_ok
        details.append(f"{name} depth {depth}: theorem={v.theorem_path}, direct={v.direct_path}")
    elapsed = time.perf_counter() - start
    report(4, ok and elapsed < 60, "; ".join(details) + f"; {elapsed:.1f}s")


@pytest.mark.criterion(5, "Benoist triangles: residually convex yet the development overlaps")
def test_triangles_break_injectivity():
    spec = fixtures.fixture("benoist-triangles")
    residual = all(r.convex for r in residual_convexity_check(spec))
    dc = develop(spec, 0, 4)
    first = dc.overlaps[0] if dc.overlaps else None
    ok = residual and first is not None and 0 < len(first.witness) <= 40
    detail = "no overlap" if first is None else (
        f"{first.kind} overlap at level {first.level}, witness chain of "
        f"{len(first.witness)} cells ({first.explored} cells explored)")
    report(5, ok, detail)


@pytest.mark.criterion(6, "square torus galleries, K = 5, and no support certificate")
def test_gallery_suite():
    dc = developed("square-torus", 5)
    ok = True
    for sigma in range(4):
        gal = gallery_trace(dc, None, sigma, 5)
        sup = supporting_hyperplane(dc, gal)
        ok = ok and gal.ok and len(gal.disjoint) == 5 and len(gal.in_boundary) == 6
        ok = ok and sup.ok and len(sup.misses_q) == 5
    cert = proper_convexity_certificate(dc, None, 5)
    spec = fixtures.fixture("square-torus")
    thick = [t for _, t in thickness_scan(spec)]
    ok = ok and cert.status.startswith("no certificate") and not any(thick)
    ok = ok and hypotheses(spec)["thick_dual"] is False
    report(6, ok, f"4 galleries checked, certificate status: {cert.status!r}")


@pytest.mark.criterion(7, "kernel identities on >= 1000 random cones and the link identity")
def test_kernel_property_suite(rng):
    failures = 0
    cases = 1000
    for _ in range(cases):
        n = rng.randint(2, 4)
        c = kernel.dd_convert(random_covectors(rng, n, rng.randint(0, n + 3)), n)
        d = kernel.dd_convert(random_covectors(rng, n, rng.randint(0, n + 2)), n)
        roundtrip = kernel.from_generators(c.generators, n, c.lineality_basis) == c
        bidual = kernel.dual_cone(kernel.dual_cone(c)) == c
        morgan = kernel.dual_cone(kernel.intersect(c, d)) == \
            kernel.hull_union(kernel.dual_cone(c), kernel.dual_cone(d))
        lin, rest = kernel.lineality_decomposition(c)
        rebuilt = kernel.from_generators(rest.generators, n, lin.basis) == c and rest.is_pointed
        failures += not (roundtrip and bidual and morgan and rebuilt)
    pairs = 0
    link_failures = 0
    for name in catalog.NAMES:
        p = catalog.polytope(name)
        if not p.arith.exact:
            continue
        proper = [f for f in p.lattice.faces if 0 <= f.dim < p.dim]
        for e in proper:
            lk_e = link(p, e.id)
            for f in proper:
                if e.vertices < f.vertices:
                    pairs += 1
                    link_failures += link(p, f.id).cone != link(lk_e, face_in_link(p, e.id, f.id)).cone
    report(7, failures == 0 and link_failures == 0 and pairs > 0,
           f"{cases} random cases, {failures} failures; {pairs} face pairs, "
           f"{link_failures} link failures")


@pytest.mark.criterion(8, "dual criterion equals non-triangularity on the catalog")
def test_dual_criterion_agreement():
    bad = [name for name, p in catalog.catalog().items()
           if dual_triangularity_criterion(p) != (not is_triangular(p)[0])]
    report(8, not bad, f"{len(catalog.NAMES)} polytopes, disagreements={bad}")
