import itertools
from fractions import Fraction as F

import pytest

from conftest import developed
from polyglue import fixtures, kernel, linalg
from polyglue.complex import planar_frame, wedge, wedges_tile_plane
from polyglue.developer import (certify_convexity, develop, gallery_trace, general_position,
                                good_ridge_check, polyball_check, proper_convexity_certificate,
                                q_sigma, residual_convexity_audit, residue, star,
                                strong_residual_convexity_check, supporting_hyperplane,
                                union_convexity)
from polyglue.errors import ConeLikeCell, InputError, NeedsDeeperDevelopment


def corner(dc, c):
    """Lower-left corner of a developed unit square, in the z = 1 chart."""
    xs = [(F(r[0], r[2]), F(r[1], r[2])) for r in dc.rays(c)]
    return min(xs)


# -- counting cells ------------------------------------------------------------------------

def test_square_levels_are_odd_squares():
    dc = developed("square-torus", 3)
    assert [len(lv) for lv in dc.levels] == [(2 * k + 1) ** 2 for k in range(4)]
    assert dc.injective
    for k, lv in enumerate(dc.levels):
        assert {corner(dc, c) for c in lv} == {(x, y) for x in range(-k, k + 1)
                                               for y in range(-k, k + 1)}


def test_cube_levels_are_odd_cubes():
    dc = developed("cube-3-torus", 2)
    assert [len(lv) for lv in dc.levels] == [1, 27, 125]
    assert dc.injective


def test_development_is_deterministic():
    a = develop(fixtures.fixture("benoist-triangles"), 0, 3)
    b = develop(fixtures.fixture("benoist-triangles"), 0, 3)
    assert a.summary() == b.summary()
    assert [a.key(c) for c in a.cells()] == [b.key(c) for c in b.cells()]


def test_bad_arguments():
    spec = fixtures.fixture("square-torus")
    with pytest.raises(InputError):
        develop(spec, 0, -1)
    with pytest.raises(InputError):
        develop(spec, 3, 1)


# -- stars and residues --------------------------------------------------------------------

def test_star_identities():
    dc = developed("square-torus", 3)
    root = dc.root
    vstars = [{m for m, _ in dc.face_cells(root, v)}
              for v in dc.polytope(root).lattice.vertex_ids]
    assert set.intersection(*vstars) == {root}
    assert set.union(*vstars) == dc.levels[1]
    for k in range(4):
        assert star(dc, [root], k) == dc.levels[k]
    assert star(dc, dc.levels[1], 1) == dc.levels[2]


def test_ridge_residue_is_a_ring():
    dc = developed("square-torus", 2)
    root = dc.root
    p = dc.polytope(root)
    for v in p.lattice.vertex_ids:
        ring = residue(dc, root, v)
        assert len(ring) == 4 and len(set(ring)) == 4
        for a, b in zip(ring, ring[1:] + ring[:1]):
            assert b in {dc.neighbor(a, f) for f in range(4)}


def test_face_residue_is_intersection_of_vertex_residues():
    dc = developed("cube-3-torus", 2)
    root = dc.root
    p = dc.polytope(root)
    for g in p.lattice.faces[:-1]:
        if g.dim == 0:
            continue
        res = set(residue(dc, root, g.id))
        parts = [set(residue(dc, root, p.lattice.vertex_ids[j])) for j in g.vertices]
        assert res == set.intersection(*parts)
        assert len(res) == 2 ** (3 - g.dim)


def test_unexplored_cells_need_deeper_development():
    dc = developed("square-torus", 1)
    outer = [c for c in dc.cells() if not dc.explored(c)]
    assert outer
    c = outer[0]
    with pytest.raises(NeedsDeeperDevelopment):
        polyball_check(dc, [c])
    with pytest.raises(NeedsDeeperDevelopment):
        union_convexity(dc, [c])
    with pytest.raises(NeedsDeeperDevelopment):
        star(dc, [c], 1)


# -- polyballs and convexity -------------------------------------------------------------------

def _at(dc, cells, spots):
    where = {corner(dc, c): c for c in cells}
    return [where[s] for s in spots]


def test_polyball_examples():
    dc = developed("square-torus", 3)
    assert polyball_check(dc, [dc.root])
    assert polyball_check(dc, dc.levels[2])
    diagonal = _at(dc, dc.levels[1], [(0, 0), (1, 1)])
    assert not polyball_check(dc, diagonal)
    ring = [c for c in dc.levels[1] if c != dc.root]
    assert not polyball_check(dc, ring)
    assert not polyball_check(dc, [])


def test_l_tromino_is_a_ball_but_not_convex():
    dc = developed("square-torus", 2)
    cells = _at(dc, dc.levels[1], [(0, 0), (1, 0), (0, 1)])
    assert polyball_check(dc, cells)
    rep = union_convexity(dc, cells)
    assert not rep.ridge_route and not rep.direct_route and rep.failing_ridges


def test_union_convexity_routes_match_rectangles(rng):
    """Subsets of the 5x5 block: convex exactly when they form a rectangle."""
    dc = developed("square-torus", 3)
    cells = sorted(dc.levels[2])
    spot = {c: corner(dc, c) for c in cells}
    checked = 0
    while checked < 40:
        pick = rng.sample(cells, rng.randint(1, 6))
        if not polyball_check(dc, pick):
            continue
        xs = {spot[c][0] for c in pick}
        ys = {spot[c][1] for c in pick}
        rect = len(pick) == (max(xs) - min(xs) + 1) * (max(ys) - min(ys) + 1)
        rep = union_convexity(dc, pick)
        assert rep.agree
        assert rep.convex == rect
        checked += 1


def test_ridge_links_tile_the_plane():
    for name, depth in (("square-torus", 2), ("benoist-triangles", 2), ("hexagon-torus", 2)):
        dc = developed(name, depth)
        for c in dc.levels[1]:
            for g in dc.polytope(c).ridges():
                rays = dc.face_rays(c, g.id)
                frame = planar_frame(rays, dc.n + 1)
                ws = [wedge(frame, dc.rays(m)) for m, _ in dc.face_cells(c, g.id)]
                assert wedges_tile_plane(ws), (name, c, g.id)


def test_cube_vertex_links_are_residually_convex():
    """Around a vertex of the cube complex the link cells tile R^3 with convex pair unions."""
    dc = developed("cube-3-torus", 2)
    root = dc.root
    p = dc.polytope(root)
    for vid in p.lattice.vertex_ids[:2]:
        (ray,) = dc.face_rays(root, vid)
        frame = linalg.nullspace([ray], 4)
        around = [m for m, _ in dc.face_cells(root, vid)]
        cones = {m: kernel.from_generators(
            [v for v in (tuple(linalg.dot(b, r) for b in frame) for r in dc.rays(m)) if any(v)], 3)
            for m in around}
        assert len(around) == 8
        for a, b in itertools.combinations(around, 2):
            assert not kernel.interiors_overlap(cones[a], cones[b])
            if b in {dc.neighbor(a, f) for f in range(6)}:
                hull = kernel.hull_union(cones[a], cones[b])
                assert kernel.covered_by(hull, [cones[a], cones[b]])


# -- residual convexity audit ---------------------------------------------------------------------

@pytest.mark.parametrize("name,depth,expected", [
    ("square-torus", 3, True), ("benoist-triangles", 3, True), ("hexagon-torus", 2, False)])
def test_audit_conditions_agree(name, depth, expected):
    rep = residual_convexity_audit(developed(name, depth))
    assert rep.agree and rep.evaluated > 0
    assert rep.vertices is expected and rep.facets is expected
    assert rep.faces is None


def test_cube_audit_uses_the_middle_condition():
    rep = residual_convexity_audit(developed("cube-3-torus", 2))
    assert rep.agree and rep.vertices is True and rep.faces is True and rep.facets is True


# -- good ridges -----------------------------------------------------------------------------------

def test_square_ridges_are_good():
    rep = strong_residual_convexity_check(developed("square-torus", 2), 1)
    assert rep.ridges and not rep.bad and not rep.undecided
    assert rep.strongly_residually_convex and rep.theorem_consistent


def test_wallpaper_four_valent_ridges_are_bad():
    dc = developed("right-isosceles-wallpaper", 2)
    rep = strong_residual_convexity_check(dc, 1)
    assert rep.bad
    for r in rep.ridges:
        assert r.good == (len(residue(dc, *r.ridge)) == 8)
    assert rep.triangular_cells and rep.theorem_consistent
    assert rep.strongly_residually_convex is False


def test_tiny_cap_leaves_ridge_undecided():
    dc = developed("square-torus", 2)
    g = dc.polytope(dc.root).ridges()[0]
    assert good_ridge_check(dc, (dc.root, g.id), cap=1).status == "undecided (cap)"


# -- certification and overlaps -------------------------------------------------------------------

def test_square_is_certified():
    v = certify_convexity(fixtures.fixture("square-torus"), 0, 3)
    assert v.certified and v.theorem_path == "certified"
    assert all(all(lv[1:]) for lv in v.levels)


def test_hexagon_is_not_residually_convex():
    v = certify_convexity(fixtures.fixture("hexagon-torus"), 0, 2)
    assert v.theorem_path == "not residually convex" and not v.certified


def test_twisted_square_fails_before_development():
    v = certify_convexity(fixtures.fixture("twisted-square"), 0, 2)
    assert v.valid and not v.poincare and not v.certified


def test_benoist_certification_is_inapplicable_and_overlaps():
    v = certify_convexity(fixtures.fixture("benoist-triangles"), 0, 4)
    assert v.theorem_path == "inapplicable"
    assert v.overlaps and not v.direct_path and not v.certified


def test_benoist_development_wraps():
    dc = developed("benoist-triangles", 4)
    assert dc.overlaps
    first = dc.overlaps[0]
    assert first.kind == "wrap" and first.level == 4
    assert dc.key(first.cells[0]) == dc.key(first.cells[1])
    chain = first.witness
    assert chain[0] == first.cells[0] and chain[-1] == first.cells[1]
    assert len(chain) <= 40
    for a, b in zip(chain, chain[1:]):
        assert b in {dc.neighbor(a, f) for f in range(3)}


# -- galleries and supporting hyperplanes ---------------------------------------------------------

def test_square_galleries():
    dc = developed("square-torus", 3)
    for sigma in range(4):
        gal = gallery_trace(dc, None, sigma, 3)
        assert gal.ok and gal.steps == 3
        assert len(set(gal.cells)) == 4
        assert all(len(o) == 1 for o in gal.options)
        for j, c in enumerate(gal.cells):
            assert dc.depth_of(c) == j
        rep = supporting_hyperplane(dc, gal)
        assert rep.ok and rep.dual_point_in_pavilion
        assert rep.angles[-1] < 1e-6


def test_gallery_through_triangle_hits_cone_like_cell():
    dc = developed("benoist-triangles", 3)
    with pytest.raises(ConeLikeCell):
        gallery_trace(dc, None, 0, 1)


def test_gallery_rejects_missing_facet():
    with pytest.raises(InputError):
        gallery_trace(developed("square-torus", 2), None, 9, 1)


def test_q_sigma_of_square_is_a_strip_end():
    dc = developed("square-torus", 2)
    qs = q_sigma(dc, dc.root, 0)
    assert qs.is_full and len(qs.facets) == 3
    assert not qs.contains(dc.cone(dc.root).interior_point())


def test_general_position():
    assert general_position([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert not general_position([(1, 0, 0), (0, 1, 0)], 3)
    assert not general_position([(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert not general_position([])


def test_square_support_certificate_is_not_found():
    cert = proper_convexity_certificate(developed("square-torus", 3), None, 3)
    assert cert.status == "no certificate at depth 3"
    assert cert.dual_thick is False
    assert len(cert.estimates) == 4
    assert cert.subsets_in_general_position == len(list(itertools.combinations(range(4), 3)))
