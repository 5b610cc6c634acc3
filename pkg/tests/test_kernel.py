from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from conftest import random_covectors
from polyglue import kernel, linalg
from polyglue.arith import EXACT, float_arith
from polyglue.errors import InputError


def cone_of_points(points):
    return kernel.from_generators([tuple(p) + (1,) for p in points], len(points[0]) + 1)


# -- linear algebra helpers --------------------------------------------------------------

def test_primitive_clears_denominators_and_content():
    assert linalg.primitive((F(1, 2), F(-3, 4), 0)) == (2, -3, 0)
    assert linalg.primitive((0, 0)) == (0, 0)


def test_rank_and_nullspace_match_numpy(rng):
    for _ in range(50):
        rows = random_covectors(rng, 4, rng.randint(1, 4))
        assert linalg.rank(rows, 4) == np.linalg.matrix_rank(np.array(rows, dtype=float))
        for k in linalg.nullspace(rows, 4):
            assert all(linalg.dot(r, k) == 0 for r in rows)


def test_inverse_and_determinant(rng):
    for _ in range(30):
        m = [list(r) for r in random_covectors(rng, 3, 3)]
        det = linalg.determinant(m)
        assert det == round(np.linalg.det(np.array(m, dtype=float)))
        if det:
            assert linalg.mat_mul(m, linalg.mat_inverse(m)) == linalg.identity(3)


# -- dd_convert ------------------------------------------------------------------------------

def test_empty_halfspace_list_is_full_space():
    c = kernel.dd_convert([], 3)
    assert c.generators == () and len(c.lineality_basis) == 3 and c.is_full
    assert c.contains((5, -7, 1))


def test_positive_orthant():
    c = kernel.dd_convert([(-1, 0, 0), (0, -1, 0), (0, 0, -1)], 3)
    assert set(c.generators) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert c.lineality_basis == ()
    assert c.contains((1, 2, 3)) and not c.contains((1, -2, 3))


def test_pentagon_rays_match_brute_force():
    pts = [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)]
    hs = cone_of_points(pts).facets
    c = kernel.dd_convert(hs, 3)
    assert len(c.generators) == 5 and c.lineality_basis == ()
    assert set(c.generators) == oracles.extreme_rays(hs, 3)


def test_redundant_halfspaces_are_dropped():
    c = kernel.dd_convert([(-1, 0, 0), (-2, 0, 0), (-1, -1, 0), (0, -1, 0)], 3)
    assert set(c.facets) == {(-1, 0, 0), (0, -1, 0)}


def test_dimension_mismatch_rejected():
    with pytest.raises(InputError):
        kernel.dd_convert([(1, 0)], 3)
    a = kernel.dd_convert([(-1, 0)], 2)
    b = kernel.dd_convert([(-1, 0, 0)], 3)
    with pytest.raises(InputError):
        kernel.intersect(a, b)


# -- decomposition ---------------------------------------------------------------------------

def test_halfspace_decomposition():
    lin, rest = kernel.lineality_decomposition(kernel.dd_convert([(1, 0)], 2))
    assert lin.dim == 1 and linalg.rank(list(lin.basis) + [(0, 1)], 2) == 1
    assert rest.generators == ((-1, 0),) and rest.lineality_basis == ()


def test_pointed_cone_decomposition_is_trivial():
    orth = kernel.dd_convert([(-1, 0, 0), (0, -1, 0), (0, 0, -1)], 3)
    lin, rest = kernel.lineality_decomposition(orth)
    assert lin.dim == 0 and rest == orth


def test_line_decomposition():
    c = kernel.dd_convert([(1, 1), (-1, -1)], 2)
    lin, rest = kernel.lineality_decomposition(c)
    assert lin.dim == 1 and linalg.dot(lin.basis[0], (1, 1)) == 0
    assert rest.is_zero


# -- duality ---------------------------------------------------------------------------------

def test_dual_of_full_space_is_zero():
    assert kernel.dual_cone(kernel.full_space(3)).is_zero


def test_dual_of_halfspace_is_a_ray():
    d = kernel.dual_cone(kernel.dd_convert([(1, -2, 0)], 3))
    assert d.generators == ((1, -2, 0),) and d.lineality_basis == ()


def test_dual_of_cube_is_octahedron():
    from itertools import product
    cube = kernel.from_generators([p + (1,) for p in product((-1, 1), repeat=3)], 4)
    d = kernel.dual_cone(cube)
    assert len(cube.generators) == 8 and len(cube.facets) == 6
    assert len(d.generators) == 6 and len(d.facets) == 8
    assert set(d.generators) == set(cube.facets)


# -- predicates -----------------------------------------------------------------------------

def test_intersection_of_opposite_halfspaces_is_hyperplane():
    c = kernel.intersect(kernel.dd_convert([(1, 0, 0)], 3), kernel.dd_convert([(-1, 0, 0)], 3))
    assert c.dim == 2 and c.equations == ((1, 0, 0),)


def test_benoist_quadrilateral_and_its_double():
    quad = cone_of_points([(1, 0), (2, 0), (0, 2), (0, 1)])
    double = cone_of_points([(2, 0), (4, 0), (0, 4), (0, 2)])
    region = kernel.dd_convert([(-1, 0, 0), (0, -1, 0), (-1, -1, 1), (1, 1, -4)], 3)
    hull = kernel.hull_union(quad, double)
    assert hull == region
    assert kernel.covered_by(hull, [quad, double])


def test_hull_of_separated_squares_is_not_their_union():
    a = cone_of_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    b = cone_of_points([(2, 0), (3, 0), (3, 1), (2, 1)])
    assert not kernel.covered_by(kernel.hull_union(a, b), [a, b])
    assert not kernel.interiors_overlap(a, b)


def test_covered_by_split_square():
    sq = cone_of_points([(0, 0), (2, 0), (2, 2), (0, 2)])
    left = cone_of_points([(0, 0), (1, 0), (1, 2), (0, 2)])
    right = cone_of_points([(1, 0), (2, 0), (2, 2), (1, 2)])
    lower = cone_of_points([(0, 0), (2, 0), (2, 2)])
    upper = cone_of_points([(0, 0), (2, 2), (0, 2)])
    assert kernel.covered_by(sq, [left, right])
    assert kernel.covered_by(sq, [lower, upper])
    assert not kernel.covered_by(sq, [lower, right])
    assert not kernel.covered_by(sq, [lower, left])


def test_interiors_overlap_and_touching():
    a = cone_of_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    b = cone_of_points([(1, 0), (2, 0), (2, 1), (1, 1)])
    c = cone_of_points([(F(1, 2), 0), (2, 0), (2, 1)])
    assert not kernel.interiors_overlap(a, b)
    assert kernel.interiors_overlap(a, c)


def test_strictly_feasible_witness():
    x = kernel.strictly_feasible(3, equations=[(0, 0, 1)], strict=[(-1, 0, 0), (0, -1, 0)])
    assert x is not None and x[2] == 0 and x[0] > 0 and x[1] > 0
    assert kernel.strictly_feasible(2, strict=[(1, 0), (-1, 0)]) is None


# -- subspaces -----------------------------------------------------------------------------

def test_complement_of_x_axis():
    s = kernel.orthogonal_complement(kernel.subspace([(1, 0, 0)], 3))
    assert s.dim == 2 and all(v[0] == 0 for v in s.basis)


def test_projection_onto_yz_plane():
    s = kernel.subspace([(0, 1, 0), (0, 0, 1)], 3)
    assert kernel.project(s, (1, 2, 3)) == (0, 2, 3)


def test_double_complement_random(rng):
    for _ in range(60):
        n = rng.randint(2, 5)
        s = kernel.subspace(random_covectors(rng, n, rng.randint(1, n)), n)
        back = kernel.orthogonal_complement(kernel.orthogonal_complement(s))
        assert back.dim == s.dim
        assert linalg.rank(list(s.basis) + list(back.basis), n) == s.dim


# -- randomized properties ------------------------------------------------------------------

def _random_cone(rng):
    n = rng.randint(2, 4)
    return kernel.dd_convert(random_covectors(rng, n, rng.randint(0, n + 3)), n)


def test_roundtrip_biduality_and_dimension_law(rng):
    for _ in range(300):
        c = _random_cone(rng)
        back = kernel.from_generators(c.generators, c.ambient_dim, c.lineality_basis)
        assert back == c and kernel.equal(back, c)
        d = kernel.dual_cone(c)
        assert kernel.dual_cone(d) == c
        assert d.dim + len(c.lineality_basis) == c.ambient_dim
        lin, rest = kernel.lineality_decomposition(c)
        assert rest.is_pointed
        assert kernel.from_generators(rest.generators, c.ambient_dim, lin.basis) == c


def test_de_morgan(rng):
    for _ in range(200):
        n = rng.randint(2, 4)
        c = kernel.dd_convert(random_covectors(rng, n, rng.randint(0, 4)), n)
        d = kernel.dd_convert(random_covectors(rng, n, rng.randint(0, 4)), n)
        lhs = kernel.dual_cone(kernel.intersect(c, d))
        rhs = kernel.hull_union(kernel.dual_cone(c), kernel.dual_cone(d))
        assert lhs == rhs


def test_descriptions_agree_pointwise(rng):
    """H- and V-descriptions accept the same random points."""
    for _ in range(100):
        c = _random_cone(rng)
        for _ in range(10):
            x = tuple(rng.randint(-4, 4) for _ in range(c.ambient_dim))
            in_h = all(linalg.dot(u, x) <= 0 for u in c.halfspaces)
            assert c.contains(x) == in_h
        for g in c.generators:
            assert all(linalg.dot(u, g) <= 0 for u in c.halfspaces)


def test_float_backend_matches_exact(rng):
    for eps in (1e-12, 1e-9, 1e-6):
        ar = float_arith(eps)
        for _ in range(60):
            n = rng.randint(2, 4)
            hs = random_covectors(rng, n, rng.randint(0, n + 3))
            exact = kernel.dd_convert(hs, n)
            approx = kernel.dd_convert(hs, n, ar)
            assert len(approx.generators) == len(exact.generators)
            assert len(approx.lineality_basis) == len(exact.lineality_basis)
            assert len(approx.facets) == len(exact.facets)
            for g in exact.generators:
                assert approx.contains(EXACT.to_float(g))


def test_extreme_rays_match_subset_enumeration(rng):
    checked = 0
    while checked < 80:
        n = rng.randint(2, 4)
        hs = random_covectors(rng, n, rng.randint(n, n + 4))
        c = kernel.dd_convert(hs, n)
        if not c.is_pointed:
            continue
        assert set(c.generators) == oracles.extreme_rays(hs, n)
        checked += 1
