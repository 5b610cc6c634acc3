"""Built-in gluing specifications.

Facet indices are looked up from vertex coordinates, so the specs stay correct
whatever order the polytope builder assigns to facets.
"""
from fractions import Fraction
from itertools import product

from .complex import GluingSpec, ProjectiveTransform
from .polytope import build

F = Fraction


def _poly(points, name):
    return build(vertices=[tuple(p) + (1,) for p in points], name=name)


def _facet_through(p, points):
    rays = {tuple(F(x) for x in pt) + (F(1),) for pt in points}
    want = frozenset(p.vertex_index(r) for r in rays)
    for i, fv in enumerate(p.facet_vertices):
        if want <= fv:
            return i
    raise ValueError(f"no facet of {p.name} through {points}")


def translation(*shift):
    n = len(shift)
    rows = [[int(i == j) for j in range(n)] + [shift[i]] for i in range(n)]
    rows.append([0] * n + [1])
    return rows


def _linear(block):
    n = len(block)
    return [list(r) + [0] for r in block] + [[0] * n + [1]]


def _rotation_about(center, block):
    """Affine map x ↦ block·(x - c) + c in homogeneous coordinates."""
    n = len(block)
    shift = [center[i] - sum(block[i][j] * center[j] for j in range(n)) for i in range(n)]
    return [list(block[i]) + [shift[i]] for i in range(n)] + [[0] * n + [1]]


def _assemble(dimension, polys, glue):
    """glue: list of (src name, src points, dst name, dst points, matrix); inverses added."""
    index = {p.name: i for i, p in enumerate(polys)}
    pairs = {}
    for sname, spts, dname, dpts, m in glue:
        t = ProjectiveTransform(m)
        s = (index[sname], _facet_through(polys[index[sname]], spts))
        d = (index[dname], _facet_through(polys[index[dname]], dpts))
        pairs[s] = (d, t)
        pairs[d] = (s, t.inverse())
    return GluingSpec(dimension, polys, pairs)


def square_torus():
    sq = _poly([(0, 0), (1, 0), (1, 1), (0, 1)], "Q")
    return _assemble(2, [sq], [
        ("Q", [(0, 0), (0, 1)], "Q", [(1, 0), (1, 1)], translation(1, 0)),
        ("Q", [(0, 0), (1, 0)], "Q", [(0, 1), (1, 1)], translation(0, 1)),
    ])


def cube_torus():
    cube = _poly(list(product((0, 1), repeat=3)), "C")
    glue = []
    for axis in range(3):
        lo = [p for p in product((0, 1), repeat=3) if p[axis] == 0]
        hi = [p for p in product((0, 1), repeat=3) if p[axis] == 1]
        shift = [int(i == axis) for i in range(3)]
        glue.append(("C", lo, "C", hi, translation(*shift)))
    return _assemble(3, [cube], glue)


def benoist_triangles():
    a, b, c, d = (1, 0), (2, 0), (0, 2), (0, 1)
    f, g = (F(1, 3), F(2, 3)), (F(2, 3), F(4, 3))
    polys = [_poly([a, b, g], "T1"), _poly([a, g, f], "T2"),
             _poly([f, g, d], "T3"), _poly([d, g, c], "T4")]
    ident = _linear([[1, 0], [0, 1]])
    rot = _linear([[0, -1], [1, 0]])
    homothety = _linear([[2, 0], [0, 2]])
    return _assemble(2, polys, [
        ("T1", [a, g], "T2", [a, g], ident),
        ("T2", [f, g], "T3", [f, g], ident),
        ("T3", [d, g], "T4", [d, g], ident),
        ("T1", [a, b], "T4", [d, c], rot),
        ("T2", [a, f], "T1", [b, g], homothety),
        ("T3", [f, d], "T4", [g, c], homothety),
    ])


def hexagon_torus():
    hexagon = _poly([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)], "H")
    return _assemble(2, [hexagon], [
        ("H", [(-1, 0), (-1, -1)], "H", [(1, 1), (1, 0)], translation(2, 1)),
        ("H", [(-1, -1), (0, -1)], "H", [(0, 1), (1, 1)], translation(1, 2)),
        ("H", [(0, -1), (1, 0)], "H", [(-1, 0), (0, 1)], translation(-1, 1)),
    ])


def right_isosceles_wallpaper():
    """The square [0,2]² cut along both diagonals, glued as a torus."""
    m = (1, 1)
    c00, c20, c22, c02 = (0, 0), (2, 0), (2, 2), (0, 2)
    polys = [_poly([c00, c20, m], "B"), _poly([c20, c22, m], "R"),
             _poly([c22, c02, m], "T"), _poly([c02, c00, m], "L")]
    ident = _linear([[1, 0], [0, 1]])
    return _assemble(2, polys, [
        ("B", [c20, m], "R", [c20, m], ident),
        ("R", [c22, m], "T", [c22, m], ident),
        ("T", [c02, m], "L", [c02, m], ident),
        ("L", [c00, m], "B", [c00, m], ident),
        ("B", [c00, c20], "T", [c02, c22], translation(0, 2)),
        ("L", [c00, c02], "R", [c20, c22], translation(2, 0)),
    ])


def twisted_square():
    """Square whose corner cycles close after one or two squares (not a manifold)."""
    sq = _poly([(-1, -1), (1, -1), (1, 1), (-1, 1)], "S")
    clockwise = [[0, 1], [-1, 0]]
    return _assemble(2, [sq], [
        ("S", [(1, -1), (1, 1)], "S", [(-1, 1), (1, 1)], _rotation_about((1, 1), clockwise)),
        ("S", [(-1, -1), (-1, 1)], "S", [(-1, -1), (1, -1)],
         _rotation_about((-1, -1), clockwise)),
    ])


def broken_inverse_torus():
    """Square torus with one pairing no longer inverse to its partner."""
    spec = square_torus()
    pairs = dict(spec.raw_pairings)
    key = min(pairs)
    dst, t = pairs[key]
    skew = [list(r) for r in t.matrix]
    skew[0][1] += 1
    pairs[key] = (dst, ProjectiveTransform(skew))
    return GluingSpec(spec.dimension, spec.polytopes, pairs)


SPECS = {
    "square-torus": square_torus,
    "cube-3-torus": cube_torus,
    "benoist-triangles": benoist_triangles,
    "hexagon-torus": hexagon_torus,
    "right-isosceles-wallpaper": right_isosceles_wallpaper,
    "twisted-square": twisted_square,
    "broken-inverse-torus": broken_inverse_torus,
}


def fixture(name):
    try:
        return SPECS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(SPECS)}") from None


def fixtures():
    """Every built-in spec plus the polytope catalog, keyed by name."""
    from . import catalog
    out = {name: make() for name, make in SPECS.items()}
    for name in catalog.NAMES:
        out[name] = catalog.polytope(name)
    return out
