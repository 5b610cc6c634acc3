"""Named spherical polytopes, given by vertices in the affine chart x_{n+1} = 1."""
import math
from fractions import Fraction
from itertools import permutations, product

from .polytope import build

_GOLDEN = (1 + math.sqrt(5)) / 2


def _homogenize(points):
    return [tuple(p) + (1,) for p in points]


def _cyclic(p):
    return [p, (p[1], p[2], p[0]), (p[2], p[0], p[1])]


def _signed(p):
    out = set()
    for signs in product((1, -1), repeat=len(p)):
        out.add(tuple(s * x for s, x in zip(signs, p)))
    return sorted(out)


PENTAGON = [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)]
HEXAGON = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]


def _points():
    half = Fraction(1, 2)
    truncated = sorted({q for p in permutations((half, 1, 1)) for q in _signed(p)})
    ico = sorted({q for p in _cyclic((0, 1, _GOLDEN)) for q in _signed(p)})
    dodeca = _signed((1, 1, 1)) + sorted(
        {q for p in _cyclic((0, 1 / _GOLDEN, _GOLDEN)) for q in _signed(p)})
    return {
        "triangle": ([(0, 0), (1, 0), (0, 1)], "exact"),
        "square": ([(0, 0), (1, 0), (1, 1), (0, 1)], "exact"),
        "pentagon": (PENTAGON, "exact"),
        "hexagon": (HEXAGON, "exact"),
        "tetrahedron": ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], "exact"),
        "square-pyramid": ([(0, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0), (1, 1, 1)], "exact"),
        "cube": (list(product((0, 1), repeat=3)), "exact"),
        "octahedron": ([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
                       "exact"),
        "pentagonal-prism": ([p + (z,) for z in (0, 1) for p in PENTAGON], "exact"),
        "truncated-cube": (truncated, "exact"),
        "4-simplex": ([(0, 0, 0, 0)] + [tuple(int(i == j) for j in range(4)) for i in range(4)],
                      "exact"),
        "icosahedron": (ico, "float"),
        "dodecahedron": (dodeca, "float"),
    }


NAMES = tuple(_points())


def polytope_vertices(name):
    """Homogenized vertex list and the backend it needs."""
    pts, backend = _points()[name]
    return _homogenize(pts), backend


def polytope(name, eps=1e-9):
    verts, backend = polytope_vertices(name)
    return build(vertices=verts, name=name, backend=backend, eps=eps)


def catalog(eps=1e-9, include_float=True):
    out = {}
    for name in NAMES:
        if _points()[name][1] == "float" and not include_float:
            continue
        out[name] = polytope(name, eps)
    return out
