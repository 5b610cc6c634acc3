"""Number backends for the cone engine.

The exact backend keeps every ray as a primitive integer tuple, so signs are
decided without error.  The float backend mirrors the same interface with an
absolute tolerance ``eps`` on dot products of unit vectors; it exists for
inputs with irrational coordinates (icosahedron, dodecahedron).
"""
import math

import numpy as np

from . import linalg


class ExactArith:
    name = "exact"
    exact = True
    eps = 0

    def vector(self, v):
        return linalg.primitive(v)

    def line(self, v):
        return linalg.sign_normalized(v)

    def unit(self, n, i):
        return tuple(int(i == j) for j in range(n))

    def dot(self, a, b):
        return sum(x * y for x, y in zip(a, b))

    def sign(self, x):
        return (x > 0) - (x < 0)

    def neg(self, v):
        return tuple(-x for x in v)

    def pick(self, vals):
        for i, v in enumerate(vals):
            if v:
                return i
        return None

    def combine(self, p, q, vp, vq):
        # vp > 0 > vq; the result is a positive combination vanishing on the new constraint
        return linalg.primitive(tuple(vp * y - vq * x for x, y in zip(p, q)))

    def kill(self, line, pivot, v, v0):
        return linalg.primitive(tuple(v0 * x - v * y for x, y in zip(line, pivot)))

    def lift(self, ray, pivot, v, v0):
        return linalg.primitive(tuple(-v0 * x + v * y for x, y in zip(ray, pivot)))

    def rank(self, vectors, n):
        return linalg.rank(list(vectors), n)

    def subspace(self, vectors, n):
        return linalg.row_basis(list(vectors), n)

    def nullspace(self, vectors, n):
        return linalg.nullspace(list(vectors), n)

    def project_off(self, v, basis):
        if not basis:
            return linalg.primitive(v)
        return linalg.primitive(linalg.project_off(v, basis))

    def key(self, v):
        return v

    def same(self, a, b):
        return a == b

    def is_zero(self, v):
        return not any(v)

    def to_float(self, v):
        return tuple(float(x) for x in v)


class FloatArith:
    name = "float"
    exact = False

    def __init__(self, eps=1e-9):
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.eps = float(eps)

    def _unit(self, v):
        v = [float(x) for x in v]
        nrm = math.sqrt(sum(x * x for x in v))
        if nrm <= self.eps:
            return tuple(0.0 for _ in v)
        return tuple(x / nrm for x in v)

    def vector(self, v):
        return self._unit(v)

    def line(self, v):
        u = self._unit(v)
        for x in u:
            if abs(x) > self.eps:
                return u if x > 0 else tuple(-y for y in u)
        return u

    def unit(self, n, i):
        return tuple(float(i == j) for j in range(n))

    def dot(self, a, b):
        return sum(x * y for x, y in zip(a, b))

    def sign(self, x):
        if x > self.eps:
            return 1
        if x < -self.eps:
            return -1
        return 0

    def neg(self, v):
        return tuple(-x for x in v)

    def pick(self, vals):
        best, arg = self.eps, None
        for i, v in enumerate(vals):
            if abs(v) > best:
                best, arg = abs(v), i
        return arg

    def combine(self, p, q, vp, vq):
        return self._unit(tuple(vp * y - vq * x for x, y in zip(p, q)))

    def kill(self, line, pivot, v, v0):
        return self._unit(tuple(v0 * x - v * y for x, y in zip(line, pivot)))

    def lift(self, ray, pivot, v, v0):
        return self._unit(tuple(-v0 * x + v * y for x, y in zip(ray, pivot)))

    def _svd(self, vectors, n):
        m = np.array([list(v) for v in vectors], dtype=float).reshape(-1, n)
        if m.shape[0] == 0:
            return np.zeros(0), np.zeros((n, n)) + np.eye(n)
        _, s, vt = np.linalg.svd(m)
        return s, vt

    def rank(self, vectors, n):
        vectors = list(vectors)
        if not vectors:
            return 0
        s, _ = self._svd(vectors, n)
        return int(np.sum(s > max(self.eps, 1e-13) * 10))

    def subspace(self, vectors, n):
        vectors = list(vectors)
        r = self.rank(vectors, n)
        if r == 0:
            return ()
        _, vt = self._svd(vectors, n)
        return tuple(self.line(tuple(row)) for row in vt[:r])

    def nullspace(self, vectors, n):
        vectors = list(vectors)
        r = self.rank(vectors, n)
        if not vectors:
            return tuple(self.unit(n, i) for i in range(n))
        _, vt = self._svd(vectors, n)
        return tuple(self.line(tuple(row)) for row in vt[r:])

    def project_off(self, v, basis):
        v = np.array(v, dtype=float)
        for b in basis:  # bases produced here are orthonormal
            b = np.array(b, dtype=float)
            v = v - np.dot(v, b) * b
        return self._unit(tuple(v))

    def key(self, v):
        return tuple(round(x, 7) + 0.0 for x in v)

    def same(self, a, b):
        return all(abs(x - y) <= 1e3 * self.eps + 1e-9 for x, y in zip(a, b))

    def is_zero(self, v):
        return all(abs(x) <= self.eps for x in v)

    def to_float(self, v):
        return tuple(float(x) for x in v)


EXACT = ExactArith()


def float_arith(eps=1e-9):
    return FloatArith(eps)
