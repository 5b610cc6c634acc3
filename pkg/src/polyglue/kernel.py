"""Polyhedral cones with synchronized halfspace and generator descriptions.

Convention: a covector ``u`` stands for the closed halfspace ``{x : u.x <= 0}``.
A cone is stored in a canonical form:

* ``lineality_basis``: reduced echelon basis of C ∩ -C,
* ``generators``: extreme rays modulo the lineality space, projected onto its
  orthogonal complement and scaled to primitive integers,
* ``equations``: reduced echelon basis of span(C)^⊥,
* ``facets``: irredundant facet covectors projected into span(C).

Two cones are equal exactly when their canonical forms coincide.  Every
conversion runs the double description method twice (H→V then V→H, or the
reverse), which also yields irredundancy for free.
"""
from dataclasses import dataclass, field

from .arith import EXACT
from .errors import InputError


class DoubleDescription:
    """Incremental double description in R^n, one halfspace at a time."""

    def __init__(self, n, arith=EXACT):
        self.ar = arith
        self.n = n
        self.lin = [arith.unit(n, i) for i in range(n)]
        self.rays = []  # (vector, bitmask of tight constraints)
        self.count = 0

    def copy(self):
        dd = DoubleDescription.__new__(DoubleDescription)
        dd.ar, dd.n, dd.count = self.ar, self.n, self.count
        dd.lin = list(self.lin)
        dd.rays = list(self.rays)
        return dd

    def add(self, a):
        ar = self.ar
        bit = 1 << self.count
        self.count += 1
        vals = [ar.dot(a, l) for l in self.lin]
        k = ar.pick(vals)
        if k is not None:
            pivot, v0 = self.lin[k], vals[k]
            if v0 > 0:
                pivot, v0 = ar.neg(pivot), -v0
            self.lin = [ar.kill(l, pivot, v, v0)
                        for i, (l, v) in enumerate(zip(self.lin, vals)) if i != k]
            rays = []
            for r, z in self.rays:
                v = ar.dot(a, r)
                if ar.sign(v):
                    r = ar.lift(r, pivot, v, v0)
                rays.append((r, z | bit))
            rays.append((pivot, bit - 1))
            self.rays = rays
            return self
        pos, neg, keep = [], [], []
        for i, (r, z) in enumerate(self.rays):
            v = ar.dot(a, r)
            s = ar.sign(v)
            if s < 0:
                neg.append((i, r, z, v))
                keep.append((r, z))
            elif s == 0:
                keep.append((r, z | bit))
            else:
                pos.append((i, r, z, v))
        if pos and neg:
            need = self.n - len(self.lin) - 2
            masks = [z for _, z in self.rays]
            for ip, p, zp, vp in pos:
                for iq, q, zq, vq in neg:
                    common = zp & zq
                    if bin(common).count("1") < need:
                        continue
                    blocked = False
                    for j, z in enumerate(masks):
                        if j != ip and j != iq and z & common == common:
                            blocked = True
                            break
                    if not blocked:
                        keep.append((ar.combine(p, q, vp, vq), common | bit))
        self.rays = keep
        return self

    def extend(self, covectors):
        for a in covectors:
            self.add(a)
        return self

    def dimension(self):
        return len(self.lin) + self.ar.rank([r for r, _ in self.rays], self.n)


def _dd(n, constraints, arith):
    dd = DoubleDescription(n, arith).extend(constraints)
    return [r for r, _ in dd.rays], dd.lin


def _canonical_pair(n, vectors, lines, arith):
    """Canonical (vectors mod lines, line basis) for either a V- or an H-pair."""
    basis = arith.subspace(lines, n)
    seen = {}
    for v in vectors:
        w = arith.project_off(v, basis)
        if arith.is_zero(w):
            continue
        seen.setdefault(arith.key(w), w)
    return tuple(seen[k] for k in sorted(seen)), tuple(basis)


@dataclass(frozen=True, eq=False)
class Cone:
    """A polyhedral cone in R^ambient_dim (see module docstring for the form)."""

    ambient_dim: int
    generators: tuple
    lineality_basis: tuple
    facets: tuple
    equations: tuple
    arith: object = field(default=EXACT, repr=False)

    @property
    def halfspaces(self):
        ar = self.arith
        out = list(self.facets)
        for e in self.equations:
            out.append(e)
            out.append(ar.neg(e))
        return tuple(out)

    @property
    def dim(self):
        """Dimension of the linear span (spherical dimension + 1)."""
        return self.ambient_dim - len(self.equations)

    @property
    def is_pointed(self):
        return not self.lineality_basis

    @property
    def is_full(self):
        return not self.equations

    @property
    def is_zero(self):
        return not self.generators and not self.lineality_basis

    def contains(self, x):
        ar = self.arith
        return all(ar.sign(ar.dot(f, x)) <= 0 for f in self.facets) and \
            all(ar.sign(ar.dot(e, x)) == 0 for e in self.equations)

    def contains_relint(self, x):
        ar = self.arith
        return all(ar.sign(ar.dot(f, x)) < 0 for f in self.facets) and \
            all(ar.sign(ar.dot(e, x)) == 0 for e in self.equations)

    def interior_point(self):
        """A point of the relative interior (sum of generators, lines ignored)."""
        n = self.ambient_dim
        if not self.generators:
            return tuple(0 for _ in range(n))
        acc = [0] * n
        for g in self.generators:
            for i, x in enumerate(g):
                acc[i] += x
        return self.arith.vector(acc)

    def negate(self):
        ar = self.arith
        return Cone(self.ambient_dim, tuple(sorted((ar.neg(g) for g in self.generators), key=ar.key)),
                    self.lineality_basis, tuple(sorted((ar.neg(f) for f in self.facets), key=ar.key)),
                    self.equations, ar)

    def _signature(self):
        return (self.ambient_dim, self.generators, self.lineality_basis)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        if self.arith.exact and other.arith.exact:
            return self._signature() == other._signature() and self.facets == other.facets
        return equal(self, other)

    def __hash__(self):
        if self.arith.exact:
            return hash(self._signature())
        return hash((self.ambient_dim, len(self.generators), len(self.lineality_basis)))

    def __repr__(self):
        return (f"Cone(dim={self.ambient_dim}, rays={len(self.generators)}, "
                f"lines={len(self.lineality_basis)}, facets={len(self.facets)}, "
                f"equations={len(self.equations)})")


def _check_vectors(vectors, n, what):
    out = []
    for i, v in enumerate(vectors):
        v = tuple(v)
        if len(v) != n:
            raise InputError(f"{what} {i} has length {len(v)}, expected {n}")
        out.append(v)
    return out


def _assemble(n, rays, lins, facets, eqs, arith):
    gens, lin = _canonical_pair(n, rays, lins, arith)
    fac, eq = _canonical_pair(n, facets, eqs, arith)
    return Cone(n, gens, lin, fac, eq, arith)


def dd_convert(halfspaces, ambient_dim, arith=EXACT):
    """Cone {x : u.x <= 0 for u in halfspaces} with both descriptions."""
    if ambient_dim < 1:
        raise InputError("ambient dimension must be positive")
    hs = [arith.vector(u) for u in _check_vectors(halfspaces, ambient_dim, "covector")]
    rays, lins = _dd(ambient_dim, hs, arith)
    gens, lin = _canonical_pair(ambient_dim, rays, lins, arith)
    dual_cons = list(gens) + list(lin) + [arith.neg(l) for l in lin]
    frays, flins = _dd(ambient_dim, dual_cons, arith)
    fac, eq = _canonical_pair(ambient_dim, frays, flins, arith)
    return Cone(ambient_dim, gens, lin, fac, eq, arith)


def from_generators(rays, ambient_dim, lineality=(), arith=EXACT):
    """Cone generated by ``rays`` plus the span of ``lineality``."""
    if ambient_dim < 1:
        raise InputError("ambient dimension must be positive")
    rays = [arith.vector(r) for r in _check_vectors(rays, ambient_dim, "ray")]
    lineality = [arith.vector(r) for r in _check_vectors(lineality, ambient_dim, "line")]
    cons = list(rays) + list(lineality) + [arith.neg(l) for l in lineality]
    frays, flins = _dd(ambient_dim, cons, arith)
    fac, eq = _canonical_pair(ambient_dim, frays, flins, arith)
    vcons = list(fac) + list(eq) + [arith.neg(e) for e in eq]
    vrays, vlins = _dd(ambient_dim, vcons, arith)
    gens, lin = _canonical_pair(ambient_dim, vrays, vlins, arith)
    return Cone(ambient_dim, gens, lin, fac, eq, arith)


def _trusted(ambient_dim, rays, facets, arith=EXACT):
    """Pointed full-dimensional cone from already-irredundant data (no DD)."""
    key = arith.key
    gens = tuple(sorted({key(r): r for r in rays}.values(), key=key))
    fac = tuple(sorted({key(f): f for f in facets}.values(), key=key))
    return Cone(ambient_dim, gens, (), fac, (), arith)


def _same_dim(c, d):
    if c.ambient_dim != d.ambient_dim:
        raise InputError(f"dimension mismatch: {c.ambient_dim} vs {d.ambient_dim}")


def contains(c, x):
    if len(x) != c.ambient_dim:
        raise InputError("dimension mismatch")
    return c.contains(c.arith.vector(x) if not c.arith.exact else tuple(x))


def contains_cone(c, d):
    """True iff d ⊆ c."""
    _same_dim(c, d)
    ar = c.arith
    if not all(c.contains(g) for g in d.generators):
        return False
    return all(c.contains(l) and c.contains(ar.neg(l)) for l in d.lineality_basis)


def equal(c, d):
    _same_dim(c, d)
    if c.arith.exact and d.arith.exact:
        return c._signature() == d._signature() and c.facets == d.facets
    return contains_cone(c, d) and contains_cone(d, c)


def intersect(c, d):
    _same_dim(c, d)
    return dd_convert(list(c.halfspaces) + list(d.halfspaces), c.ambient_dim, c.arith)


def hull_union(c, d):
    """conv(C ∪ D), realized as the cone generated by both generator sets."""
    _same_dim(c, d)
    return from_generators(list(c.generators) + list(d.generators), c.ambient_dim,
                           list(c.lineality_basis) + list(d.lineality_basis), c.arith)


def hull_of(cones, ambient_dim, arith=EXACT):
    rays, lins = [], []
    for c in cones:
        rays.extend(c.generators)
        lins.extend(c.lineality_basis)
    return from_generators(rays, ambient_dim, lins, arith)


def dual_cone(c):
    """C* = {u : u.x <= 0 for all x in C}; generators and halfspaces swap roles."""
    return Cone(c.ambient_dim, c.facets, c.equations, c.generators, c.lineality_basis, c.arith)


def zero_cone(n, arith=EXACT):
    return Cone(n, (), (), (), tuple(arith.unit(n, i) for i in range(n)), arith)


def full_space(n, arith=EXACT):
    return Cone(n, (), tuple(arith.unit(n, i) for i in range(n)), (), (), arith)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def as_cone(self, arith=EXACT):
        return from_generators((), self.ambient_dim, self.basis, arith)


def subspace(vectors, ambient_dim, arith=EXACT):
    vectors = _check_vectors(vectors, ambient_dim, "vector")
    return Subspace(ambient_dim, arith.subspace(vectors, ambient_dim))


def orthogonal_complement(s, arith=EXACT):
    return Subspace(s.ambient_dim, arith.nullspace(s.basis, s.ambient_dim))


def project(s, x):
    """Orthogonal projection of x onto S (exact; rational output)."""
    from . import linalg
    if len(x) != s.ambient_dim:
        raise InputError("dimension mismatch")
    return linalg.project_onto(tuple(x), s.basis)


def lineality_decomposition(c):
    """(l(C), C ∩ l(C)^⊥)."""
    ar = c.arith
    lin = Subspace(c.ambient_dim, c.lineality_basis)
    cons = list(c.halfspaces)
    for l in c.lineality_basis:
        cons.append(l)
        cons.append(ar.neg(l))
    return lin, dd_convert(cons, c.ambient_dim, ar)


def strictly_feasible(n, equations=(), weak=(), strict=(), arith=EXACT):
    """Find x with e.x = 0, w.x <= 0 and s.x < 0; returns x or None.

    Decided by one double description: on the closed cone K cut out by all
    constraints, every strict covector must be negative on some generator of
    K; the sum of the generators is then a witness.
    """
    cons = []
    for e in equations:
        cons.append(e)
        cons.append(arith.neg(e))
    cons.extend(weak)
    cons.extend(strict)
    rays, _ = _dd(n, [arith.vector(c) for c in cons], arith)
    for s in strict:
        if not any(arith.sign(arith.dot(s, r)) < 0 for r in rays):
            return None
    acc = [0] * n
    for r in rays:
        for i, x in enumerate(r):
            acc[i] += x
    if not strict:
        return tuple(acc)
    return arith.vector(acc)


def separated(c, d):
    """Cheap sufficient test that interiors are disjoint: a facet of one cone
    has every generator of the other on its far side."""
    ar = c.arith
    for f in c.facets:
        if all(ar.sign(ar.dot(f, g)) >= 0 for g in d.generators) and \
                all(ar.sign(ar.dot(f, l)) == 0 for l in d.lineality_basis):
            return True
    for f in d.facets:
        if all(ar.sign(ar.dot(f, g)) >= 0 for g in c.generators) and \
                all(ar.sign(ar.dot(f, l)) == 0 for l in c.lineality_basis):
            return True
    return False


def interiors_overlap(c, d):
    """True iff C ∩ D has full dimension (both cones assumed full-dimensional)."""
    _same_dim(c, d)
    if separated(c, d):
        return False
    return intersect(c, d).dim == c.ambient_dim


def covered_by(target, pieces):
    """Decide target ⊆ ∪ pieces for cones living in the span of ``target``.

    Pieces of lower dimension than the target are irrelevant; the routine
    repeatedly subtracts each piece (splitting along its facets) and reports
    whether nothing of full relative dimension survives.
    """
    ar = target.arith
    n = target.ambient_dim
    d = target.dim
    work = [target]
    span_eqs = []
    for e in target.equations:
        span_eqs.append(e)
        span_eqs.append(ar.neg(e))
    for g in pieces:
        if not work:
            break
        g_in = dd_convert(list(g.halfspaces) + span_eqs, n, ar)
        if g_in.dim < d:
            continue
        nxt = []
        for q in work:
            if intersect(q, g_in).dim < d:
                nxt.append(q)
                continue
            prev = []
            for f in g_in.facets:
                piece = dd_convert(list(q.halfspaces) + [ar.neg(f)] + prev, n, ar)
                if piece.dim == d:
                    nxt.append(piece)
                prev.append(f)
        work = nxt
    return not work


RationalCone = Cone
