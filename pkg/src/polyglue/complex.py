"""Projective facet-pairings of polytope families and their local checks.

Gluing data is exact: every pairing matrix is rational.  The checks here are
local (one facet or one ridge cycle at a time); the global development lives
in :mod:`polyglue.developer`.
"""
from dataclasses import dataclass, field
from functools import cmp_to_key

from . import kernel, linalg
from .errors import InputError
from .polytope import SphericalPolytope, dual, is_thin, is_triangular


class ProjectiveTransform:
    """Invertible rational matrix modulo positive scalars.

    The canonical form is the primitive integer multiple (content 1, positive
    factor).  The sign is kept: ``-I`` is the antipodal map, not the identity.
    """

    __slots__ = ("matrix", "_inv", "_hash")

    def __init__(self, matrix):
        rows = [tuple(r) for r in matrix]
        size = len(rows)
        if size == 0 or any(len(r) != size for r in rows):
            raise InputError("transform matrix must be square")
        flat = linalg.primitive([x for r in rows for x in r])
        if not any(flat):
            raise InputError("transform matrix is zero")
        self.matrix = tuple(flat[i * size:(i + 1) * size] for i in range(size))
        if linalg.determinant(self.matrix) == 0:
            raise InputError("transform matrix is singular")
        self._inv = None
        self._hash = hash(self.matrix)

    @classmethod
    def identity(cls, size):
        return cls(linalg.identity(size))

    @property
    def size(self):
        return len(self.matrix)

    def __eq__(self, other):
        return isinstance(other, ProjectiveTransform) and self.matrix == other.matrix

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.matrix < other.matrix

    def __repr__(self):
        return f"ProjectiveTransform({[list(r) for r in self.matrix]})"

    def compose(self, other):
        """self ∘ other."""
        return ProjectiveTransform(linalg.mat_mul(self.matrix, other.matrix))

    __matmul__ = compose

    def inverse(self):
        if self._inv is None:
            inv = ProjectiveTransform(linalg.mat_inverse(self.matrix))
            inv._inv = self
            self._inv = inv
        return self._inv

    def is_identity(self):
        return self.matrix == linalg.identity(self.size)

    def apply_ray(self, v):
        return linalg.primitive(linalg.mat_vec(self.matrix, v))

    def apply_covector(self, u):
        """Covector of the image halfspace: u ∘ M^{-1}."""
        return linalg.primitive(linalg.vec_mat(u, self.inverse().matrix))

    def apply_cone(self, cone):
        rays = [self.apply_ray(g) for g in cone.generators]
        if cone.is_full and cone.is_pointed:
            return kernel._trusted(cone.ambient_dim, rays,
                                   [self.apply_covector(f) for f in cone.facets])
        lins = [self.apply_ray(l) for l in cone.lineality_basis]
        return kernel.from_generators(rays, cone.ambient_dim, lins)

    def to_list(self):
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class Pairing:
    src: tuple               # (polytope id, facet id)
    dst: tuple
    transform: ProjectiveTransform
    vertex_map: dict = field(default_factory=dict, compare=False)   # src vertex -> dst vertex
    face_map: dict = field(default_factory=dict, compare=False)     # src face -> dst face


class GluingSpec:
    """A polytope family with a facet pairing map σ ↦ (σ', φ_σ)."""

    def __init__(self, dimension, polytopes, pairings, names=None):
        self.dimension = dimension
        self.polytopes = tuple(polytopes)
        self.names = tuple(names) if names else tuple(
            p.name or f"P{i}" for i, p in enumerate(self.polytopes))
        for i, p in enumerate(self.polytopes):
            if not isinstance(p, SphericalPolytope) or not p.arith.exact:
                raise InputError("gluing specs need exact polytopes", f"polytopes[{i}]")
            if p.ambient_dim != dimension + 1 or not p.cone.is_full:
                raise InputError(f"expected a full {dimension}-polytope", f"polytopes[{i}]")
        self.raw_pairings = {}
        for src, (dst, t) in pairings.items():
            if not isinstance(t, ProjectiveTransform):
                t = ProjectiveTransform(t)
            if t.size != dimension + 1:
                raise InputError("matrix size does not match the dimension", f"pairing {src}")
            self.raw_pairings[tuple(src)] = (tuple(dst), t)
        self._pairings = {}

    def facets(self):
        return [(i, f) for i, p in enumerate(self.polytopes) for f in range(len(p.facets))]

    def facet_face(self, sigma):
        pid, fid = sigma
        return self.polytopes[pid].lattice.facet_ids[fid]

    def pairing(self, sigma):
        """The pairing at σ with its vertex and face correspondences."""
        sigma = tuple(sigma)
        if sigma in self._pairings:
            return self._pairings[sigma]
        if sigma not in self.raw_pairings:
            raise InputError(f"facet {sigma} is not paired")
        dst, t = self.raw_pairings[sigma]
        p, q = self.polytopes[sigma[0]], self.polytopes[dst[0]]
        vmap = {}
        for j in sorted(p.facet_vertices[sigma[1]]):
            img = t.apply_ray(p.vertices[j])
            try:
                k = q.vertex_index(img)
            except KeyError:
                raise InputError(f"image of a vertex of {sigma} is not a vertex of {dst}")
            if k not in q.facet_vertices[dst[1]]:
                raise InputError(f"image of a vertex of {sigma} is off the facet {dst}")
            vmap[j] = k
        fmap = {}
        for face in p.lattice.faces:
            if face.vertices <= p.facet_vertices[sigma[1]]:
                img = frozenset(vmap[j] for j in face.vertices)
                if img not in q.lattice.by_vertices:
                    raise InputError(f"pairing {sigma} does not map faces to faces")
                fmap[face.id] = q.lattice.by_vertices[img]
        pr = Pairing(sigma, dst, t, vmap, fmap)
        self._pairings[sigma] = pr
        return pr

    def conjugate(self, g):
        """The gluing spec obtained by moving every polytope by g and conjugating the pairings."""
        moved = [SphericalPolytope(g.apply_cone(p.cone), p.name) for p in self.polytopes]
        reindex = []
        for p, m in zip(self.polytopes, moved):
            reindex.append([m.facet_index(g.apply_covector(f)) for f in p.facets])
        gi = g.inverse()
        pairs = {}
        for (sp, sf), ((dp, df), t) in self.raw_pairings.items():
            pairs[(sp, reindex[sp][sf])] = ((dp, reindex[dp][df]), g @ t @ gi)
        return GluingSpec(self.dimension, moved, pairs, self.names)


# -- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    facet: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def valid(self):
        return not self.violations

    def to_json(self):
        return {"valid": self.valid,
                "violations": [{"kind": v.kind, "facet": list(v.facet), "message": v.message}
                               for v in self.violations]}


def validate(spec):
    out = []
    for sigma in spec.facets():
        if sigma not in spec.raw_pairings:
            out.append(Violation("unpaired", sigma, "facet has no pairing"))
            continue
        dst, t = spec.raw_pairings[sigma]
        if not (0 <= dst[0] < len(spec.polytopes)) or \
                not (0 <= dst[1] < len(spec.polytopes[dst[0]].facets)):
            out.append(Violation("bad-target", sigma, f"target {dst} does not exist"))
            continue
        if dst == sigma:
            out.append(Violation("orbifold", sigma, "facet is paired with itself"))
            continue
        p, q = spec.polytopes[sigma[0]], spec.polytopes[dst[0]]
        try:
            spec.pairing(sigma)
        except InputError as exc:
            out.append(Violation("facet-image", sigma, str(exc)))
            continue
        image = {t.apply_ray(p.vertices[j]) for j in p.facet_vertices[sigma[1]]}
        target = {q.vertices[k] for k in q.facet_vertices[dst[1]]}
        if image != target:
            out.append(Violation("facet-image", sigma, f"φ(σ) differs from {dst}"))
            continue
        meet = kernel.intersect(t.apply_cone(p.cone), q.cone)
        if meet != q.face_cone(spec.facet_face(dst)):
            out.append(Violation("overlap", sigma, f"φ(P) ∩ P' is not the facet {dst}"))
        back = spec.raw_pairings.get(dst)
        if back is None or back[0] != sigma:
            out.append(Violation("inverse", sigma, f"{dst} is not paired back to {sigma}"))
        elif back[1] != t.inverse():
            out.append(Violation("inverse", sigma, f"the pairing of {dst} is not the inverse"))
    for sigma in spec.raw_pairings:
        pid, fid = sigma
        if not (0 <= pid < len(spec.polytopes)) or not (0 <= fid < len(spec.polytopes[pid].facets)):
            out.append(Violation("bad-source", sigma, "pairing for a facet that does not exist"))
    out.sort(key=lambda v: (v.facet, v.kind, v.message))
    return ValidationReport(tuple(out))


# -- ridge cycles ------------------------------------------------------------------

@dataclass(frozen=True)
class RidgeCycle:
    ridges: tuple        # (polytope id, ridge face id), i = 1..r
    exits: tuple         # facet σ_i crossed when leaving P_i
    transforms: tuple    # φ_{σ_i}
    holonomy: ProjectiveTransform

    @property
    def period(self):
        return len(self.ridges)

    @property
    def seed(self):
        return self.ridges[0]


def _other_facet(p, ridge, facet):
    a, b = sorted(p.lattice[ridge].facets)
    return b if facet == a else a


def trace_cycle(spec, pid, ridge, exit_facet):
    p = spec.polytopes[pid]
    start = (pid, ridge, exit_facet)
    state = start
    ridges, exits, ts = [], [], []
    hol = ProjectiveTransform.identity(spec.dimension + 1)
    while True:
        cur_pid, cur_ridge, cur_exit = state
        pr = spec.pairing((cur_pid, cur_exit))
        ridges.append((cur_pid, cur_ridge))
        exits.append((cur_pid, cur_exit))
        ts.append(pr.transform)
        hol = pr.transform @ hol
        npid, nfacet = pr.dst
        nridge = pr.face_map[cur_ridge]
        state = (npid, nridge, _other_facet(spec.polytopes[npid], nridge, nfacet))
        if state == start:
            break
        if len(ridges) > 4 * sum(len(q.lattice) for q in spec.polytopes):
            raise InputError("ridge cycle does not close")
    return RidgeCycle(tuple(ridges), tuple(exits), tuple(ts), hol)


def ridge_cycles(spec):
    seen = set()
    cycles = []
    for pid, p in enumerate(spec.polytopes):
        for e in p.ridges():
            if (pid, e.id) in seen:
                continue
            c = trace_cycle(spec, pid, e.id, min(e.facets))
            seen.update(c.ridges)
            cycles.append(c)
    return cycles


# -- planar wedge geometry -------------------------------------------------------

def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _half(v):
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = _cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


def planar_frame(rays, n):
    """Linear coordinates on span(rays)^⊥ when that complement is a plane."""
    basis = linalg.nullspace(list(rays), n)
    if len(basis) != 2:
        raise InputError("ridge complement is not two-dimensional")
    return basis


def wedge(frame, points):
    """Planar cone generated by the frame coordinates of ``points``."""
    vecs = [linalg.primitive(tuple(linalg.dot(b, x) for b in frame)) for x in points]
    vecs = [v for v in vecs if any(v)]
    return kernel.from_generators(vecs, 2)


def wedges_tile_plane(wedges):
    """Pointed planar cones with pairwise disjoint interiors covering R²."""
    for w in wedges:
        if not w.is_full or not w.is_pointed:
            return False
    for i in range(len(wedges)):
        for j in range(i + 1, len(wedges)):
            if kernel.interiors_overlap(wedges[i], wedges[j]):
                return False
    dirs = sorted({g for w in wedges for g in w.generators}, key=cmp_to_key(_angle_cmp))
    for k, a in enumerate(dirs):
        b = dirs[(k + 1) % len(dirs)]
        if len(dirs) > 1 and _cross(a, b) > 0:
            probe = (a[0] + b[0], a[1] + b[1])
        else:
            probe = (-a[1], a[0])
        if not any(w.contains(probe) for w in wedges):
            return False
    return True


def _wedge_at(spec, frame, pid, g):
    p = spec.polytopes[pid]
    return wedge(frame, [g.apply_ray(v) for v in p.vertices])


@dataclass(frozen=True)
class PoincareResult:
    cycle: RidgeCycle
    holonomy_identity: bool
    link_is_circle: bool

    @property
    def passed(self):
        return self.holonomy_identity and self.link_is_circle

    def to_json(self):
        return {"seed": list(self.cycle.seed), "period": self.cycle.period,
                "holonomy": self.cycle.holonomy.to_list(),
                "holonomy_identity": self.holonomy_identity,
                "link_is_circle": self.link_is_circle}


def check_cycle(spec, cycle):
    """Both local conditions at one ridge cycle."""
    n = spec.dimension + 1
    pid, ridge = cycle.ridges[0]
    p = spec.polytopes[pid]
    frame = planar_frame([p.vertices[j] for j in p.lattice[ridge].vertices], n)
    g = ProjectiveTransform.identity(n)
    wedges = []
    for (cpid, _), t in zip(cycle.ridges, cycle.transforms):
        wedges.append(_wedge_at(spec, frame, cpid, g))
        g = g @ t.inverse()
    return PoincareResult(cycle, cycle.holonomy.is_identity(), wedges_tile_plane(wedges))


def poincare_check(spec):
    return [check_cycle(spec, c) for c in ridge_cycles(spec)]


# -- residual convexity of facet pairs ---------------------------------------------

@dataclass(frozen=True)
class FacetUnionResult:
    facet: tuple
    target: tuple
    ridge_route: bool
    direct_route: bool

    @property
    def agree(self):
        return self.ridge_route == self.direct_route

    @property
    def convex(self):
        return self.ridge_route

    def to_json(self):
        return {"facet": list(self.facet), "target": list(self.target),
                "convex": self.ridge_route, "direct": self.direct_route, "agree": self.agree}


def pair_union_convex(a, b, shared_ridges, n):
    """Ridge-link and direct verdicts for A ∪ B glued along a common facet.

    ``shared_ridges`` lists the vertex rays of each ridge of the common facet.
    """
    ridge_ok = True
    for rays in shared_ridges:
        frame = planar_frame(rays, n)
        wa = wedge(frame, a.generators)
        wb = wedge(frame, b.generators)
        if not halfplane_contains(wa, wb):
            ridge_ok = False
            break
    direct = kernel.covered_by(kernel.hull_union(a, b), [a, b])
    return ridge_ok, direct


def halfplane_contains(*cones):
    gens = [g for c in cones for g in c.generators]
    lins = [l for c in cones for l in c.lineality_basis]
    return len(kernel.from_generators(gens, 2, lins).lineality_basis) < 2


def residual_convexity_check(spec):
    n = spec.dimension + 1
    out = []
    for sigma in spec.facets():
        pr = spec.pairing(sigma)
        p, q = spec.polytopes[sigma[0]], spec.polytopes[pr.dst[0]]
        a = pr.transform.apply_cone(p.cone)
        shared = q.facet_vertices[pr.dst[1]]
        ridges = [[q.vertices[j] for j in e.vertices] for e in q.ridges() if e.vertices <= shared]
        ridge_ok, direct = pair_union_convex(a, q.cone, ridges, n)
        out.append(FacetUnionResult(sigma, pr.dst, ridge_ok, direct))
    return out


# -- classifier scans ------------------------------------------------------------------

def triangular_scan(spec):
    out = []
    for pid, p in enumerate(spec.polytopes):
        tri, witness = is_triangular(p)
        if tri:
            out.append((pid, witness))
    return out


def thickness_scan(spec):
    return [(pid, not is_thin(dual(p))[0]) for pid, p in enumerate(spec.polytopes)]


def hypotheses(spec):
    """(I) no triangular polytope; (II) some polytope has a thick dual."""
    return {"no_triangular": not triangular_scan(spec),
            "thick_dual": any(thick for _, thick in thickness_scan(spec))}
