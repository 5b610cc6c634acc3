"""Spherical polytopes: pointed cones together with their face lattices.

A polytope may sit in a proper subspace of its ambient space (links do);
its spherical dimension is ``dim(span) - 1``.  Faces are identified by the
set of vertex indices they contain; facets are numbered by the
lexicographic order of their canonical covectors.
"""
from dataclasses import dataclass
from itertools import combinations

from . import kernel
from .arith import EXACT, FloatArith
from .errors import InputError, NotAPolytope


@dataclass(frozen=True)
class Face:
    id: int
    dim: int
    facets: frozenset
    vertices: frozenset


class FaceLattice:
    """All nonempty faces, graded by dimension, including the polytope itself."""

    def __init__(self, facet_vertices, nverts):
        full = frozenset(range(nverts))
        sets = {s for s in facet_vertices if s}
        frontier = list(sets)
        while frontier:
            fresh = []
            for s in frontier:
                for fv in facet_vertices:
                    t = s & fv
                    if t and t not in sets:
                        sets.add(t)
                        fresh.append(t)
            frontier = fresh
        sets.add(full)
        by_size = sorted(sets, key=len)
        dims = {}
        for s in by_size:
            below = [dims[t] for t in by_size if len(t) < len(s) and t < s]
            dims[s] = max(below) + 1 if below else 0
        ordered = sorted(sets, key=lambda s: (dims[s], sorted(s)))
        faces = []
        for i, s in enumerate(ordered):
            fs = frozenset(j for j, fv in enumerate(facet_vertices) if s <= fv) if s != full else frozenset()
            faces.append(Face(i, dims[s], fs, s))
        self.faces = tuple(faces)
        self.by_vertices = {f.vertices: f.id for f in faces}
        self.top = self.by_vertices[full]
        # A 0-polytope's only facet is the empty face, which has no id.
        self.facet_ids = tuple(self.by_vertices.get(fv) for fv in facet_vertices)
        self.vertex_ids = tuple(self.by_vertices[frozenset([j])] for j in range(nverts))

    def __len__(self):
        return len(self.faces)

    def __getitem__(self, i):
        return self.faces[i]

    def of_dim(self, k):
        return [f for f in self.faces if f.dim == k]

    def subfaces(self, fid, proper=True):
        vs = self.faces[fid].vertices
        return [g for g in self.faces if g.vertices <= vs and (not proper or g.vertices != vs)]

    def superfaces(self, fid, proper=True):
        vs = self.faces[fid].vertices
        return [g for g in self.faces if vs <= g.vertices and (not proper or g.vertices != vs)]

    def meet(self, a, b):
        """Id of the face a ∩ b, or None when the intersection is empty."""
        s = self.faces[a].vertices & self.faces[b].vertices
        return self.by_vertices.get(s) if s else None


class SphericalPolytope:
    """A line-free polyhedral cone with its face lattice."""

    def __init__(self, cone, name=None):
        if not cone.is_pointed:
            raise NotAPolytope("not a polytope: the cone contains a line")
        if cone.is_zero:
            raise NotAPolytope("not a polytope: empty interior")
        self.cone = cone
        self.name = name
        self.arith = cone.arith
        self.ambient_dim = cone.ambient_dim
        self.dim = cone.dim - 1
        self.vertices = cone.generators
        self.facets = cone.facets
        ar = self.arith
        self.facet_vertices = tuple(
            frozenset(j for j, v in enumerate(self.vertices) if ar.sign(ar.dot(f, v)) == 0)
            for f in self.facets)
        self.lattice = FaceLattice(self.facet_vertices, len(self.vertices))
        if self.lattice[self.lattice.top].dim != self.dim:
            raise NotAPolytope("face lattice grading does not match the cone dimension")
        self._neighbors = None
        self._links = {}

    # -- combinatorics -------------------------------------------------
    def f_vector(self):
        counts = [0] * max(self.dim, 0)
        for f in self.lattice.faces:
            if f.dim < self.dim:
                counts[f.dim] += 1
        return tuple(counts)

    @property
    def neighbors(self):
        """Vertex adjacency along edges."""
        if self._neighbors is None:
            nb = [set() for _ in self.vertices]
            for e in self.lattice.of_dim(1):
                if self.dim >= 1 and len(e.vertices) == 2 and e.id != self.lattice.top:
                    a, b = sorted(e.vertices)
                    nb[a].add(b)
                    nb[b].add(a)
            if self.dim == 1:
                nb = [set(range(len(self.vertices))) - {j} for j in range(len(self.vertices))]
            self._neighbors = tuple(frozenset(s) for s in nb)
        return self._neighbors

    def ridges(self):
        return [f for f in self.lattice.faces if f.dim == self.dim - 2]

    def face_cone(self, fid):
        face = self.lattice[fid]
        return kernel.from_generators([self.vertices[j] for j in sorted(face.vertices)],
                                      self.ambient_dim, arith=self.arith)

    def facet_index(self, covector):
        key = self.arith.vector(covector)
        for i, f in enumerate(self.facets):
            if self.arith.same(f, key):
                return i
        raise KeyError(covector)

    def vertex_index(self, ray):
        key = self.arith.vector(ray)
        for i, v in enumerate(self.vertices):
            if self.arith.same(v, key):
                return i
        raise KeyError(ray)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"<SphericalPolytope {label}dim={self.dim} f={self.f_vector()}>"


def build(halfspaces=None, vertices=None, ambient_dim=None, name=None, full=True,
          backend="exact", eps=1e-9):
    """Polytope from an H- or a V-description."""
    arith = EXACT if backend == "exact" else FloatArith(eps)
    if (halfspaces is None) == (vertices is None):
        raise InputError("give exactly one of halfspaces or vertices")
    data = list(halfspaces if halfspaces is not None else vertices)
    if ambient_dim is None:
        if not data:
            raise InputError("cannot infer the ambient dimension from an empty list")
        ambient_dim = len(data[0])
    if halfspaces is not None:
        cone = kernel.dd_convert(data, ambient_dim, arith)
    else:
        cone = kernel.from_generators(data, ambient_dim, arith=arith)
    if full and not cone.is_full:
        raise NotAPolytope("not a polytope: empty interior in the ambient sphere")
    return SphericalPolytope(cone, name)


def apply_matrix(p, matrix):
    """Image of P under x ↦ M x."""
    from .linalg import mat_vec
    rays = [mat_vec(matrix, v) for v in p.vertices]
    return SphericalPolytope(kernel.from_generators(rays, p.ambient_dim, arith=p.arith), p.name)


# -- links ------------------------------------------------------------------

def link(p, f):
    """Lk(f;P) = P_f ∩ L(f)^⊥, realized inside span(P)."""
    if f == p.lattice.top:
        raise InputError("the link of the whole polytope is undefined")
    if f in p._links:
        return p._links[f]
    ar = p.arith
    face = p.lattice[f]
    cons = [p.facets[i] for i in sorted(face.facets)]
    for e in list(p.cone.equations) + [p.vertices[j] for j in sorted(face.vertices)]:
        cons.append(e)
        cons.append(ar.neg(e))
    lk = SphericalPolytope(kernel.dd_convert(cons, p.ambient_dim, ar))
    p._links[f] = lk
    return lk


def face_in_link(p, e, f):
    """Face id of f_(e;P) = Lk(e;P) ∩ L(f) inside link(p, e)."""
    fe, ff = p.lattice[e], p.lattice[f]
    if not fe.vertices < ff.vertices:
        raise InputError(f"face {e} is not a proper subface of face {f}")
    if f == p.lattice.top:
        raise InputError("f must be a proper face")
    ar = p.arith
    lk = link(p, e)
    ortho = ar.nullspace([p.vertices[j] for j in sorted(ff.vertices)], p.ambient_dim)
    inside = frozenset(i for i, w in enumerate(lk.vertices)
                       if all(ar.sign(ar.dot(w, b)) == 0 for b in ortho))
    fid = lk.lattice.by_vertices.get(inside)
    if fid is None:
        raise InputError("Lk(e) ∩ L(f) is not a face; inconsistent lattice")
    return fid


def dual(p):
    if not p.cone.is_full:
        raise InputError("dual requires a full-dimensional polytope")
    return SphericalPolytope(kernel.dual_cone(p.cone), p.name and f"{p.name}*")


# -- classifiers --------------------------------------------------------------

def _components(cells):
    """Connected components of cells under the face relation."""
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(len(cells)), 2):
        a, b = cells[i].vertices, cells[j].vertices
        if a <= b or b <= a:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(cells))})


def _need_dim2(p):
    if p.dim < 2:
        raise InputError("classifier needs a polytope of dimension at least 2")


def is_triangular(p):
    """(True, (ridge id, face id)) when res(e;∂P) ∩ f is disconnected for some pair."""
    _need_dim2(p)
    lat = p.lattice
    proper = [g for g in lat.faces if g.dim < p.dim]
    for e in p.ridges():
        s1, s2 = sorted(e.facets)
        v1, v2 = p.facet_vertices[s1], p.facet_vertices[s2]
        for f in proper:
            if e.vertices <= f.vertices:
                continue
            cells = [g for g in proper
                     if g.vertices <= f.vertices and (g.vertices <= v1 or g.vertices <= v2)]
            if cells and _components(cells) >= 2:
                return True, (e.id, f.id)
    return False, None


def is_cone_like(p):
    _need_dim2(p)
    fv = p.facet_vertices
    for i, s in enumerate(fv):
        if all(s & t for t in fv):
            return True, i
    return False, None


def _bfs_order(p):
    nb = p.neighbors
    order, seen = [], set()
    for start in range(len(p.vertices)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(nb[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def is_thin(p):
    """(True, covector u) when some hyperplane u^⊥ avoids all vertices and every
    vertex has an edge-neighbour on the opposite side.

    Exhaustive over vertex bipartitions; a partial assignment is abandoned as
    soon as its sign pattern is not strictly linearly realizable (the cone of
    admissible u loses full dimension) or some fully-assigned vertex has all
    its neighbours on its own side.
    """
    _need_dim2(p)
    if not p.cone.is_full:
        raise InputError("thinness is defined for full-dimensional polytopes")
    ar = p.arith
    n = p.ambient_dim
    nb = p.neighbors
    order = _bfs_order(p)
    rank = {v: k for k, v in enumerate(order)}
    closed_at = [max([rank[v]] + [rank[w] for w in nb[v]]) for v in range(len(order))]
    watch = [[] for _ in order]
    for v in range(len(order)):
        watch[closed_at[v]].append(v)
    side = {}

    def dfs(k, dd):
        if k == len(order):
            acc = [0] * n
            for r, _ in dd.rays:
                for i, x in enumerate(r):
                    acc[i] += x
            return ar.vector(acc)
        v = order[k]
        for s in ((1,) if k == 0 else (1, -1)):
            side[v] = s
            if any(all(side[w] == side[x] for x in nb[w]) for w in watch[k]):
                continue
            nxt = dd.copy().add(p.vertices[v] if s == 1 else ar.neg(p.vertices[v]))
            if not _is_full(nxt):
                continue
            found = dfs(k + 1, nxt)
            if found is not None:
                return found
        del side[v]
        return None

    u = dfs(0, kernel.DoubleDescription(n, ar))
    return (True, u) if u is not None else (False, None)


def _is_full(dd):
    mask = (1 << dd.count) - 1
    acc = 0
    for _, z in dd.rays:
        acc |= ~z & mask
        if acc == mask:
            return True
    return acc == mask


def check_cutting_plane(p, u):
    """Independent check of a thinness witness."""
    ar = p.arith
    vals = [ar.sign(ar.dot(u, v)) for v in p.vertices]
    if 0 in vals:
        return False
    return all(any(vals[w] != vals[v] for w in p.neighbors[v]) for v in range(len(vals)))


# -- pavilions ------------------------------------------------------------------

@dataclass(frozen=True)
class Pavilion:
    """pv(v;P) = P° ∖ P(v)° with P(v) = conv({-v} ∪ V(v))."""

    polytope: SphericalPolytope
    vertex: int          # vertex index into polytope.vertices
    region: object       # the cone P(v)
    degenerate: bool     # P(v) has empty interior, so pv(v;P) = P°

    def _in_region_interior(self, x):
        return not self.degenerate and self.region.contains_relint(x)

    def contains(self, x):
        return self.polytope.cone.contains_relint(x) and not self._in_region_interior(x)

    def closure_contains(self, x):
        return self.polytope.cone.contains(x) and not self._in_region_interior(x)

    def base_contains(self, x):
        """x ∈ P° ∩ ∂P(v)."""
        if self.degenerate:
            return self.polytope.cone.contains_relint(x) and self.region.contains(x)
        return self.polytope.cone.contains_relint(x) and self.region.contains(x) \
            and not self.region.contains_relint(x)


def pavilion(p, v):
    """Pavilion at the vertex whose face id is ``v``."""
    face = p.lattice[v]
    if face.dim != 0:
        raise InputError(f"face {v} is not a vertex")
    (j,) = face.vertices
    ar = p.arith
    gens = [ar.neg(p.vertices[j])] + [p.vertices[w] for w in sorted(p.neighbors[j])]
    region = kernel.from_generators(gens, p.ambient_dim, arith=ar)
    return Pavilion(p, j, region, region.dim < p.ambient_dim)


def _hyperplane_meets(pv, h):
    p = pv.polytope
    ar = p.arith
    n = p.ambient_dim
    if pv.degenerate:
        return kernel.strictly_feasible(n, [h], (), p.facets, ar) is not None
    for g in pv.region.facets:
        if kernel.strictly_feasible(n, [h], [ar.neg(g)], p.facets, ar) is not None:
            return True
    return False


def pavilion_hyperplane_test(p, h):
    """True iff the hyperplane h^⊥ meets every pavilion of P."""
    if len(h) != p.ambient_dim or not any(h):
        raise InputError("h must be a nonzero covector of the ambient dimension")
    h = p.arith.vector(h)
    return all(_hyperplane_meets(pavilion(p, vid), h) for vid in p.lattice.vertex_ids)


# -- dual criterion -------------------------------------------------------------

def dual_triangularity_criterion(p):
    """For every edge e* of P*, st(e*;∂P*) ∖ res(e*;∂P*) is disconnected."""
    _need_dim2(p)
    d = dual(p)
    lat = d.lattice
    fv = d.facet_vertices
    proper = [g for g in lat.faces if g.dim < d.dim]
    for edge in lat.of_dim(1):
        res = [s for s in fv if edge.vertices <= s]
        star = [s for s in fv if edge.vertices & s]
        open_cells = [g for g in proper
                      if any(g.vertices <= s for s in star) and not any(g.vertices <= s for s in res)]
        if _components(open_cells) < 2:
            return False
    return True
