"""Development of the universal cover of a glued complex.

Cells of the cover are nodes keyed by ``(polytope id, transform)``.  Nodes are
created by walking ridge cycles; every walk is forced to close up, and a
walk that closes onto a different node than the one already attached merges
the two (coset-enumeration style).  Two nodes are therefore identified only
through ridge relations, never by comparing keys, so two distinct nodes with
equal keys mean the developing map wraps around: the cover is not injected.

Vertices, ridges and all other faces are tracked as classes of
``(node, local face id)`` pairs.  A vertex class is *closed* once every cell
around it has been enumerated; any query that would need an unclosed vertex
raises :class:`NeedsDeeperDevelopment`.
"""
import math
from dataclasses import dataclass, field
from itertools import combinations

from . import kernel, linalg
from .complex import (ProjectiveTransform, halfplane_contains, planar_frame,
                      trace_cycle, validate, poincare_check, residual_convexity_check,
                      triangular_scan, wedge)
from .errors import ConeLikeCell, ConsistencyError, InputError, NeedsDeeperDevelopment
from .polytope import SphericalPolytope, dual, is_thin, pavilion


class _Classes:
    """Union-find over hashable items, with member lists and a closed flag."""

    def __init__(self):
        self.parent = {}
        self.members = {}
        self.closed = set()

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.members[x] = [x]

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if len(self.members[ra]) < len(self.members[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.members[ra].extend(self.members.pop(rb))
        if rb in self.closed:
            self.closed.discard(rb)
            self.closed.add(ra)
        return ra


class _Node:
    __slots__ = ("pid", "transform", "nbr", "halted")

    def __init__(self, pid, transform):
        self.pid = pid
        self.transform = transform
        self.nbr = {}
        self.halted = False


@dataclass(frozen=True)
class Overlap:
    level: int
    cells: tuple
    kind: str            # "wrap": equal keys on distinct cells; "interior": overlapping cones
    explored: int        # number of cells in the explored star when detected
    witness: tuple = ()  # shortest facet-crossing chain joining the two cells inside that star

    def to_json(self):
        return {"level": self.level, "cells": list(self.cells), "kind": self.kind,
                "explored": self.explored, "witness": list(self.witness)}


class DevelopedComplex:
    """The explored part of the universal cover around a base cell."""

    def __init__(self, spec, base=0, base_transform=None):
        if not 0 <= base < len(spec.polytopes):
            raise InputError(f"no polytope with id {base}")
        self.spec = spec
        self.n = spec.dimension
        self._nodes = []
        self._parent = []
        self.faces = _Classes()
        self._cycles = {}
        self._scanned = set()
        self._cones = {}
        self._rays = {}
        self.merges = 0
        self.overlaps = []
        t = base_transform or ProjectiveTransform.identity(self.n + 1)
        self.root = self._new(base, t)
        self._levels = [frozenset([self.root])]
        self.depth = 0

    # -- node bookkeeping ---------------------------------------------------------
    def _new(self, pid, transform):
        nid = len(self._nodes)
        self._nodes.append(_Node(pid, transform))
        self._parent.append(nid)
        for face in self.spec.polytopes[pid].lattice.faces[:-1]:
            self.faces.add((nid, face.id))
        return nid

    def find(self, nid):
        root = nid
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[nid] != root:
            self._parent[nid], nid = root, self._parent[nid]
        return root

    def node(self, nid):
        return self._nodes[self.find(nid)]

    def polytope(self, nid) -> SphericalPolytope:
        return self.spec.polytopes[self.node(nid).pid]

    def key(self, nid):
        nd = self.node(nid)
        return nd.pid, nd.transform

    def cells(self):
        return sorted({self.find(i) for i in range(len(self._nodes))})

    def neighbor(self, nid, facet):
        nb = self.node(nid).nbr.get(facet)
        return None if nb is None else self.find(nb)

    def face_class(self, nid, fid):
        return self.faces.find((self.find(nid), fid))

    def face_cells(self, nid, fid):
        """Sorted (cell, local face) pairs of the class of this face."""
        root = self.face_class(nid, fid)
        return sorted({(self.find(m), f) for m, f in self.faces.members[root]})

    def vertex_class(self, nid, j):
        return self.face_class(nid, self.polytope(nid).lattice.vertex_ids[j])

    def vertex_classes(self, nid):
        p = self.polytope(nid)
        return [self.faces.find((self.find(nid), v)) for v in p.lattice.vertex_ids]

    def is_closed(self, nid, fid):
        return self.face_class(nid, fid) in self.faces.closed

    def explored(self, nid):
        """All vertices of the cell are closed, so every cell meeting it is known."""
        return all(r in self.faces.closed for r in self.vertex_classes(nid))

    def face_explored(self, nid, fid):
        p = self.polytope(nid)
        return any(self.is_closed(nid, p.lattice.vertex_ids[j]) for j in p.lattice[fid].vertices)

    def cone(self, nid):
        nid = self.find(nid)
        if nid not in self._cones:
            nd = self._nodes[nid]
            self._cones[nid] = nd.transform.apply_cone(self.spec.polytopes[nd.pid].cone)
        return self._cones[nid]

    def rays(self, nid):
        """Developed vertex rays, indexed like the base polytope's vertices."""
        nid = self.find(nid)
        if nid not in self._rays:
            nd = self._nodes[nid]
            self._rays[nid] = tuple(nd.transform.apply_ray(v)
                                    for v in self.spec.polytopes[nd.pid].vertices)
        return self._rays[nid]

    def face_rays(self, nid, fid):
        r = self.rays(nid)
        return [r[j] for j in sorted(self.polytope(nid).lattice[fid].vertices)]

    def facet_covector(self, nid, facet):
        nd = self.node(nid)
        return nd.transform.apply_covector(self.spec.polytopes[nd.pid].facets[facet])

    # -- ridge walks ------------------------------------------------------------------
    def _cycle(self, pid, ridge):
        k = (pid, ridge)
        if k not in self._cycles:
            p = self.spec.polytopes[pid]
            self._cycles[k] = trace_cycle(self.spec, pid, ridge, min(p.lattice[ridge].facets))
        return self._cycles[k]

    def _link(self, a, facet, b, pr):
        self._nodes[a].nbr[facet] = b
        back = pr.dst[1]
        other = self._nodes[b].nbr.get(back)
        if other is not None and self.find(other) != a:
            self._merge(other, a)
        else:
            self._nodes[b].nbr[back] = a
        a, b = self.find(a), self.find(b)
        for f, g in pr.face_map.items():
            self.faces.union((a, f), (b, g))

    def _merge(self, x, y):
        queue = [(x, y)]
        while queue:
            x, y = queue.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            nx, ny = self._nodes[x], self._nodes[y]
            if nx.pid != ny.pid or nx.transform != ny.transform:
                raise ConsistencyError(f"ridge relations identify cells {x} and {y} "
                                       "with different keys")
            self._parent[y] = x
            self.merges += 1
            for facet, nb in ny.nbr.items():
                if facet in nx.nbr:
                    queue.append((nx.nbr[facet], nb))
                else:
                    nx.nbr[facet] = nb
            nx.halted = nx.halted or ny.halted
            for face in self.spec.polytopes[nx.pid].lattice.faces[:-1]:
                self.faces.union((x, face.id), (y, face.id))

    def _walk(self, start, ridge):
        start = self.find(start)
        cyc = self._cycle(self._nodes[start].pid, ridge)
        cur = start
        r = cyc.period
        for i in range(r):
            cur = self.find(cur)
            self._scanned.add((cur, cyc.ridges[i][1]))
            sigma = cyc.exits[i]
            pr = self.spec.pairing(sigma)
            nd = self._nodes[cur]
            nb = nd.nbr.get(sigma[1])
            if i < r - 1:
                if nb is None:
                    new = self._new(pr.dst[0], nd.transform @ pr.transform.inverse())
                    self._link(cur, sigma[1], new, pr)
                    nb = new
                cur = self.find(nb)
                continue
            target = self.find(start)
            expected = nd.transform @ pr.transform.inverse()
            tn = self._nodes[target]
            if tn.pid != pr.dst[0] or tn.transform != expected:
                raise ConsistencyError(f"ridge cycle at ({tn.pid}, {ridge}) does not close; "
                                       "run the Poincaré check first")
            if nb is None:
                self._link(cur, sigma[1], target, pr)
            elif self.find(nb) != target:
                self._merge(nb, target)

    def close_vertex(self, nid, j):
        """Enumerate every cell around the j-th vertex of cell nid."""
        vface = self.polytope(nid).lattice.vertex_ids[j]
        if self.is_closed(nid, vface):
            return
        done = set()
        while True:
            root = self.face_class(nid, vface)
            todo = sorted({(self.find(m), f) for m, f in self.faces.members[root]} - done)
            if not todo:
                break
            for m, f in todo:
                m = self.find(m)
                if (m, f) in done:
                    continue
                done.add((m, f))
                p = self.spec.polytopes[self._nodes[m].pid]
                vs = p.lattice[f].vertices
                for e in p.ridges():
                    if vs <= e.vertices and (self.find(m), e.id) not in self._scanned:
                        self._walk(m, e.id)
        self.faces.closed.add(self.face_class(nid, vface))

    def _rescan(self):
        while True:
            before = self.merges
            for m, e in sorted(self._scanned):
                self._walk(m, e)
            if self.merges == before:
                return

    # -- stars --------------------------------------------------------------------------
    def _star_once(self, cells):
        out = set(self.find(c) for c in cells)
        for c in cells:
            if self.node(c).halted:
                continue
            for root in self.vertex_classes(c):
                if root not in self.faces.closed:
                    raise NeedsDeeperDevelopment(f"vertex of cell {self.find(c)} is not closed")
                out.update(self.find(m) for m, _ in self.faces.members[root])
        return frozenset(out)

    def _extend(self):
        last = self._levels[-1]
        for c in sorted(last):
            c = self.find(c)
            if self._nodes[c].halted:
                continue
            for j in range(len(self.polytope(c).vertices)):
                self.close_vertex(c, j)
        self._rescan()
        self._levels = [frozenset(self.find(c) for c in lv) for lv in self._levels]
        self._levels.append(self._star_once(self._levels[-1]))
        self._check_overlaps(len(self._levels) - 2)

    @property
    def levels(self):
        """st^0 ⊆ st^1 ⊆ … ⊆ st^depth, as sets of cell ids."""
        return [frozenset(self.find(c) for c in lv) for lv in self._levels[:self.depth + 1]]

    def depth_of(self, nid):
        nid = self.find(nid)
        for k, lv in enumerate(self.levels):
            if nid in {self.find(c) for c in lv}:
                return k
        return None

    # -- overlaps -------------------------------------------------------------------------
    def _cap(self, nid):
        rays = [_unit(r) for r in self.rays(nid)]
        c = _unit([sum(x) for x in zip(*rays)])
        radius = max(math.acos(max(-1.0, min(1.0, sum(a * b for a, b in zip(c, r)))))
                     for r in rays)
        return c, radius

    def interiors_overlap(self, a, b):
        if self.key(a) == self.key(b):
            return True
        ca, ra = self._cap(a)
        cb, rb = self._cap(b)
        if ra < math.pi / 2 and rb < math.pi / 2:
            ang = math.acos(max(-1.0, min(1.0, sum(x * y for x, y in zip(ca, cb)))))
            if ang > ra + rb + 1e-9:
                return False
        return kernel.interiors_overlap(self.cone(a), self.cone(b))

    def _check_overlaps(self, level):
        cells = sorted({self.find(c) for c in self._levels[level]})
        older = {self.find(c) for c in self._levels[level - 1]} if level > 0 else set()
        fresh = [c for c in cells if c not in older]
        for a in fresh:
            for b in cells:
                if b == a or (b in fresh and b < a):
                    continue
                if self.interiors_overlap(a, b):
                    kind = "wrap" if self.key(a) == self.key(b) else "interior"
                    pair = tuple(sorted((a, b)))
                    chain = self._chain(pair[0], pair[1], set(cells))
                    self.overlaps.append(Overlap(level, pair, kind, len(cells), chain))
                    self._nodes[a].halted = True
                    self._nodes[b].halted = True

    def _chain(self, a, b, allowed):
        prev = {a: None}
        queue = [a]
        for x in queue:
            if x == b:
                break
            for facet in sorted(self.node(x).nbr):
                y = self.neighbor(x, facet)
                if y in allowed and y not in prev:
                    prev[y] = x
                    queue.append(y)
        if b not in prev:
            return ()
        out = [b]
        while prev[out[-1]] is not None:
            out.append(prev[out[-1]])
        return tuple(reversed(out))

    @property
    def injective(self):
        return not self.overlaps

    def summary(self):
        return {"cells": len(self.levels[-1]), "depth": self.depth,
                "per_level": [len(lv) for lv in self.levels],
                "overlaps": [o.to_json() for o in self.overlaps]}


def _unit(v):
    v = [float(x) for x in v]
    s = math.sqrt(sum(x * x for x in v)) or 1.0
    return [x / s for x in v]


def develop(spec, base=0, depth=1, base_transform=None):
    """Explore st^depth of the base cell.

    One extra level is enumerated so that every vertex of st^depth is closed
    and overlaps among st^depth cells are decided with settled identities.
    """
    if depth < 0:
        raise InputError("depth must be non-negative")
    dc = DevelopedComplex(spec, base, base_transform)
    for _ in range(depth + 1):
        dc._extend()
    dc.depth = depth
    return dc


# -- stars and residues -----------------------------------------------------------------

def star(dc, cells, k=1):
    out = frozenset(dc.find(c) for c in cells)
    for _ in range(k):
        out = dc._star_once(out)
    return out


def residue(dc, nid, fid):
    """Cells containing the face; ridges come back in cyclic order."""
    if not dc.face_explored(nid, fid):
        raise NeedsDeeperDevelopment(f"face {fid} of cell {dc.find(nid)} is not fully explored")
    p = dc.polytope(nid)
    if p.lattice[fid].dim == dc.n - 2:
        return _ridge_ring(dc, nid, fid)
    return sorted({c for c, _ in dc.face_cells(nid, fid)})


def _ridge_ring(dc, nid, ridge):
    nid = dc.find(nid)
    cyc = dc._cycle(dc.node(nid).pid, ridge)
    out, cur = [], nid
    for sigma in cyc.exits:
        out.append(cur)
        cur = dc.neighbor(cur, sigma[1])
    return out


# -- polyballs ------------------------------------------------------------------------------

def _boundary_facets(dc, cells):
    cells = {dc.find(c) for c in cells}
    out = []
    for c in sorted(cells):
        for facet in range(len(dc.polytope(c).facets)):
            nb = dc.neighbor(c, facet)
            if nb is None:
                raise NeedsDeeperDevelopment(f"facet {facet} of cell {c} has no known neighbour")
            if nb not in cells:
                out.append((c, facet))
    return out


def _boundary_complex(dc, facets):
    """Face classes of the boundary, as {class: (dim, vertex classes)}."""
    out = {}
    for c, facet in facets:
        p = dc.polytope(c)
        fface = p.lattice.facet_ids[facet]
        for g in p.lattice.subfaces(fface, proper=False):
            root = dc.face_class(c, g.id)
            if root not in out:
                verts = frozenset(dc.face_class(c, p.lattice.vertex_ids[j]) for j in g.vertices)
                out[root] = (g.dim, verts)
    return out


def is_combinatorial_sphere(cells, d):
    """cells: iterable of (dim, vertex set) closed under faces, top dimension d.

    Pseudomanifold, connected, Euler characteristic 1 + (-1)^d and every vertex
    link a (d-1)-sphere; this characterizes spheres for d ≤ 2.
    """
    cells = list(set(cells))
    if any(dim > d for dim, _ in cells):
        return False
    if d == 0:
        return len(cells) == 2 and all(dim == 0 for dim, _ in cells)
    tops = [vs for dim, vs in cells if dim == d]
    subs = [vs for dim, vs in cells if dim == d - 1]
    if not tops:
        return False
    parent = list(range(len(tops)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in subs:
        holders = [i for i, t in enumerate(tops) if s <= t]
        if len(holders) != 2:
            return False
        parent[find(holders[0])] = find(holders[1])
    if len({find(i) for i in range(len(tops))}) != 1:
        return False
    if sum((-1) ** dim for dim, _ in cells) != 1 + (-1) ** d:
        return False
    vertices = [vs for dim, vs in cells if dim == 0]
    edges = [vs for dim, vs in cells if dim == 1]
    for w in vertices:
        through = [e for e in edges if w <= e]
        link = [(dim - 1, frozenset(e for e in through if e <= vs))
                for dim, vs in cells if dim >= 1 and w <= vs]
        if not is_combinatorial_sphere(link, d - 1):
            return False
    return True


def _require_explored(dc, cells):
    for c in cells:
        if not dc.explored(c):
            raise NeedsDeeperDevelopment(f"cell {dc.find(c)} has unclosed vertices")


def _pairwise_disjoint(dc, cells):
    cells = sorted({dc.find(c) for c in cells})
    for a, b in combinations(cells, 2):
        if dc.interiors_overlap(a, b):
            return False
    return True


def polyball_check(dc, cells):
    """Injective on the cells and bounded by a combinatorial (n-1)-sphere."""
    cells = {dc.find(c) for c in cells}
    if not cells:
        return False
    _require_explored(dc, cells)
    if not _pairwise_disjoint(dc, cells):
        return False
    bd = _boundary_complex(dc, _boundary_facets(dc, cells))
    return is_combinatorial_sphere(bd.values(), dc.n - 1)


# -- convexity of unions ----------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    ridge_route: bool
    direct_route: bool
    failing_ridges: tuple = ()

    @property
    def convex(self):
        return self.ridge_route

    @property
    def agree(self):
        return self.ridge_route == self.direct_route

    def __bool__(self):
        return self.ridge_route

    def to_json(self):
        return {"convex": self.ridge_route, "direct": self.direct_route, "agree": self.agree}


def _ridge_classes(dc, facets):
    seen = {}
    for c, facet in facets:
        p = dc.polytope(c)
        for g in p.lattice.subfaces(p.lattice.facet_ids[facet]):
            if g.dim == dc.n - 2:
                seen.setdefault(dc.face_class(c, g.id), (c, g.id))
    return seen


def ridge_link_convexity(dc, cells, ridge):
    """Union of the link wedges of the cells around a boundary ridge lies in a halfplane.

    ``ridge`` is a (cell, local ridge id) pair.
    """
    cells = {dc.find(c) for c in cells}
    c, rid = ridge
    frame = planar_frame(dc.face_rays(c, rid), dc.n + 1)
    wedges = [wedge(frame, dc.rays(m)) for m, _ in dc.face_cells(c, rid) if m in cells]
    return halfplane_contains(*wedges)


def _direct_convexity(dc, cells, facets):
    n1 = dc.n + 1
    rays = sorted({r for c in cells for r in dc.rays(c)})
    hull = kernel.from_generators(rays, n1)
    if not hull.facets:
        return False
    pieces = [(c, facet, dc.face_rays(c, dc.polytope(c).lattice.facet_ids[facet]))
              for c, facet in facets]
    for f in hull.facets:
        face = kernel.dd_convert(list(hull.halfspaces) + [f, tuple(-x for x in f)], n1)
        parts = [kernel.from_generators(rs, n1) for _, _, rs in pieces
                 if all(linalg.dot(f, r) == 0 for r in rs)]
        if not kernel.covered_by(face, parts):
            return False
    return True


def union_convexity(dc, cells):
    cells = {dc.find(c) for c in cells}
    _require_explored(dc, cells)
    facets = _boundary_facets(dc, cells)
    failing = []
    for root, ridge in sorted(_ridge_classes(dc, facets).items()):
        if not ridge_link_convexity(dc, cells, ridge):
            failing.append(ridge)
    return ConvexityReport(not failing, _direct_convexity(dc, cells, facets), tuple(failing))


class _Verdicts:
    """Cache of (polyball, convex) verdicts up to a common projective motion."""

    def __init__(self, dc):
        self.dc = dc
        self.cache = {}
        self.ridges = {}

    def signature(self, cells, extra=()):
        """Cell keys (and extra rays) seen from each member; the least view wins."""
        keys = [self.dc.key(c) for c in cells]
        if len(set(keys)) != len(keys):
            return None
        best = None
        for _, t in keys:
            inv = t.inverse()
            sig = (tuple(sorted((q, (inv @ s).matrix) for q, s in keys)),
                   tuple(sorted(inv.apply_ray(r) for r in extra)))
            if best is None or sig < best:
                best = sig
        return best

    def __call__(self, cells):
        cells = frozenset(self.dc.find(c) for c in cells)
        sig = self.signature(cells)
        if sig is not None and sig in self.cache:
            return self.cache[sig]
        ball = polyball_check(self.dc, cells)
        conv = union_convexity(self.dc, cells) if ball else None
        out = (ball, conv)
        if sig is not None:
            self.cache[sig] = out
        return out


@dataclass
class AuditReport:
    vertices: object = True          # condition on vertex stars
    faces: object = True             # condition on k-cell residues, 1 ≤ k ≤ n-2
    facets: object = True            # condition on facet residues
    evaluated: int = 0
    skipped: list = field(default_factory=list)
    per_cell: dict = field(default_factory=dict)
    disagreements: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def agree(self):
        verdicts = {v for v in (self.vertices, self.faces, self.facets) if v is not None}
        return not self.disagreements and len(verdicts) == 1

    def to_json(self):
        return {"vertices": self.vertices, "faces": self.faces, "facets": self.facets,
                "evaluated": self.evaluated, "skipped": len(self.skipped),
                "cells_compared": len(self.per_cell), "agree": self.agree,
                "failures": [list(f) for f in self.failures[:20]]}


def residual_convexity_audit(dc, depth=None, verdicts=None):
    depth = dc.depth if depth is None else depth
    verdicts = verdicts or _Verdicts(dc)
    n = dc.n
    region = sorted(dc.levels[depth])
    results = {}
    rep = AuditReport()
    for c in region:
        p = dc.polytope(c)
        for g in p.lattice.faces[:-1]:
            root = dc.face_class(c, g.id)
            if root in results:
                continue
            if not dc.face_explored(c, g.id):
                results[root] = None
                rep.skipped.append((c, g.id))
                continue
            res = {m for m, _ in dc.face_cells(c, g.id)}
            if not all(dc.explored(m) for m in res):
                results[root] = None
                rep.skipped.append((c, g.id))
                continue
            ball, conv = verdicts(res)
            ok = bool(ball and conv and conv.agree)
            if conv is not None and not conv.agree:
                rep.disagreements.append(("union-routes", c, g.id))
            results[root] = (g.dim, ok)
            rep.evaluated += 1
            if not ok:
                rep.failures.append((c, g.id, g.dim))

    def cond(dims):
        vals = [v[1] for v in results.values() if v is not None and v[0] in dims]
        return all(vals)

    rep.vertices = cond({0})
    rep.faces = cond(set(range(1, n - 1))) if n > 2 else None
    rep.facets = cond({n - 1})
    for c in region:
        p = dc.polytope(c)
        groups = {"vertices": [], "faces": [], "facets": []}
        complete = True
        for g in p.lattice.faces[:-1]:
            v = results.get(dc.face_class(c, g.id))
            if v is None:
                complete = False
                break
            name = "vertices" if g.dim == 0 else ("facets" if g.dim == n - 1 else "faces")
            groups[name].append(v[1])
        if not complete:
            continue
        triple = tuple(all(groups[k]) if groups[k] or k != "faces" or n > 2 else None
                       for k in ("vertices", "faces", "facets"))
        rep.per_cell[c] = triple
        if len({v for v in triple if v is not None}) > 1:
            rep.disagreements.append(("cell", c, triple))
    return rep


# -- good ridges ------------------------------------------------------------------------------

@dataclass(frozen=True)
class RidgeVerdict:
    ridge: tuple
    status: str                      # "good" | "bad" | "undecided (cap)"
    witness: tuple = ()              # boundary cells forming the offending F
    candidates: int = 0

    @property
    def good(self):
        return self.status == "good"

    def to_json(self):
        return {"ridge": list(self.ridge), "status": self.status,
                "witness": [list(w) for w in self.witness], "candidates": self.candidates}


def good_ridge_check(dc, ridge, cap=10000, verdicts=None):
    """Every convex F ⊂ ∂res(e) avoiding e gives a convex polyball st(F) ∩ res(e)."""
    verdicts = verdicts or _Verdicts(dc)
    c, rid = ridge
    c = dc.find(c)
    res = set(residue(dc, c, rid))
    _require_explored(dc, res)
    sig = verdicts.signature(res, dc.face_rays(c, rid))
    if sig is not None and verdicts.ridges.get(sig, (None,))[0] == "good":
        status, count = verdicts.ridges[sig]
        return RidgeVerdict((c, rid), status, (), count)
    out = _enumerate_ridge(dc, c, rid, res, cap, verdicts)
    if sig is not None:
        verdicts.ridges[sig] = (out.status, out.candidates)
    return out


def _enumerate_ridge(dc, c, rid, res, cap, verdicts):
    n1 = dc.n + 1
    ridge_verts = {dc.face_class(c, dc.polytope(c).lattice.vertex_ids[j])
                   for j in dc.polytope(c).lattice[rid].vertices}
    bd = _boundary_complex(dc, _boundary_facets(dc, res))
    where = {}
    for m in res:
        p = dc.polytope(m)
        for g in p.lattice.faces[:-1]:
            where.setdefault(dc.face_class(m, g.id), (m, g.id))
    count = 0
    for k in range(dc.n):
        pool = sorted(root for root, (dim, vs) in bd.items() if dim == k and not vs & ridge_verts)
        seen = set()
        frontier = [frozenset([x]) for x in pool]
        while frontier:
            nxt = []
            for fset in frontier:
                if fset in seen:
                    continue
                seen.add(fset)
                count += 1
                if count > cap:
                    return RidgeVerdict((c, rid), "undecided (cap)", (), count)
                rays = [r for x in fset for r in dc.face_rays(*where[x])]
                if linalg.rank(rays, n1) != k + 1:
                    continue
                cones = [kernel.from_generators(dc.face_rays(*where[x]), n1) for x in fset]
                if not kernel.covered_by(kernel.hull_of(cones, n1), cones):
                    continue
                verts = set().union(*(bd[x][1] for x in fset))
                touched = {m for m in res if set(dc.vertex_classes(m)) & verts}
                ball, conv = verdicts(touched)
                if not (ball and conv):
                    return RidgeVerdict((c, rid), "bad", tuple(where[x] for x in sorted(fset)),
                                        count)
                if k == 0:
                    continue
                for y in pool:
                    if y not in fset and bd[y][1] & verts:
                        grown = fset | {y}
                        if grown not in seen:
                            nxt.append(grown)
            frontier = nxt
    return RidgeVerdict((c, rid), "good", (), count)


@dataclass
class StrongReport:
    audit: AuditReport
    ridges: list
    triangular_cells: list
    theorem_consistent: bool

    @property
    def bad(self):
        return [r for r in self.ridges if r.status == "bad"]

    @property
    def undecided(self):
        return [r for r in self.ridges if r.status.startswith("undecided")]

    @property
    def strongly_residually_convex(self):
        if self.undecided:
            return None
        return bool(self.audit.facets) and not self.bad

    def to_json(self):
        return {"audit": self.audit.to_json(),
                "ridges_checked": len(self.ridges),
                "bad_ridges": [r.to_json() for r in self.bad],
                "undecided": len(self.undecided),
                "strongly_residually_convex": self.strongly_residually_convex,
                "theorem_consistent": self.theorem_consistent}


def strong_residual_convexity_check(dc, depth=None, cap=10000):
    depth = dc.depth if depth is None else depth
    verdicts = _Verdicts(dc)
    audit = residual_convexity_audit(dc, depth, verdicts)
    seen, out = set(), []
    for c in sorted(dc.levels[depth]):
        for g in dc.polytope(c).ridges():
            root = dc.face_class(c, g.id)
            if root in seen:
                continue
            seen.add(root)
            if not dc.face_explored(c, g.id):
                continue
            ring = residue(dc, c, g.id)
            if not all(dc.explored(m) for m in ring):
                continue
            out.append(good_ridge_check(dc, (c, g.id), cap, verdicts))
    tri = triangular_scan(dc.spec)
    consistent = True
    if not tri and audit.facets:
        consistent = not any(r.status == "bad" for r in out)
    return StrongReport(audit, out, tri, consistent)


# -- certification ----------------------------------------------------------------------------

@dataclass
class CertifyVerdict:
    valid: bool
    poincare: bool
    theorem_path: str                # "certified" | "inapplicable" | "not residually convex"
    levels: list = field(default_factory=list)     # per k: (polyball, convex, direct, proper)
    overlaps: list = field(default_factory=list)
    direct_path: bool = False

    @property
    def certified(self):
        return self.direct_path and self.theorem_path != "not residually convex"

    def to_json(self):
        return {"valid": self.valid, "poincare": self.poincare,
                "theorem_path": self.theorem_path, "direct_path": self.direct_path,
                "certified": self.certified,
                "levels": [dict(zip(("k", "polyball", "convex", "direct", "proper"), lv))
                           for lv in self.levels],
                "overlaps": [o.to_json() for o in self.overlaps]}


def antipodal_proper(dc, cells, base=None):
    """No cell meets the antipodal cone of the base cell outside the origin."""
    neg = dc.cone(dc.root if base is None else base).negate()
    for c in cells:
        if kernel.separated(dc.cone(c), neg):
            continue
        if not kernel.intersect(dc.cone(c), neg).is_zero:
            return False
    return True


def certify_convexity(spec, base=0, depth=1, dc=None):
    report = validate(spec)
    if not report.valid:
        return CertifyVerdict(False, False, "inapplicable")
    pc = poincare_check(spec)
    if not all(r.passed for r in pc):
        return CertifyVerdict(True, False, "inapplicable")
    residual = all(r.convex for r in residual_convexity_check(spec))
    if not residual:
        theorem = "not residually convex"
    elif triangular_scan(spec):
        theorem = "inapplicable"
    else:
        theorem = "certified"
    dc = dc or develop(spec, base, depth)
    verdict = CertifyVerdict(True, True, theorem, overlaps=list(dc.overlaps))
    ok = not dc.overlaps
    for k in range(1, depth + 1):
        cells = dc.levels[k]
        ball = polyball_check(dc, cells)
        conv = union_convexity(dc, cells) if ball else ConvexityReport(False, False)
        proper = antipodal_proper(dc, cells)
        verdict.levels.append((k, ball, conv.ridge_route, conv.direct_route, proper))
        if not conv.agree:
            raise ConsistencyError(f"ridge-link and hull routes disagree on st^{k}")
        ok = ok and ball and conv.convex and proper
    verdict.direct_path = ok
    if theorem == "certified" and not ok:
        raise ConsistencyError("theorem path certifies convexity but the direct path does not")
    return verdict


# -- galleries ------------------------------------------------------------------------------

@dataclass
class Gallery:
    base: int
    direction: int
    cells: list          # P_0 = Q, P_1, …, P_K
    facets: list         # s_j as (cell, local facet), j = 0..K
    options: list = field(default_factory=list)      # eligible facets of P_j, j ≥ 1
    disjoint: list = field(default_factory=list)     # s_j ∩ s_{j+1} = ∅
    in_boundary: list = field(default_factory=list)  # s_j ⊂ ∂ st^j(Q)
    partial_convex: list = field(default_factory=list)

    @property
    def steps(self):
        return len(self.cells) - 1

    @property
    def ok(self):
        return all(self.disjoint) and all(self.in_boundary) and all(self.partial_convex)

    def to_json(self):
        return {"base": self.base, "direction": self.direction, "cells": self.cells,
                "facets": [list(s) for s in self.facets], "options": self.options,
                "disjoint": self.disjoint, "in_boundary": self.in_boundary,
                "partial_convex": self.partial_convex}


def gallery_trace(dc, q=None, sigma=0, steps=1, check=True):
    q = dc.root if q is None else dc.find(q)
    p = dc.polytope(q)
    if not 0 <= sigma < len(p.facets):
        raise InputError(f"cell {q} has no facet {sigma}")
    gal = Gallery(q, sigma, [q], [(q, sigma)])
    cur, exit_facet = q, sigma
    for _ in range(steps):
        nxt = dc.neighbor(cur, exit_facet)
        if nxt is None:
            raise NeedsDeeperDevelopment(f"facet {exit_facet} of cell {cur} is unexplored")
        entry = dc.spec.pairing((dc.node(cur).pid, exit_facet)).dst[1]
        pn = dc.polytope(nxt)
        eligible = [i for i, fv in enumerate(pn.facet_vertices)
                    if not fv & pn.facet_vertices[entry]]
        if not eligible:
            raise ConeLikeCell(nxt, entry)
        gal.cells.append(nxt)
        gal.facets.append((nxt, eligible[0]))
        gal.options.append(eligible)
        cur, exit_facet = nxt, eligible[0]
    if check:
        _check_gallery(dc, gal)
    return gal


def _facet_classes(dc, s):
    c, facet = s
    p = dc.polytope(c)
    return {dc.face_class(c, p.lattice.vertex_ids[j]) for j in p.facet_vertices[facet]}


def _check_gallery(dc, gal):
    q = gal.base
    for j in range(len(gal.facets) - 1):
        gal.disjoint.append(not _facet_classes(dc, gal.facets[j]) & _facet_classes(dc, gal.facets[j + 1]))
    for j, (c, facet) in enumerate(gal.facets):
        st = star(dc, [q], j)
        nb = dc.neighbor(c, facet)
        gal.in_boundary.append(c in st and nb is not None and nb not in st)
    for k in range(1, len(gal.cells)):
        g = gal.cells[:k + 1]
        ball = polyball_check(dc, g)
        conv = union_convexity(dc, g) if ball else None
        gal.partial_convex.append(bool(ball and conv and conv.agree))


@dataclass
class SupportReport:
    hyperplane: tuple                 # covector h with the explored region in {h ≤ 0}
    misses_q: list                    # ⟨s_j⟩ ∩ Q = ∅, j = 1..K
    meets_q_sigma: list               # ⟨s_j⟩ ∩ Q(σ) ≠ ∅, j = 1..K
    angles: list                      # angle between ⟨s_j⟩ and ⟨s_K⟩
    dual_point_in_pavilion: bool

    @property
    def ok(self):
        return all(self.misses_q) and all(self.meets_q_sigma)

    def to_json(self):
        return {"hyperplane": list(self.hyperplane), "misses_q": self.misses_q,
                "meets_q_sigma": self.meets_q_sigma, "angles": self.angles,
                "dual_point_in_pavilion": self.dual_point_in_pavilion, "ok": self.ok}


def _oriented(dc, q, h):
    x = dc.cone(q).interior_point()
    return h if linalg.dot(h, x) < 0 else tuple(-v for v in h)


def q_sigma(dc, q, sigma):
    """Beyond the facet σ of Q and inside the halfspaces of the facets adjacent to σ."""
    p = dc.polytope(q)
    mine = p.facet_vertices[sigma]
    adjacent = [i for i, fv in enumerate(p.facet_vertices)
                if i != sigma and p.lattice.by_vertices.get(fv & mine) is not None
                and p.lattice[p.lattice.by_vertices[fv & mine]].dim == dc.n - 2]
    u = dc.facet_covector(q, sigma)
    cons = [tuple(-x for x in u)] + [dc.facet_covector(q, i) for i in adjacent]
    return kernel.dd_convert(cons, dc.n + 1)


def _angle(a, b):
    ua, ub = _unit(a), _unit(b)
    return math.acos(min(1.0, abs(sum(x * y for x, y in zip(ua, ub)))))


def supporting_hyperplane(dc, gal):
    q = gal.base
    n1 = dc.n + 1
    qs = q_sigma(dc, q, gal.direction)
    spans = [_oriented(dc, q, dc.facet_covector(c, f)) for c, f in gal.facets]
    h = spans[-1]
    misses, meets, angles = [], [], []
    qrays = dc.rays(q)
    for u in spans[1:]:
        signs = {(linalg.dot(u, r) > 0) - (linalg.dot(u, r) < 0) for r in qrays}
        misses.append(signs in ({-1}, {1}))
        meets.append(not kernel.intersect(qs, kernel.dd_convert([u, tuple(-x for x in u)], n1)).is_zero)
        angles.append(_angle(u, h))
    qd = dual(SphericalPolytope(dc.cone(q)))
    vert = qd.vertex_index(linalg.primitive(dc.facet_covector(q, gal.direction)))
    inside = pavilion(qd, qd.lattice.vertex_ids[vert]).contains(h)
    return SupportReport(h, misses, meets, angles, inside)


def general_position(hyperplanes, n1=None):
    """Covectors whose hyperplanes have empty common intersection on the sphere."""
    hyperplanes = list(hyperplanes)
    if not hyperplanes:
        return False
    n1 = n1 or len(hyperplanes[0])
    return linalg.rank(hyperplanes, n1) == n1


@dataclass
class SupportCertificate:
    status: str                       # "certificate" | "no certificate at depth K"
    estimates: list                   # per facet: (hyperplane, settled, report)
    simplex: tuple = ()               # facet indices of the chosen subset
    dual_thick: bool = False
    subsets_in_general_position: int = 0

    def to_json(self):
        return {"status": self.status, "simplex": list(self.simplex),
                "dual_thick": self.dual_thick,
                "subsets_in_general_position": self.subsets_in_general_position,
                "estimates": [{"facet": i, "hyperplane": list(h), "settled": s}
                              for i, (h, s, _) in enumerate(self.estimates)]}


def proper_convexity_certificate(dc, q=None, steps=1, settle_tol=1e-3):
    q = dc.root if q is None else dc.find(q)
    p = dc.polytope(q)
    estimates = []
    for sigma in range(len(p.facets)):
        gal = gallery_trace(dc, q, sigma, steps, check=False)
        rep = supporting_hyperplane(dc, gal)
        settled = steps >= 2 and rep.angles[-2] <= settle_tol
        estimates.append((rep.hyperplane, settled, rep))
    thick = not is_thin(dual(p))[0]
    n1 = dc.n + 1
    stars = [star(dc, [q], k) for k in range(steps + 1)]
    count = 0
    for subset in combinations(range(len(estimates)), n1):
        hs = [estimates[i][0] for i in subset]
        if not general_position(hs, n1):
            continue
        count += 1
        if not all(estimates[i][1] for i in subset):
            continue
        inside = all(linalg.dot(h, r) <= 0 for st in stars for c in st
                     for r in dc.rays(c) for h in hs)
        if inside:
            return SupportCertificate("certificate", estimates, subset, thick, count)
    return SupportCertificate(f"no certificate at depth {steps}", estimates, (), thick, count)
