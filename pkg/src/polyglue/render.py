"""SVG pictures of developed 2-complexes in the affine chart z = 1."""
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError


class ClippedWarning(UserWarning):
    pass


@dataclass
class RenderOptions:
    size: int = 600
    margin: int = 12
    window: float = None                 # half-width of the chart viewport; auto when None
    depth: int = None                    # levels drawn; all explored levels when None
    galleries: list = field(default_factory=list)    # Gallery objects, stroked
    bad_ridges: list = field(default_factory=list)   # (cell, local face id), marked
    labels: bool = False


_FILLS = ["#3b5b92", "#5677aa", "#7393c1", "#93afd6", "#b4cae6", "#d3e1f2", "#eaf1fa"]
_STROKES = ["#c0392b", "#d35400", "#8e44ad", "#16a085"]


def _cycle_order(p):
    nbrs = p.neighbors
    nbrs = nbrs() if callable(nbrs) else nbrs
    order, prev = [0], None
    while len(order) < len(p.vertices):
        cur = order[-1]
        nxt = min(j for j in nbrs[cur] if j != prev and j not in order[1:])
        if nxt == order[0]:
            break
        order.append(nxt)
        prev = cur
    return order


def _clip(poly, cov):
    """Keep the part of a cyclic list of rays on the side cov·x ≥ 0."""
    out = []
    for i, a in enumerate(poly):
        b = poly[(i + 1) % len(poly)]
        fa = sum(c * x for c, x in zip(cov, a))
        fb = sum(c * x for c, x in zip(cov, b))
        if fa >= 0:
            out.append(a)
        if (fa > 0 > fb) or (fa < 0 < fb):
            t = fa / (fa - fb)
            out.append(tuple(x + t * (y - x) for x, y in zip(a, b)))
    return out


def _chart(ray):
    x, y, z = (Fraction(c) if not isinstance(c, float) else c for c in ray)
    return float(x / z), float(y / z)


def _polygons(dc, cells, window):
    out, clipped = {}, []
    limits = [(1, 0, window), (-1, 0, window), (0, 1, window), (0, -1, window)]
    for c in cells:
        p = dc.polytope(c)
        rays = dc.rays(c)
        poly = [tuple(rays[j]) for j in _cycle_order(p)]
        if window is not None:
            inside = all(r[2] > 0 and abs(r[0]) <= window * r[2] and abs(r[1]) <= window * r[2]
                         for r in poly)
            if not inside:
                clipped.append(c)
                for a, b, w in limits:
                    # keep w·z - (a·x + b·y) ≥ 0
                    poly = _clip(poly, (-a, -b, w))
                    if not poly:
                        break
        if poly:
            out[c] = [_chart(r) for r in poly]
    return out, clipped


def _auto_window(dc, cells):
    extent = 0.0
    for c in cells:
        rays = dc.rays(c)
        if any(r[2] <= 0 for r in rays):
            continue
        for r in rays:
            x, y = _chart(r)
            extent = max(extent, abs(x), abs(y))
    return extent * 1.05 or 1.0


def render_svg(dc=None, options=None):
    """Deterministic SVG text; pass dc=None for an empty picture."""
    opt = options or RenderOptions()
    size = opt.size
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n')
    if dc is None or not dc.levels:
        return head + "</svg>\n"
    if dc.n != 2:
        raise InputError("rendering needs a 2-dimensional complex")
    levels = dc.levels
    depth = len(levels) - 1 if opt.depth is None else min(opt.depth, len(levels) - 1)
    depth_of = {}
    for k in range(depth, -1, -1):
        for c in levels[k]:
            depth_of[c] = k
    cells = sorted(depth_of)
    has_back = any(r[2] <= 0 for c in cells for r in dc.rays(c))
    window = opt.window if opt.window is not None else _auto_window(dc, cells)
    polys, clipped = _polygons(dc, cells, window if (has_back or opt.window) else None)
    if clipped:
        warnings.warn(f"{len(clipped)} cells leave the chart window and were clipped",
                      ClippedWarning, stacklevel=2)
    scale = (size / 2 - opt.margin) / window

    def px(pt):
        return f"{size / 2 + scale * pt[0]:.6f},{size / 2 - scale * pt[1]:.6f}"

    body = ['<g stroke="#1b2631" stroke-width="1" stroke-linejoin="round">']
    for c in sorted(polys, key=lambda c: (depth_of[c], c)):
        fill = _FILLS[min(depth_of[c], len(_FILLS) - 1)]
        pts = " ".join(px(q) for q in polys[c])
        body.append(f'<polygon data-cell="{c}" data-depth="{depth_of[c]}" fill="{fill}" '
                    f'points="{pts}"/>')
    body.append("</g>")
    for g_index, gal in enumerate(opt.galleries):
        color = _STROKES[g_index % len(_STROKES)]
        body.append(f'<g fill="none" stroke="{color}" stroke-width="3">')
        for c in gal.cells:
            if c in polys:
                pts = " ".join(px(q) for q in polys[c])
                body.append(f'<polygon data-gallery="{g_index}" points="{pts}"/>')
        body.append("</g>")
    if opt.bad_ridges:
        body.append('<g fill="#e74c3c" stroke="#000000" stroke-width="0.5">')
        seen = set()
        for c, fid in sorted(opt.bad_ridges):
            c = dc.find(c)
            ray = dc.face_rays(c, fid)[0]
            if ray[2] <= 0:
                continue
            x, y = _chart(ray)
            if abs(x) > window or abs(y) > window:
                continue
            spot = px((x, y))
            if spot in seen:
                continue
            seen.add(spot)
            cx, cy = spot.split(",")
            body.append(f'<circle cx="{cx}" cy="{cy}" r="4"/>')
        body.append("</g>")
    if opt.labels:
        body.append('<g font-family="sans-serif" font-size="9" text-anchor="middle">')
        for c in sorted(polys):
            q = polys[c]
            cx, cy = px((sum(a for a, _ in q) / len(q), sum(b for _, b in q) / len(q))).split(",")
            body.append(f'<text x="{cx}" y="{cy}">{c}</text>')
        body.append("</g>")
    return head + "\n".join(body) + "\n</svg>\n"
