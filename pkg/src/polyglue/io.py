"""JSON documents for polytopes and gluing specs.

Rationals travel as strings ``"p/q"`` (or ``"p"``); plain JSON integers are
accepted on input.  Decimal coordinates are accepted only for documents that
ask for the float backend.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernel
from .complex import GluingSpec, ProjectiveTransform
from .errors import InputError
from .polytope import SphericalPolytope, build


def parse_rational(x, path, allow_float=False):
    if isinstance(x, bool):
        raise InputError(f"expected a rational, got {x!r}", path)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if allow_float:
            return x
        raise InputError("decimal numbers need the float backend; write rationals as \"p/q\"",
                         path)
    if not isinstance(x, str):
        raise InputError(f"expected a rational string, got {type(x).__name__}", path)
    text = x.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        try:
            value = float(text)
        except ValueError:
            raise InputError(f"malformed rational {x!r}", path) from None
        if allow_float:
            return value
        raise InputError(f"decimal {x!r} needs the float backend; write rationals as \"p/q\"",
                         path) from None
    if q == 0:
        raise InputError(f"zero denominator in {x!r}", path)
    return Fraction(p, q)


def format_rational(x):
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vector(v, size, path, allow_float):
    if not isinstance(v, list):
        raise InputError("expected an array", path)
    if size is not None and len(v) != size:
        raise InputError(f"expected {size} entries, got {len(v)}", path)
    return tuple(parse_rational(x, f"{path}[{i}]", allow_float) for i, x in enumerate(v))


def _matrix(m, size, path):
    if not isinstance(m, list) or len(m) != size:
        raise InputError(f"matrix must have {size} rows", path)
    return [_vector(row, size, f"{path}[{i}]", False) for i, row in enumerate(m)]


@dataclass
class PolytopeDocument:
    name: str
    dim: int
    halfspaces: list = None
    vertices: list = None
    backend: str = "exact"

    def build(self, eps=1e-9, full=True) -> SphericalPolytope:
        kind = {"halfspaces": self.halfspaces} if self.halfspaces is not None \
            else {"vertices": self.vertices}
        return build(**kind, ambient_dim=self.dim + 1, name=self.name, full=full,
                     backend=self.backend, eps=eps)

    def to_json(self):
        out = {"name": self.name, "dim": self.dim}
        if self.halfspaces is not None:
            out["halfspaces"] = [[format_rational(x) for x in v] for v in self.halfspaces]
        else:
            out["vertices"] = [[format_rational(x) for x in v] for v in self.vertices]
        if self.backend != "exact":
            out["backend"] = self.backend
        return out


def parse_polytope(obj, path="$", backend=None, default_name="P"):
    if not isinstance(obj, dict):
        raise InputError("polytope must be an object", path)
    backend = obj.get("backend", backend or "exact")
    if backend not in ("exact", "float"):
        raise InputError(f"unknown backend {backend!r}", f"{path}.backend")
    dim = obj.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise InputError("dim must be a non-negative integer", f"{path}.dim")
    has_h, has_v = "halfspaces" in obj, "vertices" in obj
    if has_h == has_v:
        raise InputError("give exactly one of \"halfspaces\" and \"vertices\"", path)
    kind = "halfspaces" if has_h else "vertices"
    rows = obj[kind]
    if not isinstance(rows, list):
        raise InputError("expected an array", f"{path}.{kind}")
    floats = backend == "float"
    vecs = [_vector(r, dim + 1, f"{path}.{kind}[{i}]", floats) for i, r in enumerate(rows)]
    name = obj.get("name", default_name)
    if not isinstance(name, str):
        raise InputError("name must be a string", f"{path}.name")
    if all(isinstance(x, Fraction) for v in vecs for x in v):
        backend = "exact"
    return PolytopeDocument(name, dim, vecs if has_h else None, None if has_h else vecs, backend)


@dataclass
class SpecDocument:
    dimension: int
    polytopes: list                      # PolytopeDocument, names unique
    pairings: list                       # (src name, src facet, dst name, dst facet, matrix)
    options: dict = field(default_factory=dict)

    def to_spec(self, eps=1e-9) -> GluingSpec:
        index = {p.name: i for i, p in enumerate(self.polytopes)}
        polys = []
        for i, doc in enumerate(self.polytopes):
            try:
                polys.append(doc.build(eps))
            except InputError:
                raise
            except Exception as exc:
                raise InputError(str(exc), f"$.polytopes[{i}]") from None
        pairs = {}
        for i, (sn, sf, dn, df, m) in enumerate(self.pairings):
            path = f"$.pairings[{i}]"
            for nm, fc in ((sn, sf), (dn, df)):
                if nm not in index:
                    raise InputError(f"unknown polytope {nm!r}", path)
                if not 0 <= fc < len(polys[index[nm]].facets):
                    raise InputError(f"polytope {nm!r} has no facet {fc}", path)
            src = (index[sn], sf)
            if src in pairs:
                raise InputError(f"facet {sf} of {sn!r} is paired twice", path)
            try:
                pairs[src] = ((index[dn], df), ProjectiveTransform(m))
            except InputError as exc:
                raise InputError(str(exc), f"{path}.matrix") from None
        return GluingSpec(self.dimension, polys, pairs, [p.name for p in self.polytopes])

    def to_json(self):
        out = {"dimension": self.dimension,
               "polytopes": [p.to_json() for p in self.polytopes],
               "pairings": [{"from": [sn, sf], "to": [dn, df],
                             "matrix": [[format_rational(x) for x in row] for row in m]}
                            for sn, sf, dn, df, m in self.pairings]}
        if self.options:
            out["options"] = self.options
        return out


def _facet_ref(ref, path):
    if not (isinstance(ref, list) and len(ref) == 2 and isinstance(ref[0], str)
            and isinstance(ref[1], int) and not isinstance(ref[1], bool)):
        raise InputError("facet reference must be [polytope name, facet index]", path)
    return ref[0], ref[1]


def parse_spec(obj, path="$"):
    if not isinstance(obj, dict):
        raise InputError("spec must be an object", path)
    n = obj.get("dimension")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("dimension must be a positive integer", f"{path}.dimension")
    raw = obj.get("polytopes")
    if not isinstance(raw, list) or not raw:
        raise InputError("polytopes must be a non-empty array", f"{path}.polytopes")
    polys = []
    for i, p in enumerate(raw):
        doc = parse_polytope(p, f"{path}.polytopes[{i}]", default_name=f"P{i}")
        if doc.dim != n:
            raise InputError(f"dim {doc.dim} does not match dimension {n}",
                             f"{path}.polytopes[{i}].dim")
        if doc.backend != "exact":
            raise InputError("gluing specs must be exact", f"{path}.polytopes[{i}].backend")
        polys.append(doc)
    names = [p.name for p in polys]
    if len(set(names)) != len(names):
        raise InputError("polytope names must be unique", f"{path}.polytopes")
    pairs = []
    rawp = obj.get("pairings")
    if not isinstance(rawp, list):
        raise InputError("pairings must be an array", f"{path}.pairings")
    for i, pr in enumerate(rawp):
        pp = f"{path}.pairings[{i}]"
        if not isinstance(pr, dict):
            raise InputError("pairing must be an object", pp)
        for key in ("from", "to", "matrix"):
            if key not in pr:
                raise InputError(f"missing {key!r}", pp)
        sn, sf = _facet_ref(pr["from"], f"{pp}.from")
        dn, df = _facet_ref(pr["to"], f"{pp}.to")
        for nm, where in ((sn, "from"), (dn, "to")):
            if nm not in names:
                raise InputError(f"unknown polytope {nm!r}", f"{pp}.{where}")
        pairs.append((sn, sf, dn, df, _matrix(pr["matrix"], n + 1, f"{pp}.matrix")))
    options = obj.get("options", {})
    if not isinstance(options, dict):
        raise InputError("options must be an object", f"{path}.options")
    return SpecDocument(n, polys, pairs, options)


def parse(text, backend=None):
    """A spec document, a single polytope, or {"polytopes": [...]} without pairings.

    Rational coordinates always select the exact backend; decimals need the
    float backend, from the document's "backend" flag or from ``backend``.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "$") from None
    if isinstance(obj, dict) and "pairings" in obj:
        return parse_spec(obj)
    if isinstance(obj, dict) and "polytopes" in obj:
        if not isinstance(obj["polytopes"], list):
            raise InputError("polytopes must be an array", "$.polytopes")
        return [parse_polytope(p, f"$.polytopes[{i}]", backend, f"P{i}")
                for i, p in enumerate(obj["polytopes"])]
    return parse_polytope(obj, backend=backend)


def serialize(doc):
    if isinstance(doc, list):
        return json.dumps({"polytopes": [d.to_json() for d in doc]}, indent=2)
    return json.dumps(doc.to_json(), indent=2)


def polytope_document(p: SphericalPolytope, name=None):
    """Vertex document of a full-dimensional polytope."""
    verts = [tuple(v) for v in p.vertices]
    return PolytopeDocument(name or p.name or "P", p.ambient_dim - 1, None, verts,
                            "exact" if p.arith.exact else "float")


def spec_document(spec: GluingSpec):
    polys = [polytope_document(p, nm) for p, nm in zip(spec.polytopes, spec.names)]
    pairs = []
    for (sp, sf), ((dp, df), t) in sorted(spec.raw_pairings.items()):
        pairs.append((spec.names[sp], sf, spec.names[dp], df, [list(r) for r in t.matrix]))
    return SpecDocument(spec.dimension, polys, pairs)


def cone_to_json(c: kernel.Cone):
    fmt = lambda vs: [[format_rational(x) for x in v] for v in vs]
    return {"ambient_dim": c.ambient_dim, "generators": fmt(c.generators),
            "lineality": fmt(c.lineality_basis), "facets": fmt(c.facets),
            "equations": fmt(c.equations)}
