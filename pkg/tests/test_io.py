import json
from fractions import Fraction as F

import pytest

from polyglue import fixtures
from polyglue.complex import validate
from polyglue.errors import InputError
from polyglue.io import (format_rational, parse, parse_rational, polytope_document, serialize,
                         spec_document)

SPEC_NAMES = sorted(fixtures.SPECS)


def square_doc(**extra):
    doc = {"dimension": 2,
           "polytopes": [{"name": "Q", "dim": 2,
                          "vertices": [[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]]}],
           "pairings": []}
    doc.update(extra)
    return doc


def test_rationals():
    assert parse_rational("3/6", "$") == F(1, 2)
    assert parse_rational(" -4 ", "$") == -4
    assert parse_rational(7, "$") == 7
    assert parse_rational(0.25, "$", allow_float=True) == 0.25
    assert format_rational(F(-3, 4)) == "-3/4" and format_rational(F(5)) == "5"


@pytest.mark.parametrize("value,fragment", [
    ("1/0", "zero denominator"), ("0.5", "float backend"), (0.5, "float backend"),
    ("one", "malformed"), (True, "expected a rational"), ([1], "expected a rational")])
def test_bad_rationals(value, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_rational(value, "$.x")


def test_error_carries_json_path():
    doc = square_doc()
    doc["polytopes"][0]["vertices"][2][1] = "1/0"
    with pytest.raises(InputError) as info:
        parse(json.dumps(doc))
    assert info.value.path == "$.polytopes[0].vertices[2][1]"


@pytest.mark.parametrize("name", SPEC_NAMES)
def test_spec_round_trip(name):
    spec = fixtures.fixture(name)
    text = serialize(spec_document(spec))
    doc = parse(text)
    again = doc.to_spec()
    assert serialize(spec_document(again)) == text
    assert validate(again) == validate(spec)
    assert [p.cone for p in again.polytopes] == [p.cone for p in spec.polytopes]


def test_pairing_order_does_not_matter():
    spec = fixtures.fixture("benoist-triangles")
    obj = json.loads(serialize(spec_document(spec)))
    obj["pairings"].reverse()
    obj["polytopes"][0]["vertices"].reverse()
    back = parse(json.dumps(obj)).to_spec()
    assert serialize(spec_document(back)) == serialize(spec_document(spec))


def test_benoist_document_is_canonical():
    obj = json.loads(serialize(spec_document(fixtures.fixture("benoist-triangles"))))
    matrices = [p["matrix"] for p in obj["pairings"]]
    assert ["2", "0", "0"] in [row for m in matrices for row in m[:1]]
    assert all("/" not in x for m in matrices for row in m for x in row)
    coords = {x for p in obj["polytopes"] for v in p["vertices"] for x in v}
    assert all("/" not in x for x in coords)


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d["pairings"].append({"from": ["Q", 0], "to": ["R", 1],
                                     "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}),
     "unknown polytope"),
    (lambda d: d["pairings"].append({"from": ["Q", 0], "to": ["Q", 1],
                                     "matrix": [[1, 0], [0, 1]]}), "3 rows"),
    (lambda d: d["pairings"].append({"from": ["Q", 0], "to": ["Q", 1]}), "missing"),
    (lambda d: d.update(dimension=3), "does not match"),
    (lambda d: d["polytopes"].append(dict(d["polytopes"][0])), "unique"),
    (lambda d: d["polytopes"][0].update(halfspaces=[]), "exactly one"),
])
def test_malformed_specs(mutate, fragment):
    doc = square_doc()
    mutate(doc)
    with pytest.raises(InputError, match=fragment):
        parse(json.dumps(doc))


def test_facet_index_checked_when_building():
    doc = square_doc(pairings=[{"from": ["Q", 9], "to": ["Q", 1],
                                "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}])
    with pytest.raises(InputError, match="no facet 9"):
        parse(json.dumps(doc)).to_spec()


def test_invalid_json():
    with pytest.raises(InputError, match="invalid JSON"):
        parse("{")


def test_polytope_documents_and_backends():
    doc = parse(json.dumps({"dim": 1, "vertices": [["1/2", 1], [2, 1]]}))
    assert doc.backend == "exact" and doc.vertices[0] == (F(1, 2), 1)
    with pytest.raises(InputError, match="float backend"):
        parse(json.dumps({"dim": 1, "vertices": [[0.5, 1], [2, 1]]}))
    fl = parse(json.dumps({"dim": 1, "vertices": [[0.5, 1], [2, 1]]}), backend="float")
    assert fl.backend == "float"
    # rationals stay exact even when floats are allowed
    assert parse(json.dumps({"dim": 1, "vertices": [[1, 1], [2, 1]]}), backend="float").backend \
        == "exact"
    p = doc.build()
    assert serialize(polytope_document(p, "seg")) == serialize(parse(serialize(
        polytope_document(p, "seg"))))


def test_polytope_lists():
    docs = parse(json.dumps({"polytopes": [{"dim": 1, "halfspaces": [[-1, 0], [1, -2]]}]}))
    assert isinstance(docs, list) and docs[0].name == "P0"
    assert docs[0].build().f_vector() == (2,)
