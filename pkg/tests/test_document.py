"""JSON document layer: parsing, located errors, canonical serialization."""

import json

import pytest

from coarsecat.document import (
    build_diagram,
    fixture_document,
    parse,
    resolve_morphism,
    resolve_sym_map,
    serialize_document,
    serialize_space,
)
from coarsecat.errors import DocumentError
from coarsecat.limits import Diagram
from coarsecat.spaces import GBCSpace
from coarsecat.symnat import SymDiagram, SymSpace, Triv, Full

FULL_DOC = {
    "version": "1",
    "spaces": {
        "X": {
            "carrier": ["a", "b", "c"],
            "coarse_generators": [["a", "b"]],
            "bounded_generators": [["a", "b"]],
            "classical": False,
        },
        "Y": {
            "carrier": ["p", "q"],
            "coarse_generators": [],
            "classical": True,
            "action": [["q", "p"]],
        },
        "S": {
            "symbolic": True,
            "bornology": "fincap",
            "F": [0, 2],
            "coarse": "fingen",
            "R": [[0, 2]],
        },
        "T": {"symbolic": True, "bornology": "all", "coarse": "full"},
    },
    "maps": {
        "swap": {"table": {"p": "q", "q": "p"}},
        "idX": {"table": {"a": "a", "b": "b", "c": "c"}},
        "affine": {"exceptions": {"0": 5}, "tail": [1, 2, 0]},
    },
    "diagrams": {
        "pairY": {
            "objects": {"L": "Y", "R": "Y"},
            "arrows": [{"src": "L", "dst": "R", "map": "swap"}],
        },
        "sym": {"objects": {"A": "T"}, "arrows": []},
    },
}


def test_parse_and_reserialize_idempotent():
    doc = parse(json.dumps(FULL_DOC))
    once = serialize_document(doc)
    twice = serialize_document(parse(once))
    assert once == twice


def test_parse_accepts_object_or_text():
    assert parse(FULL_DOC).spaces.keys() == parse(json.dumps(FULL_DOC)).spaces.keys()


def test_space_kinds():
    doc = parse(FULL_DOC)
    assert isinstance(doc.spaces["X"], GBCSpace)
    assert isinstance(doc.spaces["S"], SymSpace)
    assert doc.spaces["Y"].action is not None
    assert doc.spaces["Y"].classical


def test_serialize_space_roundtrip_fields():
    doc = parse(FULL_DOC)
    body = serialize_space(doc.spaces["X"])
    assert body["carrier"] == ["a", "b", "c"]
    assert body["classical"] is False
    assert body["bounded_generators"] == [["a", "b"]]
    sym = serialize_space(doc.spaces["S"])
    assert sym == {
        "symbolic": True,
        "bornology": "fincap",
        "F": [0, 2],
        "coarse": "fingen",
        "R": [[0, 2]],
    }


def test_build_finite_and_symbolic_diagrams():
    doc = parse(FULL_DOC)
    d = build_diagram(doc, "pairY")
    assert isinstance(d, Diagram)
    assert [a.name for a in d.arrows] == ["a0"]
    s = build_diagram(doc, "sym")
    assert isinstance(s, SymDiagram)


def test_resolve_maps():
    doc = parse(FULL_DOC)
    m = resolve_morphism(doc, "swap", doc.spaces["Y"], doc.spaces["Y"])
    assert m.as_table() == {"p": "q", "q": "p"}
    f = resolve_sym_map(doc, "affine")
    assert f.apply(0) == 5 and f.apply(3) == 6


def test_malformed_json_location():
    with pytest.raises(DocumentError) as exc:
        parse("{nope")
    assert "line 1" in str(exc.value)


def test_collects_all_issues_before_raising():
    bad = {
        "version": "9",
        "spaces": {
            "A": {"carrier": ["x", "x"], "coarse_generators": [], "classical": True},
            "B": {
                "carrier": ["u", "v"],
                "coarse_generators": [["u", "v"]],
                "bounded_generators": [["u"]],
                "classical": False,
            },
            "C": {"symbolic": True, "bornology": "fin", "coarse": "full"},
        },
    }
    with pytest.raises(DocumentError) as exc:
        parse(bad)
    paths = {loc["path"] for loc in exc.value.locations}
    assert paths == {"version", "spaces.A.carrier", "spaces.B", "spaces.C"}


def test_incompatible_generators_echo_witness():
    bad = {
        "version": "1",
        "spaces": {
            "B": {
                "carrier": ["u", "v"],
                "coarse_generators": [["u", "v"]],
                "bounded_generators": [["u"]],
                "classical": False,
            }
        },
    }
    with pytest.raises(DocumentError) as exc:
        parse(bad)
    msg = next(l["message"] for l in exc.value.locations if l["path"] == "spaces.B")
    assert "escaping_point" in msg and "v" in msg


def test_bad_action_permutation():
    bad = {
        "version": "1",
        "spaces": {
            "Y": {
                "carrier": ["p", "q"],
                "coarse_generators": [],
                "classical": True,
                "action": [["p", "p"]],
            }
        },
    }
    with pytest.raises(DocumentError) as exc:
        parse(bad)
    assert any("action" in l["path"] for l in exc.value.locations)


def test_diagram_errors():
    bad = json.loads(json.dumps(FULL_DOC))
    bad["diagrams"]["mixed"] = {"objects": {"A": "X", "B": "T"}, "arrows": []}
    bad["diagrams"]["ghost"] = {"objects": {"A": "NOPE"}, "arrows": []}
    with pytest.raises(DocumentError) as exc:
        parse(bad)
    paths = {loc["path"] for loc in exc.value.locations}
    assert any("mixed" in p for p in paths)
    assert any("ghost" in p for p in paths)


def test_symbolic_map_requires_dense_exceptions():
    bad = {
        "version": "1",
        "maps": {"f": {"exceptions": {"2": 1}, "tail": [1, 1, 0]}},
    }
    with pytest.raises(DocumentError):
        parse(bad)


def test_fixture_documents_round_trip():
    for name in ("exa_N", "ex_PO"):
        doc = fixture_document(name)
        assert name in doc.diagrams
        once = serialize_document(doc)
        assert serialize_document(parse(once)) == once
        d = build_diagram(doc, name)
        assert isinstance(d, SymDiagram)


def test_unknown_sections_rejected():
    with pytest.raises(DocumentError):
        parse({"version": "1", "extras": {}})
