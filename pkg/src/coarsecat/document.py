"""JSON document format: named spaces (finite or symbolic), raw map
declarations, and diagrams wiring them together.

Finite carriers are lists of unique strings; a finite space is given by
generators and normalized on output to the closure's off-diagonal pairs
plus a single saturated bounded region, so serialize(parse(d)) is
idempotent after one pass.  Map declarations carry no domain or codomain;
the context that uses them supplies both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CoarseError, DocumentError
from .limits import Arrow, Diagram
from .relalg import Carrier, PointSet, Relation
from .spaces import GBCSpace, GroupAction, Morphism, from_generators
from .symnat import (
    All,
    Band,
    Diag,
    Fin,
    FinCap,
    FinGen,
    Full,
    SymArrow,
    SymDiagram,
    SymMap,
    SymSpace,
    Triv,
    fingen,
)

FORMAT_VERSION = "1"

_BORN_NAMES = {"fin": Fin, "all": All, "triv": Triv, "fincap": FinCap}
_COARSE_NAMES = {"diag": Diag, "full": Full, "band": Band, "fingen": FinGen}


@dataclass
class Document:
    version: str = FORMAT_VERSION
    spaces: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)


class _Issues:
    def __init__(self):
        self.items = []

    def add(self, path: str, message: str):
        self.items.append({"path": path, "message": message})

    def raise_if_any(self):
        if self.items:
            raise DocumentError(
                f"{len(self.items)} document error(s); see locations", self.items
            )


def _parse_sym_space(decl: dict, path: str, issues: _Issues):
    born_name = decl.get("bornology")
    coarse_name = decl.get("coarse")
    if born_name not in _BORN_NAMES:
        issues.add(f"{path}.bornology", f"unknown bornology tag {born_name!r}")
        return None
    if coarse_name not in _COARSE_NAMES:
        issues.add(f"{path}.coarse", f"unknown coarse tag {coarse_name!r}")
        return None
    if born_name == "fincap":
        cap = decl.get("F")
        if not isinstance(cap, list) or any(
            not isinstance(p, int) or p < 0 for p in cap
        ):
            issues.add(f"{path}.F", "fincap needs F: a list of naturals")
            return None
        born = FinCap(frozenset(cap))
    else:
        born = _BORN_NAMES[born_name]()
    if coarse_name == "fingen":
        rel = decl.get("R")
        if not isinstance(rel, list) or any(
            not (isinstance(p, list) and len(p) == 2) for p in rel
        ):
            issues.add(f"{path}.R", "fingen needs R: a list of [a, b] pairs")
            return None
        coarse = fingen([tuple(p) for p in rel])
    else:
        coarse = _COARSE_NAMES[coarse_name]()
    try:
        return SymSpace(born, coarse)
    except CoarseError as e:
        issues.add(path, str(e))
        return None


def _parse_finite_space(decl: dict, path: str, issues: _Issues):
    raw = decl.get("carrier")
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        issues.add(f"{path}.carrier", "carrier must be a list of strings")
        return None
    if len(set(raw)) != len(raw):
        issues.add(f"{path}.carrier", "carrier elements must be unique")
        return None
    carrier = Carrier(raw)
    elems = set(raw)
    gens = []
    for i, pair in enumerate(decl.get("coarse_generators", [])):
        loc = f"{path}.coarse_generators[{i}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            issues.add(loc, "expected a [a, b] pair")
            return None
        if pair[0] not in elems or pair[1] not in elems:
            issues.add(loc, f"pair {pair} leaves the carrier")
            return None
        gens.append(Relation.from_pairs(carrier, [tuple(pair)]))
    bsets = []
    for i, members in enumerate(decl.get("bounded_generators", [])):
        loc = f"{path}.bounded_generators[{i}]"
        if not isinstance(members, list) or any(m not in elems for m in members):
            issues.add(loc, "expected a list of carrier elements")
            return None
        bsets.append(PointSet.from_members(carrier, members))
    action = None
    if "action" in decl:
        perms = decl["action"]
        ok = isinstance(perms, list) and all(
            isinstance(p, list) and sorted(p) == sorted(raw) for p in perms
        )
        if not ok:
            issues.add(f"{path}.action", "each generator must permute the carrier")
            return None
        try:
            action = GroupAction(
                carrier, [tuple(carrier.index(x) for x in p) for p in perms]
            )
        except CoarseError as e:
            issues.add(f"{path}.action", str(e))
            return None
    try:
        return from_generators(
            carrier,
            gens,
            bsets,
            classical=bool(decl.get("classical", False)),
            action=action,
        )
    except CoarseError as e:
        witness = getattr(e, "witness", None)
        suffix = f" (witness: {witness})" if witness else ""
        issues.add(path, str(e) + suffix)
        return None


def _parse_map(decl: dict, path: str, issues: _Issues):
    if "table" in decl:
        table = decl["table"]
        if not isinstance(table, dict) or any(
            not isinstance(k, str) or not isinstance(v, str)
            for k, v in table.items()
        ):
            issues.add(f"{path}.table", "table must send strings to strings")
            return None
        return {"table": dict(table)}
    if "tail" in decl:
        tail = decl.get("tail")
        exc = decl.get("exceptions", {})
        if not (isinstance(tail, list) and len(tail) == 3):
            issues.add(f"{path}.tail", "tail must be [threshold, slope, offset]")
            return None
        if not isinstance(exc, dict):
            issues.add(f"{path}.exceptions", "exceptions must map indices to values")
            return None
        try:
            values = tuple(exc[str(i)] for i in range(tail[0]))
        except KeyError as e:
            issues.add(
                f"{path}.exceptions", f"missing exception for index {e.args[0]}"
            )
            return None
        if len(exc) != tail[0]:
            issues.add(f"{path}.exceptions", "exceptions must cover exactly [0, threshold)")
            return None
        try:
            return {"symmap": SymMap(values, tuple(tail))}
        except (CoarseError, ValueError, TypeError) as e:
            issues.add(path, str(e))
            return None
    issues.add(path, "a map needs a table or an exceptions/tail pair")
    return None


def _parse_diagram(decl: dict, path: str, doc: Document, issues: _Issues):
    objects = decl.get("objects")
    if not isinstance(objects, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in objects.items()
    ):
        issues.add(f"{path}.objects", "objects must map labels to space names")
        return None
    for label, space_name in objects.items():
        if space_name not in doc.spaces:
            issues.add(f"{path}.objects.{label}", f"unknown space {space_name!r}")
            return None
    kinds = {isinstance(doc.spaces[s], SymSpace) for s in objects.values()}
    if len(kinds) > 1:
        issues.add(f"{path}.objects", "cannot mix finite and symbolic spaces")
        return None
    arrows = decl.get("arrows", [])
    if not isinstance(arrows, list):
        issues.add(f"{path}.arrows", "arrows must be a list")
        return None
    out = []
    for i, a in enumerate(arrows):
        loc = f"{path}.arrows[{i}]"
        if not isinstance(a, dict):
            issues.add(loc, "each arrow is an object with src, dst, map")
            return None
        src, dst, map_name = a.get("src"), a.get("dst"), a.get("map")
        if src not in objects or dst not in objects:
            issues.add(loc, f"src/dst must be object labels, got {src!r}/{dst!r}")
            return None
        if map_name not in doc.maps:
            issues.add(f"{loc}.map", f"unknown map {map_name!r}")
            return None
        out.append(
            {"name": a.get("name", f"a{i}"), "src": src, "dst": dst, "map": map_name}
        )
    names = [a["name"] for a in out]
    if len(set(names)) != len(names):
        issues.add(f"{path}.arrows", "arrow names must be unique")
        return None
    return {"objects": dict(objects), "arrows": out}


def parse(text) -> Document:
    """Parse and validate a document from JSON text (or an already decoded
    object); raises DocumentError carrying every located problem."""
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(
                f"not valid JSON: {e.msg} at line {e.lineno} column {e.colno}",
                [{"path": "$", "message": str(e)}],
            ) from None
    else:
        obj = text
    issues = _Issues()
    if not isinstance(obj, dict):
        issues.add("$", "document must be a JSON object")
        issues.raise_if_any()
    version = obj.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        issues.add("version", f"unrecognized format version {version!r}")
    doc = Document(version=FORMAT_VERSION)
    for section in obj:
        if section not in ("version", "spaces", "maps", "diagrams"):
            issues.add(section, "unknown section")
    spaces = obj.get("spaces", {})
    if not isinstance(spaces, dict):
        issues.add("spaces", "spaces must be an object")
        spaces = {}
    for name, decl in spaces.items():
        path = f"spaces.{name}"
        if not isinstance(decl, dict):
            issues.add(path, "a space is an object")
            continue
        space = (
            _parse_sym_space(decl, path, issues)
            if decl.get("symbolic")
            else _parse_finite_space(decl, path, issues)
        )
        if space is not None:
            doc.spaces[name] = space
    maps = obj.get("maps", {})
    if not isinstance(maps, dict):
        issues.add("maps", "maps must be an object")
        maps = {}
    for name, decl in maps.items():
        path = f"maps.{name}"
        if not isinstance(decl, dict):
            issues.add(path, "a map is an object")
            continue
        parsed = _parse_map(decl, path, issues)
        if parsed is not None:
            doc.maps[name] = parsed
    diagrams = obj.get("diagrams", {})
    if not isinstance(diagrams, dict):
        issues.add("diagrams", "diagrams must be an object")
        diagrams = {}
    for name, decl in diagrams.items():
        path = f"diagrams.{name}"
        if not isinstance(decl, dict):
            issues.add(path, "a diagram is an object")
            continue
        parsed = _parse_diagram(decl, path, doc, issues)
        if parsed is not None:
            doc.diagrams[name] = parsed
    issues.raise_if_any()
    return doc


def resolve_morphism(doc: Document, map_name: str, dom: GBCSpace, cod: GBCSpace) -> Morphism:
    """Build and validate the named finite map between the given spaces."""
    if map_name not in doc.maps:
        raise DocumentError(f"unknown map {map_name!r}")
    decl = doc.maps[map_name]
    if "table" not in decl:
        raise DocumentError(f"map {map_name!r} is symbolic; a finite table is needed")
    return Morphism.from_table(dom, cod, decl["table"])


def resolve_sym_map(doc: Document, map_name: str) -> SymMap:
    if map_name not in doc.maps:
        raise DocumentError(f"unknown map {map_name!r}")
    decl = doc.maps[map_name]
    if "symmap" not in decl:
        raise DocumentError(f"map {map_name!r} is a finite table, not symbolic")
    return decl["symmap"]


def build_diagram(doc: Document, name: str):
    """Materialize a named diagram: a finite Diagram with validated
    morphisms, or a SymDiagram when its objects are symbolic."""
    if name not in doc.diagrams:
        raise DocumentError(f"unknown diagram {name!r}")
    decl = doc.diagrams[name]
    objects = {label: doc.spaces[s] for label, s in decl["objects"].items()}
    symbolic = any(isinstance(s, SymSpace) for s in objects.values())
    if symbolic:
        arrows = [
            SymArrow(a["name"], a["src"], a["dst"], resolve_sym_map(doc, a["map"]))
            for a in decl["arrows"]
        ]
        return SymDiagram(objects, arrows)
    arrows = [
        Arrow(
            a["name"],
            a["src"],
            a["dst"],
            resolve_morphism(doc, a["map"], objects[a["src"]], objects[a["dst"]]),
        )
        for a in decl["arrows"]
    ]
    return Diagram(objects, arrows)


def serialize_space(s) -> dict:
    if isinstance(s, SymSpace):
        out = {"symbolic": True}
        b = s.bornology_tag
        c = s.coarse_tag
        out["bornology"] = type(b).__name__.lower()
        if isinstance(b, FinCap):
            out["F"] = sorted(b.points)
        out["coarse"] = type(c).__name__.lower()
        if isinstance(c, FinGen):
            pairs = []
            for cls in c.classes:
                anchor = min(cls)
                pairs.extend([anchor, x] for x in sorted(cls) if x != anchor)
            out["R"] = pairs
        return out
    names = list(s.carrier.elements)
    pairs = [
        [names[i], names[j]] for i, j in s.entourage.index_pairs() if i < j
    ]
    out = {
        "carrier": names,
        "coarse_generators": pairs,
        "classical": s.classical,
    }
    if not s.classical:
        out["bounded_generators"] = (
            [sorted(s.bounded.members)] if not s.bounded.is_empty() else []
        )
    if s.action is not None:
        out["action"] = [
            [names[i] for i in perm] for perm in s.action.generators
        ]
    return out


def serialize_map(decl) -> dict:
    if isinstance(decl, Morphism):
        return {"table": decl.as_table()}
    if isinstance(decl, SymMap):
        n, a, b = decl.tail
        return {
            "exceptions": {str(i): v for i, v in enumerate(decl.exceptions)},
            "tail": [n, a, b],
        }
    if "table" in decl:
        return {"table": dict(decl["table"])}
    return serialize_map(decl["symmap"])


def serialize_document(doc: Document) -> str:
    obj = {
        "version": doc.version,
        "spaces": {n: serialize_space(s) for n, s in doc.spaces.items()},
        "maps": {n: serialize_map(d) for n, d in doc.maps.items()},
        "diagrams": {
            n: {
                "objects": d["objects"],
                "arrows": [dict(a) for a in d["arrows"]],
            }
            for n, d in doc.diagrams.items()
        },
    }
    if not obj["maps"]:
        del obj["maps"]
    if not obj["diagrams"]:
        del obj["diagrams"]
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def fixture_document(name: str) -> Document:
    """Bundled symbolic fixtures as full documents: the three spaces, the
    identity map, and the span diagram under the fixture's name."""
    from .symnat import FIXTURES

    if name not in FIXTURES:
        raise DocumentError(f"unknown fixture {name!r}")
    sym = FIXTURES[name]()
    doc = Document()
    doc.spaces = dict(sym.objects)
    doc.maps = {"id": {"symmap": SymMap.identity()}}
    doc.diagrams = {
        name: {
            "objects": {k: k for k in sym.objects},
            "arrows": [
                {"name": a.name, "src": a.src, "dst": a.dst, "map": "id"}
                for a in sym.arrows
            ],
        }
    }
    return doc
