"""Batch front end: read a JSON document on stdin (or load a bundled
fixture), run one operation, print a deterministic JSON report.

Exit codes: 0 the operation computed a value or decided true; 1 it decided
false and the report carries a witness; 2 the input or the request was
invalid.  Reports are serialized with sorted keys so identical inputs and
flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import document as docs
from .errors import (
    CapExceeded,
    CoarseError,
    DocumentError,
    Verdict,
)
from .homotopy import are_close, is_coarsely_excisive, is_equivalence, is_flasque, is_nice
from .limits import (
    admissible,
    coequalizer,
    colimit,
    coproduct,
    equalizer,
    exists_in_classical,
    limit,
    product,
    universal_property_check,
)
from .relalg import Carrier, PointSet, Relation
from .spaces import (
    GBCSpace,
    GroupAction,
    Morphism,
    components,
    pullback_structure,
    split,
    tensor,
)
from .symnat import SemilinearSet, SymDiagram, SymMap, SymSpace, sym_admissible, sym_pushout

DEFAULT_MAX_CARRIER = 64

COMMANDS = (
    "validate",
    "normalize",
    "product",
    "coproduct",
    "equalizer",
    "coequalizer",
    "limit",
    "colimit",
    "tensor",
    "pullback",
    "components",
    "split",
    "flasque",
    "close",
    "equivalent",
    "excisive",
    "nice",
    "admissible",
    "exists-classical",
    "oracle",
)


def _elem_str(e) -> str:
    if isinstance(e, str):
        return e
    if isinstance(e, tuple):
        return "(" + ",".join(_elem_str(x) for x in e) + ")"
    return str(e)


def _string_space(s: GBCSpace) -> GBCSpace:
    """Computed carriers contain tuples; documents need strings."""
    if all(isinstance(e, str) for e in s.carrier.elements):
        return s
    carrier = Carrier([_elem_str(e) for e in s.carrier.elements])
    action = None
    if s.action is not None:
        action = GroupAction(carrier, s.action.generators)
    return GBCSpace(
        carrier,
        Relation(carrier, s.entourage.bits),
        PointSet(carrier, s.bounded.bits),
        action,
    )


def _table_str(m: Morphism) -> dict:
    return {
        _elem_str(k): _elem_str(v) for k, v in m.as_table().items()
    }


def _jsonable(x):
    if isinstance(x, Verdict):
        return {"ok": x.ok, "reason": x.reason, "witness": _jsonable(x.witness)}
    if isinstance(x, Morphism):
        return {"table": _table_str(x)}
    if isinstance(x, GBCSpace):
        return docs.serialize_space(_string_space(x))
    if isinstance(x, SymSpace):
        return docs.serialize_space(x)
    if isinstance(x, SymMap):
        return docs.serialize_map(x)
    if isinstance(x, SemilinearSet):
        return x.describe()
    if isinstance(x, PointSet):
        return sorted(_elem_str(e) for e in x.members)
    if isinstance(x, Relation):
        return sorted([_elem_str(a), _elem_str(b)] for a, b in x.pairs)
    if isinstance(x, dict):
        return {_elem_str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(_jsonable(obj), sort_keys=True, indent=1) + "\n")


def _max_carrier() -> int:
    raw = os.environ.get("COARSECAT_MAX_CARRIER", str(DEFAULT_MAX_CARRIER))
    try:
        cap = int(raw)
    except ValueError:
        raise CapExceeded(
            f"COARSECAT_MAX_CARRIER must be an integer, got {raw!r}",
            hint="COARSECAT_MAX_CARRIER",
        ) from None
    if cap < 0:
        raise CapExceeded(
            "COARSECAT_MAX_CARRIER must be non-negative",
            hint="COARSECAT_MAX_CARRIER",
        )
    return cap


def _guard_size(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapExceeded(
            f"{what} would have {n} points, above the carrier cap {cap}",
            cap=cap,
            hint="COARSECAT_MAX_CARRIER",
        )


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coarsecat",
        description="operations on finite and symbolic bornological coarse spaces",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--test-cap", type=int, default=3, help="oracle test-space size")
    p.add_argument("--search-cap", type=int, default=5, help="hom-set search size")
    p.add_argument("--seed", type=int, default=0, help="reserved for sampled runs")
    p.add_argument("--fixture", choices=("exa_N", "ex_PO"), help="use a bundled document")
    p.add_argument("--space", help="space name")
    p.add_argument("--spaces", help="comma separated space names")
    p.add_argument("--diagram", help="diagram name")
    p.add_argument("--dom", help="domain space name")
    p.add_argument("--cod", help="codomain space name")
    p.add_argument("--map", dest="map_name", help="map name")
    p.add_argument("--left", help="left map name")
    p.add_argument("--right", help="right map name")
    p.add_argument("--witness", help="witness map name (flasque)")
    p.add_argument("--subset", help="comma separated carrier elements")
    p.add_argument("--y", help="comma separated carrier elements (first cover half)")
    p.add_argument("--z", help="comma separated carrier elements (second cover half)")
    p.add_argument("--side", choices=("limit", "colimit"), default="limit")
    p.add_argument("--exhaustive", action="store_true",
                   help="quantify over all invariant entourages instead of the fast path")
    return p


def _load(args) -> docs.Document:
    if args.fixture:
        return docs.fixture_document(args.fixture)
    doc = docs.parse(sys.stdin.read())
    cap = _max_carrier()
    for name, s in doc.spaces.items():
        if isinstance(s, GBCSpace):
            _guard_size(len(s.carrier), cap, f"space {name!r}")
    return doc


def _need(args, flag: str):
    attr = {"map": "map_name"}.get(flag, flag.replace("-", "_"))
    val = getattr(args, attr, None)
    if val is None:
        raise DocumentError(f"{args.command} requires --{flag}")
    return val


def _finite_space(doc, name: str) -> GBCSpace:
    if name not in doc.spaces:
        raise DocumentError(f"unknown space {name!r}")
    s = doc.spaces[name]
    if not isinstance(s, GBCSpace):
        raise DocumentError(f"space {name!r} is symbolic; this command needs a finite space")
    return s


def _point_set(space: GBCSpace, csv: str) -> PointSet:
    names = [n for n in csv.split(",") if n != ""]
    return PointSet.from_members(space.carrier, names)


def _space_report(space: GBCSpace, legs=None) -> dict:
    out = {"result": docs.serialize_space(_string_space(space))}
    if legs is not None:
        out["legs"] = legs
    return out


def _diagram(doc, args):
    name = args.diagram or args.fixture
    if name is None:
        raise DocumentError(f"{args.command} requires --diagram or --fixture")
    return docs.build_diagram(doc, name)


def _run(args) -> tuple[dict, bool]:
    doc = _load(args)
    cap = _max_carrier()
    cmd = args.command

    if cmd == "validate":
        built = {}
        for name in doc.diagrams:
            built[name] = docs.build_diagram(doc, name)
        return {
            "spaces": len(doc.spaces),
            "maps": len(doc.maps),
            "diagrams": len(doc.diagrams),
        }, True

    if cmd == "normalize":
        sys.stdout.write(docs.serialize_document(doc))
        return None, True

    if cmd in ("product", "coproduct", "tensor"):
        names = [n for n in _need(args, "spaces").split(",") if n]
        parts = [_finite_space(doc, n) for n in names]
        if cmd == "tensor":
            if len(parts) != 2:
                raise DocumentError("tensor takes exactly two spaces")
            size = len(parts[0].carrier) * len(parts[1].carrier)
            _guard_size(size, cap, "the tensor product")
            return _space_report(tensor(parts[0], parts[1])), True
        if cmd == "product":
            size = 1
            for s in parts:
                size *= len(s.carrier)
            _guard_size(size, cap, "the product")
            space, legs = product(parts)
        else:
            _guard_size(sum(len(s.carrier) for s in parts), cap, "the coproduct")
            space, legs = coproduct(parts)
        return _space_report(space, [_table_str(m) for m in legs]), True

    if cmd in ("equalizer", "coequalizer"):
        dom = _finite_space(doc, _need(args, "dom"))
        cod = _finite_space(doc, _need(args, "cod"))
        f = docs.resolve_morphism(doc, _need(args, "left"), dom, cod)
        g = docs.resolve_morphism(doc, _need(args, "right"), dom, cod)
        space, arrow = (equalizer if cmd == "equalizer" else coequalizer)(f, g)
        out = _space_report(space)
        out["map"] = _table_str(arrow)
        return out, True

    if cmd in ("limit", "colimit"):
        d = _diagram(doc, args)
        if isinstance(d, SymDiagram):
            if cmd == "limit":
                raise DocumentError("the symbolic tier computes pushouts only")
            return {"result": docs.serialize_space(sym_pushout(d))}, True
        if cmd == "limit":
            size = 1
            for s in d.objects.values():
                size *= len(s.carrier)
            _guard_size(size, cap, "the limit")
            space, cone = limit(d)
        else:
            _guard_size(sum(len(s.carrier) for s in d.objects.values()), cap, "the colimit")
            space, cone = colimit(d)
        legs = {name: _table_str(m) for name, m in cone.legs.items()}
        return _space_report(space, legs), True

    if cmd == "pullback":
        dom = _finite_space(doc, _need(args, "dom"))
        cod = _finite_space(doc, _need(args, "cod"))
        map_name = _need(args, "map")
        decl = doc.maps.get(map_name)
        if decl is None or "table" not in decl:
            raise DocumentError(f"pullback needs a finite table map, got {map_name!r}")
        space = pullback_structure(decl["table"], cod, dom.carrier, dom.action)
        out = _space_report(space)
        out["map"] = dict(decl["table"])
        return out, True

    if cmd == "components":
        s = _finite_space(doc, _need(args, "space"))
        rep = components(s)
        return {
            "count": rep.count,
            "connected": rep.connected,
            "classes": [sorted(_elem_str(e) for e in c.members) for c in rep.classes],
        }, True

    if cmd == "split":
        s = _finite_space(doc, _need(args, "space"))
        rep = split(s)
        return {
            "bounded_part": docs.serialize_space(_string_space(rep.bounded_part)),
            "unbounded_part": docs.serialize_space(_string_space(rep.unbounded_part)),
            "to_parts": _table_str(rep.to_parts),
            "from_parts": _table_str(rep.from_parts),
        }, True

    if cmd == "flasque":
        s = _finite_space(doc, _need(args, "space"))
        witness = None
        if args.witness:
            witness = docs.resolve_morphism(doc, args.witness, s, s)
        v = is_flasque(s, witness=witness, search_cap=args.search_cap)
        return {"reason": v.reason, "witness": v.witness}, v.ok

    if cmd == "close":
        dom = _finite_space(doc, _need(args, "dom"))
        cod = _finite_space(doc, _need(args, "cod"))
        f = docs.resolve_morphism(doc, _need(args, "left"), dom, cod)
        g = docs.resolve_morphism(doc, _need(args, "right"), dom, cod)
        if are_close(f, g):
            return {}, True
        bad = next(
            i for i in range(len(f.mapping))
            if not cod.entourage.has_index(f.mapping[i], g.mapping[i])
        )
        return {
            "witness": {
                "point": _elem_str(dom.carrier.elements[bad]),
                "images": [
                    _elem_str(cod.carrier.elements[f.mapping[bad]]),
                    _elem_str(cod.carrier.elements[g.mapping[bad]]),
                ],
            }
        }, False

    if cmd == "equivalent":
        dom = _finite_space(doc, _need(args, "dom"))
        cod = _finite_space(doc, _need(args, "cod"))
        f = docs.resolve_morphism(doc, _need(args, "map"), dom, cod)
        v = is_equivalence(f, search_cap=args.search_cap)
        return {"reason": v.reason, "witness": v.witness}, v.ok

    if cmd == "excisive":
        s = _finite_space(doc, _need(args, "space"))
        v = is_coarsely_excisive(
            s,
            _point_set(s, _need(args, "y")),
            _point_set(s, _need(args, "z")),
            exhaustive=args.exhaustive,
            search_cap=args.search_cap,
        )
        return {"reason": v.reason, "witness": v.witness}, v.ok

    if cmd == "nice":
        s = _finite_space(doc, _need(args, "space"))
        v = is_nice(
            s,
            _point_set(s, _need(args, "subset")),
            exhaustive=True if args.exhaustive else None,
            search_cap=args.search_cap,
        )
        return {"reason": v.reason, "witness": v.witness}, v.ok

    if cmd == "admissible":
        d = _diagram(doc, args)
        v = sym_admissible(d) if isinstance(d, SymDiagram) else admissible(d)
        return {"reason": v.reason, "witness": v.witness}, v.ok

    if cmd == "exists-classical":
        d = _diagram(doc, args)
        if isinstance(d, SymDiagram):
            raise DocumentError("exists-classical needs a finite diagram")
        rep = exists_in_classical(d, side=args.side)
        out = {"side": args.side}
        if rep.exists:
            out["result"] = docs.serialize_space(_string_space(rep.space))
        else:
            out["witness"] = rep.witness
        return out, rep.exists

    if cmd == "oracle":
        d = _diagram(doc, args)
        if isinstance(d, SymDiagram):
            raise DocumentError("oracle needs a finite diagram")
        if args.side == "limit":
            space, cone = limit(d)
        else:
            space, cone = colimit(d)
        v = universal_property_check(cone, d, test_cap=args.test_cap)
        return {"side": args.side, "reason": v.reason, "witness": v.witness}, v.ok

    raise DocumentError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        report, ok = _run(args)
    except DocumentError as e:
        if args.command == "validate":
            _emit({"command": "validate", "ok": False, "witness": e.locations,
                   "message": str(e)})
            return 1
        _emit({"command": args.command, "error": "DocumentError",
               "message": str(e), "locations": e.locations})
        return 2
    except CapExceeded as e:
        _emit({"command": args.command, "error": "CapExceeded",
               "message": str(e), "cap": e.cap, "hint": e.hint})
        return 2
    except CoarseError as e:
        payload = {"command": args.command, "error": type(e).__name__,
                   "message": str(e)}
        for attr in ("witness", "violations", "locations"):
            if getattr(e, attr, None):
                payload[attr] = getattr(e, attr)
        _emit(payload)
        return 2
    if report is None:
        return 0
    report["command"] = args.command
    report["ok"] = ok
    _emit(report)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
