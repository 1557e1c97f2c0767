"""Versioned JSON documents for the four exchangeable object kinds.

Every document carries a top-level "format" tag and integer "version".
Permutations are stored as bare image lists, so degree is implicit in
the list length. Serialization is deterministic: keys sorted, two
space indent, trailing newline.
"""
from __future__ import annotations

import json

from .errors import InvalidInput
from .exhaustion import ExhaustionGraph, NormalizedExhaustion, Piece
from .hurwitz import HurwitzData
from .layered import Block, LayeredCover
from .perms import Perm
from .surfaces import ClosedSurface, euler_characteristic

FORMAT_VERSION = 1


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInput("expected a JSON object at top level")
    return doc


KNOWN_FORMATS = ("hurwitz", "exhaustion", "layered", "report")


def sniff(doc: dict) -> str:
    fmt = doc.get("format")
    if not isinstance(fmt, str):
        raise InvalidInput("missing document format tag")
    if fmt not in KNOWN_FORMATS:
        raise InvalidInput(f"unknown document format {fmt!r}")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise InvalidInput(f"unsupported document version {version!r}")
    return fmt


def _need(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise InvalidInput(f"missing {key!r} in {where}")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise InvalidInput(f"{where}.{key} must be {kind.__name__}")
    return value


# --- permutations ---


def perm_to_json(p: Perm) -> list[int]:
    return list(p.images)


def perm_from_json(data, where: str = "perm") -> Perm:
    if not isinstance(data, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in data
    ):
        raise InvalidInput(f"{where} must be a list of integers")
    try:
        return Perm(tuple(data))
    except ValueError as exc:
        raise InvalidInput(f"{where}: {exc}") from None


# --- closed surfaces ---


def surface_to_json(s: ClosedSurface) -> dict:
    return {
        "orientable": s.orientable,
        "genus": s.genus,
        "name": s.name,
        "euler_characteristic": euler_characteristic(s),
    }


# --- branched cover data over a closed base ---


def hurwitz_to_json(d: HurwitzData) -> dict:
    return {
        "format": "hurwitz",
        "version": FORMAT_VERSION,
        "base": {"orientable": d.base.orientable, "genus": d.base.genus},
        "degree": d.degree,
        "handles": [[perm_to_json(a), perm_to_json(b)] for a, b in d.handles],
        "crosscaps": [perm_to_json(c) for c in d.crosscaps],
        "meridians": [perm_to_json(m) for m in d.meridians],
    }


def hurwitz_from_json(doc: dict) -> HurwitzData:
    if sniff(doc) != "hurwitz":
        raise InvalidInput(f"expected a hurwitz document, got {doc.get('format')!r}")
    base_doc = _need(doc, "base", dict, "hurwitz")
    base = ClosedSurface(
        _need(base_doc, "orientable", bool, "hurwitz.base"),
        _need(base_doc, "genus", int, "hurwitz.base"),
    )
    degree = _need(doc, "degree", int, "hurwitz")
    handles = []
    for i, pair in enumerate(doc.get("handles", [])):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InvalidInput(f"hurwitz.handles[{i}] must be a pair")
        handles.append(
            (
                perm_from_json(pair[0], f"handles[{i}][0]"),
                perm_from_json(pair[1], f"handles[{i}][1]"),
            )
        )
    crosscaps = [
        perm_from_json(c, f"crosscaps[{i}]")
        for i, c in enumerate(doc.get("crosscaps", []))
    ]
    meridians = [
        perm_from_json(m, f"meridians[{i}]")
        for i, m in enumerate(doc.get("meridians", []))
    ]
    return HurwitzData(base, degree, tuple(handles), tuple(crosscaps), tuple(meridians))


# --- exhaustion graphs ---


def exhaustion_to_json(g: ExhaustionGraph) -> dict:
    doc = {
        "format": "exhaustion",
        "version": FORMAT_VERSION,
        "pieces": [
            {
                "id": p.id,
                "level": p.level,
                "genus": p.genus,
                "inner": list(p.inner),
                "outer": list(p.outer),
                "orientable": p.orientable,
            }
            for p in g.pieces
        ],
    }
    if isinstance(g, NormalizedExhaustion):
        doc["stable_depth"] = g.stable_depth
    return doc


def exhaustion_from_json(doc: dict) -> ExhaustionGraph:
    if sniff(doc) != "exhaustion":
        raise InvalidInput(f"expected an exhaustion document, got {doc.get('format')!r}")
    raw = _need(doc, "pieces", list, "exhaustion")
    pieces = []
    for i, pd in enumerate(raw):
        if not isinstance(pd, dict):
            raise InvalidInput(f"exhaustion.pieces[{i}] must be an object")
        where = f"pieces[{i}]"
        pieces.append(
            Piece(
                _need(pd, "id", str, where),
                _need(pd, "level", int, where),
                _need(pd, "genus", int, where),
                tuple(_need(pd, "inner", list, where)),
                tuple(_need(pd, "outer", list, where)),
                pd.get("orientable", True),
            )
        )
    if "stable_depth" in doc:
        return NormalizedExhaustion(
            tuple(pieces), stable_depth=_need(doc, "stable_depth", int, "exhaustion")
        )
    return ExhaustionGraph(tuple(pieces))


# --- layered covers ---


def _cycle_to_json(cyc):
    return None if cyc is None else list(cyc)


def layered_to_json(c: LayeredCover) -> dict:
    return {
        "format": "layered",
        "version": FORMAT_VERSION,
        "depth": c.depth,
        "degree": c.degree,
        "blocks": [
            {
                "piece": b.piece,
                "level": b.level,
                "kind": b.kind,
                "sheets": list(b.sheets),
                "caps": list(b.caps),
                "inbound": _cycle_to_json(b.inbound),
                "meridians": [list(m) for m in b.meridians],
                "labels": [list(lab) for lab in b.labels],
                "outbound": [[circle, list(cyc)] for circle, cyc in b.outbound],
                "parent": b.parent,
                "parent_circle": b.parent_circle,
            }
            for b in c.blocks
        ],
    }


def layered_from_json(doc: dict) -> LayeredCover:
    if sniff(doc) != "layered":
        raise InvalidInput(f"expected a layered document, got {doc.get('format')!r}")
    blocks = []
    for i, bd in enumerate(_need(doc, "blocks", list, "layered")):
        if not isinstance(bd, dict):
            raise InvalidInput(f"layered.blocks[{i}] must be an object")
        where = f"blocks[{i}]"
        inbound = bd.get("inbound")
        outbound = []
        for j, entry in enumerate(_need(bd, "outbound", list, where)):
            if not isinstance(entry, list) or len(entry) != 2:
                raise InvalidInput(f"{where}.outbound[{j}] must be [circle, cycle]")
            outbound.append((entry[0], tuple(entry[1])))
        blocks.append(
            Block(
                piece=_need(bd, "piece", str, where),
                level=_need(bd, "level", int, where),
                kind=_need(bd, "kind", str, where),
                sheets=tuple(_need(bd, "sheets", list, where)),
                caps=tuple(_need(bd, "caps", list, where)),
                inbound=None if inbound is None else tuple(inbound),
                meridians=tuple(tuple(m) for m in _need(bd, "meridians", list, where)),
                labels=tuple(tuple(lab) for lab in _need(bd, "labels", list, where)),
                outbound=tuple(outbound),
                parent=bd.get("parent"),
                parent_circle=bd.get("parent_circle"),
            )
        )
    return LayeredCover(
        depth=_need(doc, "depth", int, "layered"),
        degree=_need(doc, "degree", int, "layered"),
        blocks=tuple(blocks),
    )
