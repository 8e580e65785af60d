"""JSON reading and writing for complexes and bordisms.

Format::

    {"dimension": d, "facets": [[v, ...], ...],
     "incoming": [{"name": ..., "facets": [...], "vertex_map": {"0": 7, ...}}, ...],
     "outgoing": [...], "orientation": "integer" | "mod2" | "none"}

A piece without ``facets`` is looked up by ``name`` in the manifold library.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from .bordism import Bordism, BoundaryPiece
from .complex import ComplexError, SimComplex


class FormatError(ValueError):
    """Malformed complex or bordism file; the message names the offending field."""


def _facets(obj: object, where: str) -> list[list[int]]:
    if not isinstance(obj, list):
        raise FormatError(f"{where}: 'facets' must be a list of vertex lists")
    out = []
    for i, f in enumerate(obj):
        if not isinstance(f, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in f):
            raise FormatError(f"{where}: facet {i} is not a list of integers")
        out.append(f)
    return out


def _piece(obj: object, where: str) -> BoundaryPiece:
    if not isinstance(obj, Mapping):
        raise FormatError(f"{where}: a boundary piece must be an object")
    name = str(obj.get("name", ""))
    if "facets" in obj:
        try:
            N = SimComplex(_facets(obj["facets"], where), name=name)
        except ComplexError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    else:
        from .library import manifold_library

        try:
            N = manifold_library(name)
        except KeyError as exc:
            raise FormatError(f"{where}: piece has no facets and {name!r} is not a library manifold") from exc
        if not isinstance(N, SimComplex):
            raise FormatError(f"{where}: {name!r} is a bordism, not a closed manifold")
    vm_raw = obj.get("vertex_map")
    if not isinstance(vm_raw, Mapping):
        raise FormatError(f"{where}: 'vertex_map' must be an object")
    try:
        vm = {int(k): int(v) for k, v in vm_raw.items()}
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: vertex_map keys and values must be integers") from exc
    return BoundaryPiece(name or N.name, N, vm)


def bordism_from_json(data: str | Mapping, name: str = "") -> Bordism:
    """Build (and validate) a bordism from the JSON format above."""
    try:
        obj = json.loads(data) if isinstance(data, str) else data
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, Mapping):
        raise FormatError("top level must be an object")
    if "facets" not in obj:
        raise FormatError("missing field 'facets'")
    facets = _facets(obj["facets"], "complex")
    try:
        M = SimComplex(facets, name=name or str(obj.get("name", "")))
    except ComplexError as exc:
        raise FormatError(f"complex: {exc}") from exc
    d = obj.get("dimension", M.dimension)
    if not isinstance(d, int):
        raise FormatError("'dimension' must be an integer")
    ins = [_piece(p, f"incoming[{i}]") for i, p in enumerate(obj.get("incoming", []))]
    outs = [_piece(p, f"outgoing[{i}]") for i, p in enumerate(obj.get("outgoing", []))]
    orient = obj.get("orientation", "integer")
    if orient not in ("integer", "mod2", "none"):
        raise FormatError(f"'orientation' must be integer, mod2 or none, got {orient!r}")
    return Bordism(M, ins, outs, orientation=orient, name=M.name, dimension=d)


def complex_from_json(data: str | Mapping, name: str = "") -> SimComplex:
    obj = json.loads(data) if isinstance(data, str) else data
    if not isinstance(obj, Mapping) or "facets" not in obj:
        raise FormatError("missing field 'facets'")
    try:
        return SimComplex(_facets(obj["facets"], "complex"), name=name or str(obj.get("name", "")))
    except ComplexError as exc:
        raise FormatError(f"complex: {exc}") from exc


def _piece_to_obj(p: BoundaryPiece) -> dict:
    return {
        "name": p.name,
        "facets": [list(f) for f in p.complex.facets],
        "vertex_map": {str(k): int(v) for k, v in sorted(p.vertex_map.items())},
    }


def bordism_to_json_obj(B: Bordism) -> dict:
    return {
        "name": B.name,
        "dimension": B.d,
        "facets": [list(f) for f in B.M.facets],
        "incoming": [_piece_to_obj(p) for p in B.incoming],
        "outgoing": [_piece_to_obj(p) for p in B.outgoing],
        "orientation": B.coeff,
    }


def complex_to_json_obj(K: SimComplex) -> dict:
    return {"name": K.name, "dimension": K.dimension, "facets": [list(f) for f in K.facets]}


def load(path: str | Path) -> Bordism | SimComplex:
    """Read a file; files without boundary data and orientation give a plain complex."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {p}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(obj, Mapping) and any(k in obj for k in ("incoming", "outgoing", "orientation")):
        return bordism_from_json(obj, name=str(obj.get("name", "")) or p.stem)
    return complex_from_json(obj, name=(obj.get("name") if isinstance(obj, Mapping) else "") or p.stem)
