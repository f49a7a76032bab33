"""JSON files for groups, cubic diagrams and truncated simplicial groups.

A group entry is either a catalogue name ("C4", "C2×C2", "D4") or an object
with a ``table`` (full Cayley table, identity at index 0) or a list of
``permutations`` that generate the group, plus optional ``labels``.

Diagram files key objects by bitmask strings such as "0b101" and list the
generating maps with their image tables.  Simplicial files use the same
group section and add ``levels``, ``faces`` and ``degeneracies``.

Parsed groups remember how the file described them, so serializing a parsed
file reproduces it up to canonical JSON formatting.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .cubes import CubicExtensionDiagram
from .errors import CextError
from .groups import FiniteGroup, Group, GroupHom, from_permutations
from .simplicial import TruncatedSimplicialGroup

DIAGRAM_FORMAT = "cextkit.diagram/1"
SIMPLICIAL_FORMAT = "cextkit.simplicial/1"
GROUP_FORMAT = "cextkit.group/1"


class FormatError(CextError):
    """A file could not be parsed into the requested structure."""


# ------------------------------------------------------------ canonical json

_NUM_LIST = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]")


def canonical_json(obj) -> str:
    """Sorted keys, two-space indent, integer lists kept on one line."""
    text = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    text = _NUM_LIST.sub(lambda m: "[" + ", ".join(re.split(r"\s*,\s*", m.group(1))) + "]", text)
    return text + "\n"


def normalize_json_text(text: str) -> str:
    return canonical_json(json.loads(text))


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            source = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read {source}: {exc}") from exc
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    return data


# ------------------------------------------------------------------ groups

def group_from_spec(spec, ref: str | None = None) -> FiniteGroup:
    """Build a group from a catalogue name or a table/permutation object."""
    from .corpus import named_group

    if isinstance(spec, str):
        try:
            G = named_group(spec)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
        G._file_ref, G._file_spec = spec, None
        return G
    if not isinstance(spec, dict):
        raise FormatError(f"group entry must be a name or an object, got {type(spec).__name__}")
    name = spec.get("name", ref or "G")
    labels = spec.get("labels")
    try:
        if "table" in spec:
            G = FiniteGroup(spec["table"], name=name, labels=labels)
        elif "permutations" in spec:
            G, _ = from_permutations(spec["permutations"], name=name)
        elif "name" in spec and set(spec) <= {"name", "format"}:
            G = group_from_spec(spec["name"])
            return G
        else:
            raise FormatError(f"group {name!r} needs a 'table' or 'permutations' field")
    except FormatError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise FormatError(f"group {name!r}: {exc}") from exc
    if labels is not None:
        if len(labels) != G.order or len(set(labels)) != G.order:
            raise FormatError(f"group {name!r}: need {G.order} distinct labels")
        G.labels = list(labels)
    G._file_ref, G._file_spec = ref or name, spec
    return G


def parse_group_file(source) -> FiniteGroup:
    data = _load(source)
    return group_from_spec(data, data.get("name"))


def _table(G: Group) -> list:
    if isinstance(G, FiniteGroup):
        return G.table.tolist()
    el = G.elements
    return np.asarray(G.mul(el[:, None], el[None, :])).tolist()


def group_spec(G: Group) -> dict:
    spec = getattr(G, "_file_spec", None)
    if spec is not None:
        return spec
    out = {"name": G.name, "table": _table(G)}
    labels = getattr(G, "labels", None)
    if labels is not None:
        out["labels"] = list(labels)
    return out


def serialize_group(G: Group) -> dict:
    spec = getattr(G, "_file_spec", None)
    if getattr(G, "_file_ref", None) is not None and spec is None:
        return {"format": GROUP_FORMAT, "name": G._file_ref}
    return {"format": GROUP_FORMAT, **group_spec(G)}


class _GroupTable:
    """Resolves the names used in a file to shared group objects."""

    def __init__(self, defs: dict):
        if not isinstance(defs, dict):
            raise FormatError("'groups' must be an object")
        self.defs = defs
        self.cache: dict[str, Group] = {}

    def get(self, ref) -> Group:
        if not isinstance(ref, str):
            raise FormatError(f"object reference must be a string, got {ref!r}")
        if ref not in self.cache:
            self.cache[ref] = group_from_spec(self.defs[ref] if ref in self.defs else ref, ref)
        return self.cache[ref]


class _Namer:
    """Assigns file names to groups while serializing."""

    def __init__(self):
        self.names: dict[int, str] = {}
        self.defs: dict[str, dict] = {}

    def ref(self, G: Group) -> str:
        key = id(G)
        if key in self.names:
            return self.names[key]
        ref = getattr(G, "_file_ref", None)
        spec = getattr(G, "_file_spec", None)
        if ref is not None and spec is None:
            self.names[key] = ref
            return ref
        base = ref or G.name or "G"
        nm, k = base, 2
        while nm in self.defs or nm in self.names.values():
            nm, k = f"{base}#{k}", k + 1
        self.names[key] = nm
        self.defs[nm] = group_spec(G)
        return nm


def _mask_key(mask: int) -> str:
    return bin(mask)


def _parse_mask(key) -> int:
    if not isinstance(key, str) or not re.fullmatch(r"0b[01]+", key):
        raise FormatError(f"subset keys must look like '0b101', got {key!r}")
    return int(key, 2)


def _images(entry: dict, what: str) -> list:
    im = entry.get("images")
    if not isinstance(im, list) or not all(isinstance(v, int) for v in im):
        raise FormatError(f"{what}: 'images' must be a list of integers")
    return im


def _hom(dom: Group, cod: Group, images: list, what: str) -> GroupHom:
    if len(images) != dom.order:
        raise FormatError(f"{what}: expected {dom.order} images, got {len(images)}")
    if min(images, default=0) < 0 or max(images, default=0) >= cod.order:
        raise FormatError(f"{what}: image out of range")
    try:
        return GroupHom(dom, cod, images)
    except (ValueError, CextError) as exc:
        raise FormatError(f"{what}: {exc}") from exc


# ---------------------------------------------------------------- diagrams

def parse_diagram(source) -> CubicExtensionDiagram:
    data = _load(source)
    try:
        n = int(data["degree"])
        objs_raw = data["objects"]
        maps_raw = data["maps"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"diagram needs 'degree', 'objects' and 'maps': {exc}") from exc
    if n < 0:
        raise FormatError("degree must be non-negative")
    groups = _GroupTable(data.get("groups", {}))
    objects = {}
    for key, ref in objs_raw.items():
        m = _parse_mask(key)
        if m >= 1 << n:
            raise FormatError(f"subset {key} is outside a {n}-cube")
        objects[m] = groups.get(ref)
    if len(objects) != 1 << n:
        raise FormatError(f"expected {1 << n} objects, got {len(objects)}")
    maps = {}
    for entry in maps_raw:
        try:
            J, i = _parse_mask(entry["source"]), int(entry["direction"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"map entry needs 'source' and 'direction': {exc}") from exc
        if not (J >> i) & 1 or J >= 1 << n:
            raise FormatError(f"direction {i} does not leave subset {bin(J)}")
        if (J, i) in maps:
            raise FormatError(f"duplicate map f_{i} at {bin(J)}")
        what = f"map f_{i} at {bin(J)}"
        maps[(J, i)] = _hom(objects[J], objects[J & ~(1 << i)], _images(entry, what), what)
    try:
        return CubicExtensionDiagram(n, objects, maps, name=data.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def diagram_to_dict(F: CubicExtensionDiagram) -> dict:
    namer = _Namer()
    objects = {_mask_key(m): namer.ref(F.objects[m]) for m in range(F.top + 1)}
    maps = [{"source": _mask_key(J), "direction": i, "images": F.maps[(J, i)].images.tolist()}
            for (J, i) in sorted(F.maps)]
    out = {"format": DIAGRAM_FORMAT, "degree": F.n, "objects": objects, "maps": maps}
    if namer.defs:
        out["groups"] = namer.defs
    if F.name:
        out["name"] = F.name
    return out


def serialize_diagram(F: CubicExtensionDiagram) -> str:
    return canonical_json(diagram_to_dict(F))


# -------------------------------------------------------------- simplicial

def parse_simplicial(source) -> TruncatedSimplicialGroup:
    data = _load(source)
    try:
        t = int(data["truncation"])
        levels_raw = data["levels"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"simplicial file needs 'truncation' and 'levels': {exc}") from exc
    groups = _GroupTable(data.get("groups", {}))
    levels = []
    for k in range(-1, t + 1):
        if str(k) not in levels_raw:
            raise FormatError(f"missing level {k}")
        levels.append(groups.get(levels_raw[str(k)]))
    if len(levels_raw) != t + 2:
        raise FormatError(f"expected levels -1..{t}")
    faces, degens = {}, {}
    for entry in data.get("faces", []):
        try:
            k, i = int(entry["level"]), int(entry["index"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"face entry needs 'level' and 'index': {exc}") from exc
        if not (0 <= k <= t and 0 <= i <= k) or (k, i) in faces:
            raise FormatError(f"bad or duplicate face ({k}, {i})")
        what = f"face {i} at level {k}"
        faces[(k, i)] = _hom(levels[k + 1], levels[k], _images(entry, what), what)
    for entry in data.get("degeneracies", []):
        try:
            k, j = int(entry["level"]), int(entry["index"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"degeneracy entry needs 'level' and 'index': {exc}") from exc
        if not (0 <= k < t and 0 <= j <= k) or (k, j) in degens:
            raise FormatError(f"bad or duplicate degeneracy ({k}, {j})")
        what = f"degeneracy {j} at level {k}"
        degens[(k, j)] = _hom(levels[k + 1], levels[k + 2], _images(entry, what), what)
    try:
        return TruncatedSimplicialGroup(levels, faces, degens, name=data.get("name", ""))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def simplicial_to_dict(X: TruncatedSimplicialGroup) -> dict:
    namer = _Namer()
    levels = {str(k): namer.ref(X.level(k)) for k in range(-1, X.t + 1)}
    faces = [{"level": k, "index": i, "images": X.face(k, i).images.tolist()}
             for k in range(X.t + 1) for i in range(k + 1)]
    degens = [{"level": k, "index": j, "images": X.degen(k, j).images.tolist()}
              for k in range(X.t) for j in range(k + 1)]
    out = {"format": SIMPLICIAL_FORMAT, "truncation": X.t, "levels": levels,
           "faces": faces, "degeneracies": degens}
    if namer.defs:
        out["groups"] = namer.defs
    if X.name:
        out["name"] = X.name
    return out


def serialize_simplicial(X: TruncatedSimplicialGroup) -> str:
    return canonical_json(simplicial_to_dict(X))


def parse_any(source):
    """Dispatch on the ``format`` field (diagrams when absent)."""
    data = _load(source)
    fmt = data.get("format", DIAGRAM_FORMAT)
    if fmt == SIMPLICIAL_FORMAT or "levels" in data:
        return parse_simplicial(data)
    if fmt == GROUP_FORMAT:
        return parse_group_file(data)
    return parse_diagram(data)
