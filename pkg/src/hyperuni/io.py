"""JSON graph documents, report serialization and CSV flattening.

Graph document::

    {"vertices": [...], "edges": [[u, v, length], ...],
     "basepoint": label, "rays": {name: [label, ...]}, "meta": {...}}

Floats are written with 17 significant digits and keys are sorted, so equal
inputs always serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

from .busemann import BoundaryRay
from .generators import GeneratedSpace
from .space import GraphError, build_space


class SchemaError(ValueError):
    pass


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        return _encode(obj.item(), indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if hasattr(obj, "tolist"):
        return _encode(obj.tolist(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def space_to_dict(gen: GeneratedSpace) -> dict:
    space = gen.space
    lab = space.label
    doc = {
        "vertices": list(space.vertices),
        "edges": [[lab(i), lab(j), float(w)] for i, j, w in space.edges],
        "basepoint": lab(gen.basepoint),
        "rays": {name: ray.labels(space) for name, ray in gen.rays.items()},
    }
    meta = {k: v for k, v in gen.meta.items() if k != "coordinates"}
    if meta:
        doc["meta"] = meta
    return doc


def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise SchemaError(f"{where}: {msg}")


def space_from_dict(doc: Any) -> GeneratedSpace:
    _require(isinstance(doc, dict), "$", "document must be an object")
    for key in ("vertices", "edges", "basepoint", "rays"):
        _require(key in doc, "$", f"missing required key {key!r}")
    verts = doc["vertices"]
    _require(isinstance(verts, list) and verts, "$.vertices", "must be a non-empty list")
    for k, v in enumerate(verts):
        _require(isinstance(v, str), f"$.vertices[{k}]", "vertex labels must be strings")
    _require(isinstance(doc["edges"], list), "$.edges", "must be a list")
    edges, seen = [], {}
    for k, e in enumerate(doc["edges"]):
        where = f"$.edges[{k}]"
        _require(isinstance(e, list) and len(e) == 3, where, "expected [u, v, length]")
        u, v, w = e
        _require(isinstance(u, str) and isinstance(v, str), where, "endpoints must be vertex labels")
        _require(isinstance(w, (int, float)) and not isinstance(w, bool), where, "length must be a number")
        key = frozenset((u, v))
        _require(key not in seen, where, f"duplicate edge {u!r}-{v!r} (first at $.edges[{seen.get(key)}])")
        seen[key] = k
        edges.append((u, v, float(w)))
    try:
        space = build_space(edges, vertices=verts)
    except GraphError as exc:
        raise SchemaError(f"$.edges: {exc}") from exc
    known = set(space.vertices)
    bp = doc["basepoint"]
    _require(isinstance(bp, str) and bp in known, "$.basepoint", f"unknown vertex {bp!r}")
    rays_doc = doc["rays"]
    _require(isinstance(rays_doc, dict), "$.rays", "must be an object of name -> anchor list")
    rays = {}
    for name, anchors in rays_doc.items():
        where = f"$.rays.{name}"
        _require(isinstance(anchors, list) and anchors, where, "must be a non-empty list")
        for k, a in enumerate(anchors):
            _require(isinstance(a, str) and a in known, f"{where}[{k}]", f"unknown vertex {a!r}")
        rays[name] = BoundaryRay(name, tuple(space.index(a) for a in anchors))
    meta = doc.get("meta", {})
    _require(isinstance(meta, dict), "$.meta", "must be an object")
    return GeneratedSpace(space, rays, space.index(bp), dict(meta))


def loads_space(text: str) -> GeneratedSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return space_from_dict(doc)


def load_space(path: str | Path) -> GeneratedSpace:
    return loads_space(Path(path).read_text(encoding="utf-8"))


def save_space(gen: GeneratedSpace, path: str | Path) -> None:
    Path(path).write_text(dumps(space_to_dict(gen)), encoding="utf-8")


def rows_to_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_float(x).strip('"') if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def report_to_csv(report: dict) -> str:
    rows = []
    for c in report["checks"]:
        holds = c["holds"]
        rows.append([
            c["name"],
            holds if isinstance(holds, str) else str(holds).lower(),
            c["theory_bound"],
            c["empirical_worst"],
            c["slack_used"],
            c.get("note", ""),
        ])
    return rows_to_csv(["name", "holds", "theory_bound", "empirical_worst", "slack_used", "note"], rows)


def save_report(report: dict, path: str | Path | None, fmt: str = "json") -> str:
    """Serialize a verification report; writes to ``path`` when given and returns the text."""
    if fmt == "json":
        text = dumps(report)
    elif fmt == "csv":
        text = report_to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
