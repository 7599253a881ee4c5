"""Framework documents (JSON) and analysis reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import DEFAULT_TOL, Tolerance
from .plane_graph import Framework, FrameworkError

DOCUMENT_VERSION = 1


class DocumentError(ValueError):
    """Malformed or invalid framework document."""


@dataclass
class FrameworkDocument:
    framework: Framework
    stress: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)
    version: int = DOCUMENT_VERSION

    def to_dict(self) -> dict:
        out = {
            "version": self.version,
            "vertices": [[float(x), float(y)] for x, y in self.framework.points],
            "edges": [[int(i), int(j)] for i, j in self.framework.edges],
        }
        if self.stress is not None:
            out["stress"] = [float(w) for w in self.stress]
        if self.metadata:
            out["metadata"] = self.metadata
        return out


def document_from_dict(data: dict, tol: Tolerance = DEFAULT_TOL) -> FrameworkDocument:
    if not isinstance(data, dict):
        raise DocumentError("document root must be an object")
    version = data.get("version")
    if version != DOCUMENT_VERSION:
        raise DocumentError(f"unsupported document version {version!r}")
    for key in ("vertices", "edges"):
        if key not in data or not isinstance(data[key], list):
            raise DocumentError(f"missing or invalid '{key}' array")
    verts = data["vertices"]
    for k, v in enumerate(verts):
        if (not isinstance(v, (list, tuple))) or len(v) != 2 \
                or not all(isinstance(c, (int, float)) for c in v) \
                or not all(np.isfinite(c) for c in v):
            raise DocumentError(f"vertex {k} is not a finite [x, y] pair")
    edges = data["edges"]
    for k, e in enumerate(edges):
        if (not isinstance(e, (list, tuple))) or len(e) != 2 \
                or not all(isinstance(i, int) for i in e):
            raise DocumentError(f"edge {k} is not an [i, j] index pair")
    try:
        fw = Framework.make(np.asarray(verts, dtype=float), [tuple(e) for e in edges], tol)
    except FrameworkError as exc:
        raise DocumentError(str(exc)) from exc
    stress = None
    if "stress" in data:
        s = data["stress"]
        if not isinstance(s, list) or len(s) != len(edges) \
                or not all(isinstance(w, (int, float)) and np.isfinite(w) for w in s):
            raise DocumentError("stress must be a finite per-edge array")
        stress = np.asarray(s, dtype=float)
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata must be an object")
    return FrameworkDocument(fw, stress, metadata)


def load_document(path, tol: Tolerance = DEFAULT_TOL) -> FrameworkDocument:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return document_from_dict(data, tol)


def save_document(doc: FrameworkDocument, path) -> None:
    Path(path).write_text(json.dumps(doc.to_dict(), indent=2) + "\n")


def loads_document(text: str, tol: Tolerance = DEFAULT_TOL) -> FrameworkDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return document_from_dict(data, tol)


def dumps_document(doc: FrameworkDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"
