"""Versioned JSON document for exact point sets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .exact import Hyperplane, QVector

FORMAT_VERSION = 1


class DocumentError(ValueError):
    """Malformed or inconsistent point-set document."""


@dataclass(frozen=True)
class MarkedHyperplane:
    plane: Hyperplane
    on_hyperplane: tuple
    off_side: int


@dataclass(frozen=True)
class PointSetDocument:
    dim: int
    points: tuple
    marked: Optional[MarkedHyperplane] = None
    provenance: dict = field(default_factory=dict, compare=False)
    format_version: int = FORMAT_VERSION


def _enc(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _dec(obj: Any) -> Fraction:
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise DocumentError("rational must be an object with num and den")
    num, den = obj["num"], obj["den"]
    if not isinstance(num, str) or not isinstance(den, str):
        raise DocumentError("num and den must be decimal strings")
    try:
        a, b = int(num, 10), int(den, 10)
    except ValueError as exc:
        raise DocumentError("bad integer literal: %s" % exc) from None
    if b <= 0:
        raise DocumentError("denominator must be positive")
    q = Fraction(a, b)
    if q.denominator != b:
        raise DocumentError("fraction %s/%s is not in lowest terms" % (num, den))
    return q


def _vec(obj: Any, dim: int) -> QVector:
    if not isinstance(obj, list) or len(obj) != dim:
        raise DocumentError("expected a list of %d rationals" % dim)
    return QVector(_dec(x) for x in obj)


def to_dict(doc: PointSetDocument) -> dict:
    out = {
        "format_version": doc.format_version,
        "dim": doc.dim,
        "points": [[_enc(x) for x in p] for p in doc.points],
        "marked": None,
        "provenance": doc.provenance,
    }
    if doc.marked is not None:
        out["marked"] = {
            "normal": [_enc(x) for x in doc.marked.plane.normal],
            "offset": _enc(doc.marked.plane.offset),
            "on_hyperplane": sorted(doc.marked.on_hyperplane),
            "off_side": doc.marked.off_side,
        }
    return out


def from_dict(obj: Any) -> PointSetDocument:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    if obj.get("format_version") != FORMAT_VERSION:
        raise DocumentError("unsupported format_version %r" % obj.get("format_version"))
    dim = obj.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim must be a positive integer")
    raw = obj.get("points")
    if not isinstance(raw, list) or not raw:
        raise DocumentError("points must be a nonempty list")
    pts = tuple(_vec(p, dim) for p in raw)
    marked = None
    mk = obj.get("marked")
    if mk is not None:
        if not isinstance(mk, dict):
            raise DocumentError("marked must be an object")
        try:
            plane = Hyperplane(_vec(mk["normal"], dim), _dec(mk["offset"]))
            on = tuple(int(i) for i in mk["on_hyperplane"])
            side = int(mk["off_side"])
        except (KeyError, TypeError) as exc:
            raise DocumentError("incomplete marked hyperplane: %s" % exc) from None
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
        if any(i < 0 or i >= len(pts) for i in on) or side not in (-1, 1):
            raise DocumentError("marked hyperplane indices out of range")
        marked = MarkedHyperplane(plane, on, side)
    prov = obj.get("provenance") or {}
    if not isinstance(prov, dict):
        raise DocumentError("provenance must be an object")
    return PointSetDocument(dim=dim, points=pts, marked=marked, provenance=prov)


def dumps(doc: PointSetDocument) -> str:
    return json.dumps(to_dict(doc), indent=1, sort_keys=True)


def loads(text: str) -> PointSetDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("invalid JSON: %s" % exc) from None
    return from_dict(obj)


def save(doc: PointSetDocument, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
        fh.write("\n")


def load(path: str) -> PointSetDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise DocumentError("cannot read %s: %s" % (path, exc)) from None
