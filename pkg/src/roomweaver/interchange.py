"""Layout interchange documents, schema id "roomweaver/1".

A layout document is plain JSON:

    {
      "schema": "roomweaver/1",
      "room": {"type": "bedroom", "length": 3.5, "width": 4.1, "height": 2.8},
      "boxes": [
        {"category": "double bed", "center": [x, y, z],
         "size": [w, h, d], "orientation": 90.0}
      ]
    }

Distances are meters, angles degrees. Optional top-level keys: "scene_id"
(defaults to the file stem on load) and "floor_plan" ("rectangular" unless
a converter marked the source room otherwise).
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Layout, OrientedBox, RoomSpec

SCHEMA_LAYOUT = "roomweaver/1"


class SchemaError(Exception):
    """A document does not conform to its declared schema."""

    def __init__(self, path, detail: str):
        self.path = str(path)
        self.detail = detail
        super().__init__(f"{self.path}: {detail}")


def layout_to_dict(layout: Layout, scene_id: str | None = None) -> dict:
    doc = {
        "schema": SCHEMA_LAYOUT,
        "room": {
            "type": layout.room.room_type,
            "length": layout.room.length,
            "width": layout.room.width,
            "height": layout.room.height,
        },
        "boxes": [
            {
                "category": b.category,
                "center": list(b.center),
                "size": list(b.size),
                "orientation": b.orientation_deg,
            }
            for b in layout.boxes
        ],
    }
    if scene_id is not None:
        doc["scene_id"] = scene_id
    return doc


def layout_from_dict(doc: dict, source: str = "<dict>") -> Layout:
    if not isinstance(doc, dict):
        raise SchemaError(source, "document is not an object")
    if doc.get("schema") != SCHEMA_LAYOUT:
        raise SchemaError(source, f"schema must be {SCHEMA_LAYOUT!r}, got {doc.get('schema')!r}")
    try:
        room_raw = doc["room"]
        room = RoomSpec(
            room_type=room_raw["type"],
            length=float(room_raw["length"]),
            width=float(room_raw["width"]),
            height=float(room_raw.get("height", 2.8)),
        )
        boxes = tuple(
            OrientedBox(
                category=b["category"],
                center=tuple(b["center"]),
                size=tuple(b["size"]),
                orientation_deg=float(b["orientation"]),
            )
            for b in doc["boxes"]
        )
        return Layout(room=room, boxes=boxes)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(source, str(exc)) from exc


def dumps_layout(layout: Layout, scene_id: str | None = None) -> str:
    """Deterministic serialization: sorted keys, fixed separators, newline at EOF."""
    return json.dumps(layout_to_dict(layout, scene_id), sort_keys=True, indent=2) + "\n"


def save_layout(layout: Layout, path, scene_id: str | None = None) -> None:
    Path(path).write_text(dumps_layout(layout, scene_id), encoding="utf-8")


def load_layout(path) -> Layout:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(path, f"unreadable layout document: {exc}") from exc
    return layout_from_dict(doc, source=str(path))
