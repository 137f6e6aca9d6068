#!/usr/bin/env python3
"""Thin adapter: raw 3D-FRONT house JSON -> layout interchange files.

The engine only consumes the interchange schema; this script does the one-off
mapping from the dataset's native structure and makes its assumptions
explicit rather than hiding them in the engine:

- the raw format is y-up; interchange is z-up (x, y_up, z) -> (x, z, y_up)
- furniture rotations are quaternions about the up axis; anything with a
  significant off-axis component is treated as yaw-only anyway
- object dimensions come from the furniture entry's "bbox" (model space)
  scaled by the instance scale; entries without a bbox are skipped
- the room rectangle is the xz bounding box of the room's floor meshes; a
  floor whose polygon area deviates from its bounding box by more than 5%
  is tagged "floor_plan": "non_rectangular" so preprocessing can drop it
- categories come from 3D-FUTURE's model_info.json (jid -> category) and are
  canonicalized to lowercase words

Usage:
    python scripts/convert_3dfront.py --houses DIR --model-info model_info.json \
        --out OUT_DIR [--room-types bedroom,livingroom]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from roomweaver.core import Layout, OrientedBox, RoomSpec, normalize_category
from roomweaver.interchange import save_layout

ROOM_TYPE_MAP = {
    "bedroom": "bedroom",
    "masterbedroom": "bedroom",
    "secondbedroom": "bedroom",
    "kidsroom": "bedroom",
    "livingroom": "living room",
    "livingdiningroom": "living room",
}


def quaternion_yaw(rot) -> float:
    """Yaw in degrees for an (x, y, z, w) quaternion rotating about +y."""
    x, y, z, w = rot
    return math.degrees(2.0 * math.atan2(y, w))


def load_model_info(path: Path) -> dict[str, str]:
    info = json.loads(path.read_text(encoding="utf-8"))
    return {
        entry["model_id"]: normalize_category(entry.get("category") or "unknown")
        for entry in info
        if entry.get("model_id")
    }


def floor_bounds(house: dict, room: dict):
    """(min_x, min_z, max_x, max_z, rectangular?) from the room's floor meshes."""
    meshes = {m["uid"]: m for m in house.get("mesh", [])}
    xs, zs, poly_area = [], [], 0.0
    for child in room.get("children", []):
        mesh = meshes.get(child.get("ref"))
        if not mesh or "floor" not in str(mesh.get("type", "")).lower():
            continue
        xyz = mesh.get("xyz", [])
        faces = mesh.get("faces", [])
        vx = xyz[0::3]
        vz = xyz[2::3]
        xs.extend(vx)
        zs.extend(vz)
        for i in range(0, len(faces) - 2, 3):
            a, b, c = faces[i], faces[i + 1], faces[i + 2]
            poly_area += abs(
                (vx[b] - vx[a]) * (vz[c] - vz[a]) - (vx[c] - vx[a]) * (vz[b] - vz[a])
            ) / 2
    if not xs:
        return None
    min_x, max_x, min_z, max_z = min(xs), max(xs), min(zs), max(zs)
    bbox_area = (max_x - min_x) * (max_z - min_z)
    rectangular = bbox_area > 0 and abs(poly_area - bbox_area) / bbox_area <= 0.05
    return min_x, min_z, max_x, max_z, rectangular


def convert_house(house_path: Path, categories: dict[str, str], out_dir: Path,
                  room_types: set[str]) -> int:
    house = json.loads(house_path.read_text(encoding="utf-8"))
    furniture = {f["uid"]: f for f in house.get("furniture", [])}
    written = 0
    for room in house.get("scene", {}).get("room", []):
        raw_type = str(room.get("type", "")).lower().replace(" ", "")
        room_type = ROOM_TYPE_MAP.get(raw_type)
        if room_type is None or (room_types and room_type not in room_types):
            continue
        bounds = floor_bounds(house, room)
        if bounds is None:
            continue
        min_x, min_z, max_x, max_z, rectangular = bounds
        boxes = []
        for child in room.get("children", []):
            item = furniture.get(child.get("ref"))
            if item is None or "bbox" not in item:
                continue
            bbox = item["bbox"]  # model-space [[min triple], [max triple]]
            extents = [abs(bbox[1][i] - bbox[0][i]) for i in range(3)]
            scale = child.get("scale", [1, 1, 1])
            w, h_up, d = (e * s for e, s in zip(extents, scale))
            pos = child.get("pos", [0, 0, 0])
            yaw = quaternion_yaw(child.get("rot", [0, 0, 0, 1]))
            try:
                boxes.append(
                    OrientedBox(
                        category=categories.get(item.get("jid"), "unknown"),
                        center=(pos[0] - min_x, pos[2] - min_z, max(pos[1], h_up / 2)),
                        size=(w, h_up, d),
                        orientation_deg=yaw,
                    )
                )
            except ValueError as exc:
                print(f"  skipping {item.get('jid')}: {exc}", file=sys.stderr)
        scene_id = f"{house_path.stem}_{room.get('instanceid', 'room')}"
        layout = Layout(
            RoomSpec(room_type, max_x - min_x, max_z - min_z), tuple(boxes)
        )
        doc_path = out_dir / f"{scene_id}.json"
        save_layout(layout, doc_path, scene_id=scene_id)
        if not rectangular:
            doc = json.loads(doc_path.read_text(encoding="utf-8"))
            doc["floor_plan"] = "non_rectangular"
            doc_path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        written += 1
    return written


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--houses", type=Path, required=True)
    parser.add_argument("--model-info", type=Path, required=True)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--room-types", default="bedroom,living room")
    args = parser.parse_args()

    categories = load_model_info(args.model_info)
    room_types = {t.strip() for t in args.room_types.split(",") if t.strip()}
    args.out.mkdir(parents=True, exist_ok=True)
    total = 0
    for house_path in sorted(args.houses.glob("*.json")):
        try:
            total += convert_house(house_path, categories, args.out, room_types)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            print(f"skipping {house_path.name}: {exc}", file=sys.stderr)
    print(f"wrote {total} rooms to {args.out}")


if __name__ == "__main__":
    main()
