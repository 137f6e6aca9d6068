"""Scene assembly: catalog retrieval, recentering and camera ring sampling.

Each layout box pulls the catalog model of its category whose bounding box
dimensions are closest in Euclidean distance. The assembled scene is
recentered so the room center sits at the origin, and cameras are sampled on
a ring of the upper hemisphere: distance 1.5x the room diagonal, elevation
35 degrees, looking at the origin (all overridable).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .core import Layout, OrientedBox, RoomSpec, Vec3
from .interchange import SchemaError

SCHEMA_CATALOG = "roomweaver-catalog/1"
SCHEMA_SCENE = "roomweaver-scene/1"

DEFAULT_CAMERA_COUNT = 250
DEFAULT_ELEVATION_DEG = 35.0
DEFAULT_RADIUS_FACTOR = 1.5
DEFAULT_IMAGE_SIZE = (512, 512)
DEFAULT_VERTICAL_FOV = 60.0  # renderer default; not dictated by the pipeline


class CategoryNotInCatalog(Exception):
    def __init__(self, category: str, box_index: int | None = None):
        self.category = category
        self.box_index = box_index
        where = f" (box {box_index})" if box_index is not None else ""
        super().__init__(f"catalog has no entry for category {category!r}{where}")


@dataclass(frozen=True)
class CatalogEntry:
    model_id: str
    category: str
    dims: Vec3  # (w, h, d) of the model's canonical bounding box
    asset_path: str | None = None

    def __post_init__(self):
        if any(v <= 0 for v in self.dims):
            raise ValueError(f"catalog dims must be positive: {self.dims}")


class Catalog:
    """Per-category index, entries sorted by model_id for deterministic ties."""

    def __init__(self, entries: list[CatalogEntry]):
        self._by_category: dict[str, list[CatalogEntry]] = {}
        for entry in entries:
            self._by_category.setdefault(entry.category, []).append(entry)
        for bucket in self._by_category.values():
            bucket.sort(key=lambda e: e.model_id)

    def candidates(self, category: str) -> list[CatalogEntry]:
        return self._by_category.get(category, [])

    @property
    def entries(self) -> list[CatalogEntry]:
        return [e for bucket in self._by_category.values() for e in bucket]

    @classmethod
    def load(cls, path) -> "Catalog":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(path, f"unreadable catalog manifest: {exc}") from exc
        if doc.get("schema") != SCHEMA_CATALOG:
            raise SchemaError(path, f"schema must be {SCHEMA_CATALOG!r}")
        entries = []
        try:
            for raw in doc["entries"]:
                entries.append(
                    CatalogEntry(
                        model_id=raw["model_id"],
                        category=raw["category"],
                        dims=tuple(raw["dims"]),
                        asset_path=raw.get("asset_path"),
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(path, str(exc)) from exc
        return cls(entries)

    def save(self, path) -> None:
        doc = {
            "schema": SCHEMA_CATALOG,
            "entries": [
                {
                    "model_id": e.model_id,
                    "category": e.category,
                    "dims": list(e.dims),
                    **({"asset_path": e.asset_path} if e.asset_path else {}),
                }
                for e in self.entries
            ],
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def dims_distance(a: Vec3, b: Vec3) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def retrieve_model(box: OrientedBox, catalog: Catalog) -> CatalogEntry:
    """Nearest catalog model of the box's category by bounding-box dimensions."""
    candidates = catalog.candidates(box.category)
    if not candidates:
        raise CategoryNotInCatalog(box.category)
    return min(candidates, key=lambda e: (dims_distance(box.size, e.dims), e.model_id))


@dataclass(frozen=True)
class CameraPose:
    position: Vec3
    look_at: Vec3
    up: Vec3
    vertical_fov_deg: float
    image_size: tuple[int, int]

    def __post_init__(self):
        if self.position == self.look_at:
            raise ValueError("camera position must differ from its look-at point")
        norm = math.sqrt(sum(c * c for c in self.up))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"up vector must be unit length, got |up| = {norm}")


@dataclass(frozen=True)
class SceneInstance:
    model_id: str
    category: str
    position: Vec3
    yaw_deg: float
    fit_scale: Vec3
    source_box: int


@dataclass(frozen=True)
class AssembledScene:
    room: RoomSpec  # recentered: origin at the room center
    instances: tuple[SceneInstance, ...]
    cameras: tuple[CameraPose, ...]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_SCENE,
            "origin": "room-center",
            "room": {
                "type": self.room.room_type,
                "length": self.room.length,
                "width": self.room.width,
                "height": self.room.height,
            },
            "instances": [
                {
                    "model_id": i.model_id,
                    "category": i.category,
                    "position": list(i.position),
                    "yaw": i.yaw_deg,
                    "fit_scale": list(i.fit_scale),
                    "source_box": i.source_box,
                }
                for i in self.instances
            ],
            "cameras": [
                {
                    "position": list(c.position),
                    "look_at": list(c.look_at),
                    "up": list(c.up),
                    "vertical_fov": c.vertical_fov_deg,
                    "image_size": list(c.image_size),
                }
                for c in self.cameras
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    def camera_trajectory(self) -> str:
        """Flat trajectory: one pose per line, "px py pz lx ly lz fov"."""
        lines = []
        for c in self.cameras:
            fields = [*c.position, *c.look_at, c.vertical_fov_deg]
            lines.append(" ".join(f"{v:.6f}" for v in fields))
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class AssembleOptions:
    fit_to_box: bool = False
    cameras_on: bool = True
    camera_count: int = DEFAULT_CAMERA_COUNT
    elevation_deg: float = DEFAULT_ELEVATION_DEG
    radius_factor: float = DEFAULT_RADIUS_FACTOR
    image_size: tuple[int, int] = DEFAULT_IMAGE_SIZE
    vertical_fov_deg: float = DEFAULT_VERTICAL_FOV


def sample_cameras(
    room: RoomSpec,
    count: int = DEFAULT_CAMERA_COUNT,
    elevation_deg: float = DEFAULT_ELEVATION_DEG,
    radius_factor: float = DEFAULT_RADIUS_FACTOR,
    image_size: tuple[int, int] = DEFAULT_IMAGE_SIZE,
    vertical_fov_deg: float = DEFAULT_VERTICAL_FOV,
) -> list[CameraPose]:
    """Evenly spaced ring on the upper hemisphere, all poses facing the origin.

    The ring radius is ``radius_factor`` times the room's floor diagonal.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    radius = radius_factor * math.hypot(room.length, room.width)
    elev = math.radians(elevation_deg)
    horizontal = radius * math.cos(elev)
    height = radius * math.sin(elev)
    poses = []
    for i in range(count):
        azimuth = 2 * math.pi * i / count
        position = (horizontal * math.cos(azimuth), horizontal * math.sin(azimuth), height)
        poses.append(
            CameraPose(
                position=position,
                look_at=(0.0, 0.0, 0.0),
                up=(0.0, 0.0, 1.0),
                vertical_fov_deg=vertical_fov_deg,
                image_size=tuple(image_size),
            )
        )
    return poses


def assemble(
    layout: Layout,
    catalog: Catalog,
    opts: AssembleOptions = AssembleOptions(),
) -> AssembledScene:
    """Populate a layout with catalog models and recenter the scene."""
    instances = []
    half = (layout.room.length / 2, layout.room.width / 2)
    for index, box in enumerate(layout.boxes):
        try:
            entry = retrieve_model(box, catalog)
        except CategoryNotInCatalog as exc:
            raise CategoryNotInCatalog(exc.category, box_index=index) from exc
        if opts.fit_to_box:
            scale = tuple(b / e for b, e in zip(box.size, entry.dims))
        else:
            scale = (1.0, 1.0, 1.0)
        position = (box.center[0] - half[0], box.center[1] - half[1], box.center[2])
        instances.append(
            SceneInstance(
                model_id=entry.model_id,
                category=box.category,
                position=position,
                yaw_deg=box.orientation_deg,
                fit_scale=scale,
                source_box=index,
            )
        )
    cameras: list[CameraPose] = []
    if opts.cameras_on:
        cameras = sample_cameras(
            layout.room,
            count=opts.camera_count,
            elevation_deg=opts.elevation_deg,
            radius_factor=opts.radius_factor,
            image_size=opts.image_size,
            vertical_fov_deg=opts.vertical_fov_deg,
        )
    return AssembledScene(
        room=layout.room, instances=tuple(instances), cameras=tuple(cameras)
    )
