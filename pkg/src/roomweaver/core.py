"""Value types and geometric kernel for oriented 3D boxes in a rectangular room.

Coordinate convention: the room floor occupies [0, length] x [0, width] on the
x/y plane, z points up. The canonical top-down view renders +y upward, so
"top-left" means small x, large y. Box orientation is a single yaw angle in
degrees about the vertical axis, normalized to [0, 360).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

FLOOR_EPS = 0.01  # objects may sink at most 1 cm below the floor
DEFAULT_TOL = 0.01  # default out-of-bounds / overlap tolerance, meters

Point2 = tuple[float, float]
Vec3 = tuple[float, float, float]


def _as_vec3(v) -> Vec3:
    x, y, z = v
    return (float(x), float(y), float(z))


@dataclass(frozen=True)
class OrientedBox:
    """One object: category, center, extents and yaw.

    ``size`` is (w, h, d): extent along the local x axis, vertical extent,
    extent along the local y axis. ``center`` is measured from the room's
    min corner, z from the floor.
    """

    category: str
    center: Vec3
    size: Vec3
    orientation_deg: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vec3(self.center))
        object.__setattr__(self, "size", _as_vec3(self.size))
        if not self.category or self.category != self.category.strip().lower():
            raise ValueError(f"category must be lowercase and non-empty: {self.category!r}")
        if any(ch not in "abcdefghijklmnopqrstuvwxyz0123456789 " for ch in self.category):
            raise ValueError(
                f"category may only contain lowercase letters, digits and spaces: "
                f"{self.category!r} (see normalize_category)"
            )
        if any(s <= 0 for s in self.size):
            raise ValueError(f"size components must be positive: {self.size}")
        if self.center[2] < 0:
            raise ValueError(f"center.z must be >= 0: {self.center[2]}")
        if self.center[2] - self.size[1] / 2 < -FLOOR_EPS:
            raise ValueError(
                f"box bottom {self.center[2] - self.size[1] / 2:.4f} is below the floor"
            )
        object.__setattr__(self, "orientation_deg", float(self.orientation_deg) % 360.0)

    @property
    def z_bottom(self) -> float:
        return self.center[2] - self.size[1] / 2

    @property
    def z_top(self) -> float:
        return self.center[2] + self.size[1] / 2

    def volume(self) -> float:
        w, h, d = self.size
        return w * h * d


def normalize_category(raw: str) -> str:
    """Canonicalize a raw category name: lowercase, runs of other chars -> one space."""
    out, prev_space = [], True
    for ch in raw.lower():
        if ch in "abcdefghijklmnopqrstuvwxyz0123456789":
            out.append(ch)
            prev_space = False
        elif not prev_space:
            out.append(" ")
            prev_space = True
    return "".join(out).strip()


@dataclass(frozen=True)
class RoomSpec:
    """Rectangular room: type plus floor-plane extents in meters."""

    room_type: str
    length: float
    width: float
    height: float = 2.8

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ValueError(f"room extents must be positive: {self.length} x {self.width}")


@dataclass(frozen=True)
class Layout:
    """A room plus an ordered collection of oriented boxes."""

    room: RoomSpec
    boxes: tuple[OrientedBox, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        seen = set()
        for b in self.boxes:
            key = (b.category, b.center, b.size, b.orientation_deg)
            if key in seen:
                raise ValueError(f"duplicate box: {b.category} at {b.center}")
            seen.add(key)


CELL_NAMES = (
    ("top-left", "top-center", "top-right"),
    ("middle-left", "center", "middle-right"),
    ("bottom-left", "bottom-center", "bottom-right"),
)
_NAME_TO_CELL = {CELL_NAMES[r][c]: (r, c) for r in range(3) for c in range(3)}


@dataclass(frozen=True)
class GridCell:
    """One patch of the canonical 3x3 floor grid; row 0 is the far (top) band."""

    row: int
    col: int

    def __post_init__(self):
        if not (0 <= self.row <= 2 and 0 <= self.col <= 2):
            raise ValueError(f"grid cell out of range: ({self.row}, {self.col})")

    @property
    def name(self) -> str:
        return CELL_NAMES[self.row][self.col]

    @classmethod
    def from_name(cls, name: str) -> "GridCell":
        if name not in _NAME_TO_CELL:
            raise ValueError(f"unknown grid cell name: {name!r}")
        return cls(*_NAME_TO_CELL[name])

    @property
    def is_corner(self) -> bool:
        return self.row != 1 and self.col != 1

    @property
    def is_center(self) -> bool:
        return self.row == 1 and self.col == 1


def footprint_polygon(box: OrientedBox) -> list[Point2]:
    """Return the 4 floor-plane corners of the box footprint, counter-clockwise."""
    cx, cy, _ = box.center
    hw = box.size[0] / 2
    hd = box.size[2] / 2
    a = math.radians(box.orientation_deg)
    cos_a, sin_a = math.cos(a), math.sin(a)
    corners = []
    for u, v in ((-hw, -hd), (hw, -hd), (hw, hd), (-hw, hd)):
        corners.append((cx + u * cos_a - v * sin_a, cy + u * sin_a + v * cos_a))
    return corners


def polygon_area(poly: list[Point2]) -> float:
    """Shoelace area; positive for counter-clockwise vertex order."""
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return acc / 2


def clip_convex(subject: list[Point2], clip: list[Point2]) -> list[Point2]:
    """Sutherland-Hodgman: clip ``subject`` by the convex CCW polygon ``clip``."""
    output = list(subject)
    n = len(clip)
    for i in range(n):
        if len(output) < 3:
            return []
        px, py = clip[i]
        qx, qy = clip[(i + 1) % n]
        ex, ey = qx - px, qy - py
        inputs = output
        # cross(edge, vertex - p) >= 0 is the inside half-plane of a CCW polygon
        vals = [ex * (vy - py) - ey * (vx - px) for vx, vy in inputs]
        output = []
        for j, (vx, vy) in enumerate(inputs):
            cur_val = vals[j]
            nx_, ny_ = inputs[(j + 1) % len(inputs)]
            nxt_val = vals[(j + 1) % len(inputs)]
            if cur_val >= 0:
                output.append((vx, vy))
            if cur_val * nxt_val < 0:
                # edge crosses the clip line; keep the intersection point
                t = cur_val / (cur_val - nxt_val)
                output.append((vx + t * (nx_ - vx), vy + t * (ny_ - vy)))
    return output if len(output) >= 3 else []


def _z_overlap(a: OrientedBox, b: OrientedBox) -> float:
    return min(a.z_top, b.z_top) - max(a.z_bottom, b.z_bottom)


def intersection_volume(a: OrientedBox, b: OrientedBox) -> float:
    """Exact intersection volume of two yaw-oriented boxes (prism decomposition)."""
    dz = _z_overlap(a, b)
    if dz <= 0:
        return 0.0
    inter = clip_convex(footprint_polygon(a), footprint_polygon(b))
    area = polygon_area(inter)
    if area <= 0:
        return 0.0
    return area * dz


def box_iou_3d(a: OrientedBox, b: OrientedBox) -> float:
    """Intersection over union of two oriented boxes, exact for yaw rotations.

    All volumes go through the same footprint-area route, so iou(a, a) is
    exactly 1.0 rather than off by a last-bit rounding difference.
    """
    dz = _z_overlap(a, b)
    if dz <= 0:
        return 0.0
    fa, fb = footprint_polygon(a), footprint_polygon(b)
    inter_area = polygon_area(clip_convex(fa, fb))
    if inter_area <= 0:
        return 0.0
    inter = inter_area * dz
    vol_a = polygon_area(fa) * (a.z_top - a.z_bottom)
    vol_b = polygon_area(fb) * (b.z_top - b.z_bottom)
    union = vol_a + vol_b - inter
    if union <= 0:
        return 0.0
    return min(1.0, inter / union)


def out_of_bounds(box: OrientedBox, room: RoomSpec, tol: float = DEFAULT_TOL) -> bool:
    """True iff any footprint corner leaves the floor rectangle by more than ``tol``."""
    for x, y in footprint_polygon(box):
        if x < -tol or x > room.length + tol or y < -tol or y > room.width + tol:
            return True
    return False


def _project(poly: list[Point2], ax: float, ay: float) -> tuple[float, float]:
    vals = [x * ax + y * ay for x, y in poly]
    return min(vals), max(vals)


def boxes_overlap(a: OrientedBox, b: OrientedBox, tol: float = DEFAULT_TOL) -> bool:
    """Separating-axis overlap test with a penetration margin.

    Returns True only when the boxes interpenetrate by more than ``tol``
    along every candidate axis (the two footprint edge normals of each box,
    plus the vertical axis), so edge-to-edge contact does not count.
    """
    if _z_overlap(a, b) <= tol:
        return False
    fa, fb = footprint_polygon(a), footprint_polygon(b)
    for poly in (fa, fb):
        for i in range(2):  # two unique edge directions per rectangle
            x0, y0 = poly[i]
            x1, y1 = poly[i + 1]
            nx, ny = y1 - y0, x0 - x1  # normal of the edge
            norm = math.hypot(nx, ny)
            if norm == 0:
                continue
            nx, ny = nx / norm, ny / norm
            lo_a, hi_a = _project(fa, nx, ny)
            lo_b, hi_b = _project(fb, nx, ny)
            if min(hi_a, hi_b) - max(lo_a, lo_b) <= tol:
                return False
    return True


def grid_cell_of(box: OrientedBox, room: RoomSpec) -> GridCell:
    """Assign a box to its 3x3 grid cell from the footprint center.

    Centers outside the room are clamped to the boundary first, so slightly
    out-of-bounds boxes still get a cell.
    """
    x = min(max(box.center[0], 0.0), room.length)
    y = min(max(box.center[1], 0.0), room.width)
    col = min(2, int(3 * x / room.length))
    row = min(2, int(3 * (room.width - y) / room.width))
    return GridCell(row, col)


@dataclass(frozen=True)
class Violation:
    """One validator finding; ``partner`` is set for pairwise overlap findings."""

    box_index: int
    kind: str  # "oob" or "overlap"
    detail: str
    partner: int | None = None


def validate_layout(layout: Layout, tol: float = DEFAULT_TOL) -> list[Violation]:
    """Collect every out-of-bounds box and overlapping pair in the layout."""
    violations = []
    for i, box in enumerate(layout.boxes):
        if out_of_bounds(box, layout.room, tol):
            violations.append(
                Violation(i, "oob", f"{box.category} extends beyond the floor boundary")
            )
    for i in range(len(layout.boxes)):
        for j in range(i + 1, len(layout.boxes)):
            if boxes_overlap(layout.boxes[i], layout.boxes[j], tol):
                violations.append(
                    Violation(
                        i,
                        "overlap",
                        f"{layout.boxes[i].category} overlaps {layout.boxes[j].category}",
                        partner=j,
                    )
                )
    return violations
