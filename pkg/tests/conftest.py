import random
from pathlib import Path

import pytest

from roomweaver.core import Layout, OrientedBox, RoomSpec

FIXTURES = Path(__file__).parent / "fixtures"

CATEGORIES = (
    "double bed",
    "single bed",
    "nightstand",
    "wardrobe",
    "desk",
    "armchair",
    "bookshelf",
    "dressing table",
)


def random_box(rng: random.Random, room: RoomSpec, quantized: bool = False) -> OrientedBox:
    """A box with its center inside the room; not necessarily in bounds."""

    def num(lo, hi):
        if quantized:
            return rng.randrange(round(lo * 100), round(hi * 100) + 1) / 100
        return rng.uniform(lo, hi)

    w = num(0.3, 2.0)
    h = num(0.3, 2.2)
    d = num(0.3, 2.0)
    if quantized:
        z = ((round(h * 100) + 1) // 2) / 100  # whole cents, at or above h/2
    else:
        z = h / 2
    return OrientedBox(
        category=rng.choice(CATEGORIES),
        center=(num(0, room.length), num(0, room.width), z),
        size=(w, h, d),
        orientation_deg=num(0, 359.99),
    )


def random_layout(
    rng: random.Random,
    min_boxes: int = 0,
    max_boxes: int = 8,
    quantized: bool = False,
) -> Layout:
    room = RoomSpec(
        room_type=rng.choice(("bedroom", "living room")),
        length=rng.randrange(300, 800) / 100,
        width=rng.randrange(300, 800) / 100,
    )
    n = rng.randint(min_boxes, max_boxes)
    boxes = []
    seen = set()
    while len(boxes) < n:
        box = random_box(rng, room, quantized=quantized)
        key = (box.category, box.center, box.size, box.orientation_deg)
        if key in seen:
            continue
        seen.add(key)
        boxes.append(box)
    return Layout(room=room, boxes=tuple(boxes))


def random_box_pair(rng: random.Random) -> tuple[OrientedBox, OrientedBox]:
    """Two boxes of comparable scale near each other; good oracle fodder."""

    def make(cx, cy):
        h = rng.uniform(0.4, 1.8)
        return OrientedBox(
            category="box",
            center=(cx, cy, h / 2 + rng.uniform(0.0, 0.4)),
            size=(rng.uniform(0.4, 1.8), h, rng.uniform(0.4, 1.8)),
            orientation_deg=rng.uniform(0, 360),
        )

    a = make(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
    b = make(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
    return a, b


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
