#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures under tests/fixtures/.

Everything is derived deterministically from literals in this file, so
rerunning the script after a format change refreshes the golden files in one
shot. The recorded LLM response is a handwritten, plausible reply for the
e2e replay scenario (one box intentionally out of bounds so the diagnostics
path is exercised).
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from roomweaver.assemble import AssembleOptions, Catalog, CatalogEntry, assemble
from roomweaver.core import Layout, OrientedBox, RoomSpec
from roomweaver.describe import describe
from roomweaver.gateway import ChatParams, SCHEMA_FIXTURE, request_hash
from roomweaver.ingest import SceneRecord, build_store, preprocess
from roomweaver.interchange import save_layout
from roomweaver.prompts import Condition, build_prompt, select_exemplars

FIXTURES = REPO / "tests" / "fixtures"

ROOM_DIMS = [
    (3.2, 3.4), (3.5, 4.2), (4.0, 4.0), (4.5, 3.6), (5.0, 4.8), (3.8, 4.4),
    (4.2, 5.0), (3.4, 3.9), (4.8, 4.1), (5.2, 5.5), (3.6, 4.6), (4.4, 3.8),
]


def bedroom(length: float, width: float, oob: bool = False, overlap: bool = False) -> Layout:
    """Parametric three-piece bedroom; flags push it into invalid territory."""
    room = RoomSpec("bedroom", length, width)
    wardrobe_x = -0.2 if oob else 0.35
    nightstand = (length / 2, 1.2) if overlap else (length - 0.4, 0.4)
    boxes = (
        OrientedBox("double bed", (length / 2, 1.2, 0.45), (1.8, 0.9, 2.1), 0.0),
        OrientedBox("wardrobe", (wardrobe_x, width - 1.2, 1.1), (0.6, 2.2, 1.8), 0.0),
        OrientedBox("nightstand", (*nightstand, 0.3), (0.5, 0.6, 0.5), 0.0),
    )
    return Layout(room, boxes)


E2E_ROOM = RoomSpec("bedroom", 3.5, 4.2)
E2E_DESCRIPTION = (
    "A double bed is placed at the bottom-center side of the room, with a "
    "straight orientation facing the front. A wardrobe is placed at the "
    "top-left corner of the room, with a straight orientation facing the "
    "front. Two nightstands sit near the corners."
)

# handwritten "recorded" reply; nightstand-1 deliberately exceeds the room
E2E_RESPONSE = """double-bed-0 { width: 1.80m; depth: 2.10m; height: 0.90m; left: 1.75m; top: 1.20m; elevation: 0.45m; orientation: 0; }
wardrobe-0 { width: 0.60m; depth: 1.80m; height: 2.20m; left: 0.35m; top: 3.00m; elevation: 1.10m; orientation: 0; }
nightstand-0 { width: 0.50m; depth: 0.50m; height: 0.60m; left: 3.15m; top: 0.40m; elevation: 0.30m; orientation: 0; }
nightstand-1 { width: 0.50m; depth: 0.50m; height: 0.60m; left: 3.30m; top: 4.10m; elevation: 0.30m; orientation: 0; }"""


def build_fixture_store():
    records = [
        SceneRecord(f"scene{i:03d}", bedroom(*dims)) for i, dims in enumerate(ROOM_DIMS)
    ]
    records += [
        SceneRecord("scene900", bedroom(4.1, 4.3, oob=True)),
        SceneRecord("scene901", bedroom(3.9, 4.7, oob=True)),
        SceneRecord("scene902", bedroom(4.6, 4.2, overlap=True)),
        SceneRecord("scene903", bedroom(5.1, 3.7, overlap=True)),
    ]
    kept, rejected = preprocess(records)
    assert len(kept) == len(ROOM_DIMS), [r.reasons for r in rejected]
    assert len(rejected) == 4
    return build_store(kept, rejected)


def main() -> None:
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    (FIXTURES / "replay").mkdir(parents=True)

    store = build_fixture_store()
    store.save(FIXTURES / "store")

    query = Condition(description=E2E_DESCRIPTION, room=E2E_ROOM)
    exemplars = select_exemplars(store, query, k=8)
    bundle = build_prompt(query, exemplars)
    (FIXTURES / "golden_prompt.txt").write_text(bundle.text, encoding="utf-8")
    (FIXTURES / "query_description.txt").write_text(E2E_DESCRIPTION + "\n", encoding="utf-8")

    digest = request_hash_for(bundle)
    fixture = {
        "schema": SCHEMA_FIXTURE,
        "hash": digest,
        "request": None,  # filled below
        "response": E2E_RESPONSE,
    }
    from roomweaver.gateway import ChatExchange, request_payload

    exchange = ChatExchange(bundle.to_messages(), ChatParams())
    fixture["request"] = request_payload(exchange)
    (FIXTURES / "replay" / f"{digest}.json").write_text(
        json.dumps(fixture, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    # ground truth aligned with the replay reply: same counts, shifted boxes
    gt = Layout(
        E2E_ROOM,
        (
            OrientedBox("double bed", (1.75, 1.3, 0.45), (1.8, 0.9, 2.1), 0.0),
            OrientedBox("wardrobe", (0.35, 3.1, 1.1), (0.6, 2.2, 1.8), 0.0),
            OrientedBox("nightstand", (3.1, 0.4, 0.3), (0.5, 0.6, 0.5), 0.0),
            OrientedBox("nightstand", (3.1, 3.9, 0.3), (0.5, 0.6, 0.5), 0.0),
        ),
    )
    (FIXTURES / "gt").mkdir()
    save_layout(gt, FIXTURES / "gt" / "e2e_scene.json", scene_id="e2e_scene")

    catalog = Catalog(
        [
            CatalogEntry("bed-a", "double bed", (1.9, 0.95, 2.1), "assets/bed-a.glb"),
            CatalogEntry("bed-b", "double bed", (1.6, 0.9, 2.0), "assets/bed-b.glb"),
            CatalogEntry("ward-a", "wardrobe", (0.6, 2.2, 1.8), "assets/ward-a.glb"),
            CatalogEntry("night-a", "nightstand", (0.45, 0.55, 0.45), "assets/night-a.glb"),
            CatalogEntry("night-b", "nightstand", (0.5, 0.6, 0.5), "assets/night-b.glb"),
            CatalogEntry("desk-a", "desk", (1.2, 0.75, 0.6), "assets/desk-a.glb"),
        ]
    )
    catalog.save(FIXTURES / "catalog.json")

    five = Layout(
        RoomSpec("bedroom", 4.0, 4.0),
        (
            OrientedBox("double bed", (2.0, 1.2, 0.45), (1.8, 0.9, 2.1), 0.0),
            OrientedBox("wardrobe", (0.35, 2.8, 1.1), (0.6, 2.2, 1.8), 0.0),
            OrientedBox("nightstand", (3.6, 0.4, 0.3), (0.5, 0.6, 0.5), 0.0),
            OrientedBox("nightstand", (0.4, 0.4, 0.3), (0.5, 0.6, 0.5), 90.0),
            OrientedBox("desk", (3.3, 3.3, 0.375), (1.2, 0.75, 0.6), 270.0),
        ),
    )
    save_layout(five, FIXTURES / "layout5.json", scene_id="layout5")
    scene = assemble(five, catalog, AssembleOptions(cameras_on=True, camera_count=8))
    scene.save(FIXTURES / "golden_scene.json")
    sentences = describe(five).sentences
    (FIXTURES / "golden_sentences.txt").write_text("\n".join(sentences) + "\n", encoding="utf-8")

    dataset = FIXTURES / "dataset"
    dataset.mkdir()
    save_layout(bedroom(4.0, 4.2), dataset / "bed_000.json", scene_id="bed_000")
    save_layout(bedroom(3.6, 3.8), dataset / "bed_001.json", scene_id="bed_001")
    save_layout(bedroom(4.4, 4.0), dataset / "bed_002.json", scene_id="bed_002")
    save_layout(bedroom(4.2, 4.6, oob=True), dataset / "bed_oob.json", scene_id="bed_oob")
    living = Layout(
        RoomSpec("living room", 5.5, 4.8),
        (
            OrientedBox("three seat sofa", (2.75, 0.7, 0.4), (2.2, 0.8, 0.9), 0.0),
            OrientedBox("coffee table", (2.75, 2.2, 0.2), (1.0, 0.4, 0.6), 0.0),
        ),
    )
    save_layout(living, dataset / "living_000.json", scene_id="living_000")
    nonrect = json.loads((dataset / "bed_001.json").read_text())
    nonrect["scene_id"] = "bed_nonrect"
    nonrect["floor_plan"] = "l_shaped"
    (dataset / "bed_nonrect.json").write_text(
        json.dumps(nonrect, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    bad = FIXTURES / "dataset_bad"
    bad.mkdir()
    (bad / "broken.json").write_text("{ not json", encoding="utf-8")

    print(f"fixtures written to {FIXTURES}")


def request_hash_for(bundle) -> str:
    from roomweaver.gateway import ChatExchange

    return request_hash(ChatExchange(bundle.to_messages(), ChatParams()))


if __name__ == "__main__":
    main()
