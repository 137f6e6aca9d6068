"""Dataset loading, preprocessing filters, and exemplar store construction.

Scene files use the layout interchange schema; a converter script maps raw
3D-FRONT exports onto it so the engine itself never parses the licensed
dataset's native format. Preprocessing applies, in order: rectangular floor
plans only, a max object count, an optional category whitelist, and the
out-of-bounds/overlap validators. Rejected scenes keep machine-readable
reasons; the ones that failed validation become negative exemplars.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core import DEFAULT_TOL, Layout, validate_layout
from .describe import describe, paraphrase
from .gateway import Gateway
from .interchange import SCHEMA_LAYOUT, SchemaError, layout_from_dict
from .prompts import Condition, Exemplar, ExemplarStore, Polarity

REJECT_FLOOR_PLAN = "floor_plan"
REJECT_OBJECT_COUNT = "object_count"
REJECT_CATEGORY = "category"
REJECT_OOB = "oob"
REJECT_OVERLAP = "overlap"

NEGATIVE_REASONS = frozenset({REJECT_OOB, REJECT_OVERLAP})


@dataclass(frozen=True)
class SceneRecord:
    scene_id: str
    layout: Layout
    floor_plan: str = "rectangular"


@dataclass(frozen=True)
class RejectedScene:
    record: SceneRecord
    reasons: tuple[str, ...]

    @property
    def negative_eligible(self) -> bool:
        return bool(NEGATIVE_REASONS.intersection(self.reasons))


@dataclass(frozen=True)
class DatasetSplit:
    name: str  # train | val | test
    scenes: tuple[SceneRecord, ...]

    def __post_init__(self):
        ids = [s.scene_id for s in self.scenes]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate scene ids in split {self.name!r}")


def load_scenes(root, room_type: str | None = None) -> list[SceneRecord]:
    """Load every interchange scene file under ``root`` (sorted, recursive)."""
    root = Path(root)
    records = []
    for path in sorted(root.rglob("*.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(path, f"unreadable scene file: {exc}") from exc
        if doc.get("schema") != SCHEMA_LAYOUT:
            raise SchemaError(path, f"schema must be {SCHEMA_LAYOUT!r}")
        layout = layout_from_dict(doc, source=str(path))
        if room_type is not None and layout.room.room_type != room_type:
            continue
        records.append(
            SceneRecord(
                scene_id=doc.get("scene_id", path.stem),
                layout=layout,
                floor_plan=doc.get("floor_plan", "rectangular"),
            )
        )
    return records


def load_split(root, name: str, room_type: str | None = None) -> DatasetSplit:
    """Load ``root/<name>/`` as a named split."""
    return DatasetSplit(name=name, scenes=tuple(load_scenes(Path(root) / name, room_type)))


@dataclass(frozen=True)
class PreprocessFilters:
    """ATISS-style filter settings; defaults are documented approximations."""

    max_objects: int | None = 12
    category_whitelist: frozenset[str] | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.category_whitelist is not None:
            object.__setattr__(self, "category_whitelist", frozenset(self.category_whitelist))


def preprocess(
    scenes: list[SceneRecord],
    filters: PreprocessFilters = PreprocessFilters(),
) -> tuple[list[SceneRecord], list[RejectedScene]]:
    """Split scenes into kept and rejected-with-reasons."""
    kept: list[SceneRecord] = []
    rejected: list[RejectedScene] = []
    for record in scenes:
        reasons: list[str] = []
        if record.floor_plan != "rectangular":
            reasons.append(REJECT_FLOOR_PLAN)
        if filters.max_objects is not None and len(record.layout.boxes) > filters.max_objects:
            reasons.append(REJECT_OBJECT_COUNT)
        if filters.category_whitelist is not None and any(
            b.category not in filters.category_whitelist for b in record.layout.boxes
        ):
            reasons.append(REJECT_CATEGORY)
        violations = validate_layout(record.layout, filters.tol)
        if any(v.kind == "oob" for v in violations):
            reasons.append(REJECT_OOB)
        if any(v.kind == "overlap" for v in violations):
            reasons.append(REJECT_OVERLAP)
        if reasons:
            rejected.append(RejectedScene(record, tuple(reasons)))
        else:
            kept.append(record)
    return kept, rejected


@dataclass(frozen=True)
class StoreBuildOptions:
    paraphrase_with: Gateway | None = None  # None: keep rule-based descriptions
    tol: float = DEFAULT_TOL


def build_store(
    kept: list[SceneRecord],
    rejected: list[RejectedScene] = (),
    opts: StoreBuildOptions = StoreBuildOptions(),
) -> ExemplarStore:
    """Positives from kept scenes, negatives from validation rejects.

    Enforces the store contract: every positive passes both validators,
    every negative fails at least one.
    """
    store = ExemplarStore()
    for record in kept:
        if validate_layout(record.layout, opts.tol):
            raise ValueError(
                f"scene {record.scene_id!r} fails validation; run preprocess() first"
            )
        store.add(_exemplar_for(record, Polarity.POSITIVE, opts))
    for reject in rejected:
        if not reject.negative_eligible:
            continue
        if not validate_layout(reject.record.layout, opts.tol):
            raise ValueError(
                f"scene {reject.record.scene_id!r} was rejected as "
                f"{reject.reasons} but passes validation"
            )
        store.add(_exemplar_for(reject.record, Polarity.NEGATIVE, opts))
    return store


def _exemplar_for(record: SceneRecord, polarity: Polarity, opts: StoreBuildOptions) -> Exemplar:
    description = describe(record.layout)
    if opts.paraphrase_with is not None and opts.paraphrase_with.enabled:
        description = paraphrase(description, opts.paraphrase_with)
    condition = Condition(description=description.text, room=record.layout.room)
    return Exemplar(
        condition=condition,
        layout=record.layout,
        polarity=polarity,
        exemplar_id=record.scene_id,
    )
