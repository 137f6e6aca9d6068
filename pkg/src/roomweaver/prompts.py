"""Exemplar store and prompt assembly for in-context layout generation.

A prompt is task specification + k worked exemplars + the query condition.
Exemplars are retrieved by squared distance between room dimensions,

    f(a, b) = (length_a - length_b)^2 + (width_a - width_b)^2,

with ties broken by store insertion order. Negative exemplars (layouts that
fail the out-of-bounds or overlap checks) are rendered with an explicit
avoid marker so the LLM is steered away from them.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .core import Layout, RoomSpec
from .gateway import ChatMessage
from .grammar import serialize_layout
from .interchange import SchemaError, dumps_layout, load_layout

SCHEMA_STORE = "roomweaver-store/1"
NEGATIVE_MARKER = "This is a negative exemplar; avoid layouts like this one:"


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class SelectionStrategy(str, Enum):
    RANDOM = "random"
    RETRIEVAL = "retrieval"
    POS_NEG = "pos_neg"


class InsufficientExemplars(Exception):
    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(f"need {needed} exemplars, store has {available}")


@dataclass(frozen=True)
class Condition:
    """Generation input: description text plus the room it applies to."""

    description: str
    room: RoomSpec

    @property
    def room_type(self) -> str:
        return self.room.room_type


@dataclass(frozen=True)
class Exemplar:
    condition: Condition
    layout: Layout
    polarity: Polarity = Polarity.POSITIVE
    exemplar_id: str = ""


def condition_distance(a: Condition, b: Condition) -> float:
    """Squared room-dimension distance between two conditions."""
    return (a.room.length - b.room.length) ** 2 + (a.room.width - b.room.width) ** 2


class ExemplarStore:
    """Insertion-ordered exemplar collection, immutable once built."""

    def __init__(self, exemplars: list[Exemplar] | None = None):
        self._exemplars: list[Exemplar] = list(exemplars or [])

    def add(self, exemplar: Exemplar) -> None:
        self._exemplars.append(exemplar)

    def __len__(self) -> int:
        return len(self._exemplars)

    def __iter__(self):
        return iter(self._exemplars)

    @property
    def exemplars(self) -> list[Exemplar]:
        return list(self._exemplars)

    def by_polarity(self, polarity: Polarity) -> list[Exemplar]:
        return [e for e in self._exemplars if e.polarity is polarity]

    def save(self, root) -> None:
        """Persist as layouts/<id>.json files plus a manifest."""
        root = Path(root)
        (root / "layouts").mkdir(parents=True, exist_ok=True)
        entries = []
        for i, ex in enumerate(self._exemplars):
            ex_id = ex.exemplar_id or f"ex{i:05d}"
            rel = f"layouts/{ex_id}.json"
            (root / rel).write_text(dumps_layout(ex.layout, scene_id=ex_id), encoding="utf-8")
            entries.append(
                {
                    "id": ex_id,
                    "polarity": ex.polarity.value,
                    "room_type": ex.condition.room_type,
                    "length": ex.condition.room.length,
                    "width": ex.condition.room.width,
                    "description": ex.condition.description,
                    "file": rel,
                }
            )
        manifest = {"schema": SCHEMA_STORE, "exemplars": entries}
        (root / "manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, root) -> "ExemplarStore":
        root = Path(root)
        manifest_path = root / "manifest.json"
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(manifest_path, f"unreadable store manifest: {exc}") from exc
        if manifest.get("schema") != SCHEMA_STORE:
            raise SchemaError(manifest_path, f"schema must be {SCHEMA_STORE!r}")
        store = cls()
        for entry in manifest["exemplars"]:
            layout = load_layout(root / entry["file"])
            condition = Condition(description=entry["description"], room=layout.room)
            store.add(
                Exemplar(
                    condition=condition,
                    layout=layout,
                    polarity=Polarity(entry["polarity"]),
                    exemplar_id=entry["id"],
                )
            )
        return store


def _retrieve(pool: list[Exemplar], query: Condition, k: int) -> list[Exemplar]:
    ranked = sorted(
        enumerate(pool), key=lambda item: (condition_distance(item[1].condition, query), item[0])
    )
    return [ex for _, ex in ranked[:k]]


def select_exemplars(
    store: ExemplarStore,
    query: Condition,
    k: int,
    strategy: SelectionStrategy = SelectionStrategy.RETRIEVAL,
    seed: int | None = None,
) -> list[Exemplar]:
    """Pick k exemplars for a query; never returns the query's own entry."""
    if k < 1:
        raise ValueError("k must be >= 1")
    strategy = SelectionStrategy(strategy)
    positives = [
        e for e in store.by_polarity(Polarity.POSITIVE) if e.condition != query
    ]
    if strategy is SelectionStrategy.RETRIEVAL:
        if len(positives) < k:
            raise InsufficientExemplars(k, len(positives))
        return _retrieve(positives, query, k)
    if strategy is SelectionStrategy.RANDOM:
        if len(positives) < k:
            raise InsufficientExemplars(k, len(positives))
        return random.Random(seed).sample(positives, k)
    # pos_neg: ceil(k/2) retrieved positives, floor(k/2) retrieved negatives
    pos_k = math.ceil(k / 2)
    neg_k = k // 2
    negatives = [
        e for e in store.by_polarity(Polarity.NEGATIVE) if e.condition != query
    ]
    if len(positives) < pos_k or len(negatives) < neg_k:
        raise InsufficientExemplars(k, len(positives) + len(negatives))
    return _retrieve(positives, query, pos_k) + _retrieve(negatives, query, neg_k)


def default_task_spec() -> str:
    return resources.files("roomweaver.templates").joinpath("task_spec.txt").read_text(
        encoding="utf-8"
    )


@dataclass(frozen=True)
class PromptFormat:
    """Rendering knobs; the task text ships as a swappable template file."""

    task_spec: str = field(default_factory=default_task_spec)
    negative_marker: str = NEGATIVE_MARKER


@dataclass(frozen=True)
class PromptBundle:
    task_spec: str
    exemplars: tuple[str, ...]
    query: str

    @property
    def text(self) -> str:
        parts = [self.task_spec.rstrip("\n")]
        parts.extend(block.rstrip("\n") for block in self.exemplars)
        parts.append(self.query.rstrip("\n"))
        return "\n\n".join(parts) + "\n"

    def to_messages(self) -> tuple[ChatMessage, ...]:
        return (ChatMessage("user", self.text),)


def _condition_header(condition: Condition) -> str:
    room = condition.room
    return (
        f"Room type: {room.room_type}\n"
        f"Room dimensions: {room.length:.2f}m x {room.width:.2f}m\n"
        f"Description: {condition.description}\n"
        "Layout:"
    )


def render_exemplar(exemplar: Exemplar, fmt: PromptFormat) -> str:
    block = f"{_condition_header(exemplar.condition)}\n{serialize_layout(exemplar.layout)}"
    if exemplar.polarity is Polarity.NEGATIVE:
        block = f"{fmt.negative_marker}\n{block}"
    return block


def build_prompt(
    query: Condition,
    exemplars: list[Exemplar],
    fmt: PromptFormat | None = None,
) -> PromptBundle:
    """Assemble task spec, rendered exemplars (selection order) and the query."""
    fmt = fmt or PromptFormat()
    rendered = tuple(render_exemplar(ex, fmt) for ex in exemplars)
    return PromptBundle(task_spec=fmt.task_spec, exemplars=rendered, query=_condition_header(query))
