"""Rule-based layout descriptions, plus an optional LLM paraphrase pass.

Each box yields one sentence naming its category, its 3x3 grid cell and a
quantized orientation, e.g.

    A wardrobe is placed at the top-left corner of the room, with a
    perpendicular orientation.

The vocabulary is fixed so descriptions are deterministic and can be checked
against the grid assignment. Paraphrasing sends the template sentences to the
LLM and falls back to the originals whenever the reply drops an object.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum

from .core import GridCell, Layout, grid_cell_of
from .gateway import ChatExchange, ChatMessage, ChatParams, Gateway

log = logging.getLogger(__name__)

ORIENTATION_PHRASES = {
    0: "a straight orientation facing the front",
    90: "a perpendicular orientation",
    180: "a straight orientation facing the back",
    270: "a perpendicular orientation, mirrored",
}

PARAPHRASE_INSTRUCTION = (
    "Paraphrase each numbered sentence below so the wording varies but the "
    "meaning stays the same. Keep exactly one sentence per line, in the same "
    "order, and keep every object name unchanged. Reply with the sentences "
    "only, one per line, without numbering.\n\n"
)


class DescriptionSource(str, Enum):
    RULE_BASED = "rule_based"
    PARAPHRASED = "paraphrased"


@dataclass(frozen=True)
class Description:
    sentences: tuple[str, ...]
    source: DescriptionSource = DescriptionSource.RULE_BASED

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


def quantized_orientation(deg: float) -> int:
    """Snap a yaw angle to the nearest of 0/90/180/270 (ties round up)."""
    return (int((deg % 360.0) / 90.0 + 0.5) % 4) * 90


def cell_phrase(cell: GridCell) -> str:
    if cell.is_center:
        return "center"
    if cell.is_corner:
        return f"{cell.name} corner"
    return f"{cell.name} side"


def _article(category: str) -> str:
    return "An" if category[0] in "aeiou" else "A"


def sentence_for(category: str, cell: GridCell, orientation_deg: float) -> str:
    orientation = ORIENTATION_PHRASES[quantized_orientation(orientation_deg)]
    return (
        f"{_article(category)} {category} is placed at the {cell_phrase(cell)} "
        f"of the room, with {orientation}."
    )


def describe(layout: Layout) -> Description:
    """Emit one placement sentence per box, in layout order."""
    sentences = tuple(
        sentence_for(box.category, grid_cell_of(box, layout.room), box.orientation_deg)
        for box in layout.boxes
    )
    return Description(sentences)


_SENTENCE_CATEGORY_RE = re.compile(r"^(?:A|An) (.+?) is placed at")


def categories_of(description: Description) -> list[str]:
    """Recover category names from rule-based sentences."""
    cats = []
    for sentence in description.sentences:
        m = _SENTENCE_CATEGORY_RE.match(sentence)
        if m:
            cats.append(m.group(1))
    return cats


def paraphrase(description: Description, gateway: Gateway) -> Description:
    """Paraphrase template sentences via the LLM, verifying nothing was dropped.

    The reply must keep one sentence per line and mention every category;
    otherwise the rule-based original is returned unchanged.
    """
    if not description.sentences:
        return description
    if not gateway.enabled:
        return description
    prompt = PARAPHRASE_INSTRUCTION + "\n".join(
        f"{i + 1}. {s}" for i, s in enumerate(description.sentences)
    )
    exchange = ChatExchange(
        messages=(ChatMessage("user", prompt),),
        params=ChatParams(temperature=0.7),
    )
    reply = gateway.complete(exchange)
    lines = tuple(line.strip() for line in reply.splitlines() if line.strip())
    if len(lines) != len(description.sentences):
        log.warning(
            "paraphrase returned %d lines for %d sentences; keeping rule-based text",
            len(lines),
            len(description.sentences),
        )
        return description
    lowered = reply.lower()
    missing = [c for c in categories_of(description) if c not in lowered]
    if missing:
        log.warning("paraphrase dropped %s; keeping rule-based text", missing)
        return description
    return Description(lines, DescriptionSource.PARAPHRASED)
