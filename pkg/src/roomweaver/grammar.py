"""CSS-style layout rules: the wire format exchanged with the LLM.

One rule per box, selector = hyphenated category plus a 0-based per-category
index, seven fixed attributes:

    wardrobe-0 { width: 2.02m; depth: 0.62m; height: 2.30m; left: 0.31m; top: 1.37m; elevation: 1.15m; orientation: 90; }

width/depth/height are the box extents (local x, local y, vertical), left/
top/elevation the box center coordinates. Meter values print with exactly
two decimals and an "m" suffix; orientation prints in degrees with trailing
zeros trimmed. The parser skips prose and code fences around rules but is
strict inside a rule: a missing attribute, an unparsable value, or a
duplicate raises instead of being silently coerced.

Grammar (EBNF), also documented in docs/formats.md:

    layout      = { rule } ;
    rule        = selector , "{" , 7 * declaration , "}" ;
    selector    = word , { "-" , word } , "-" , index ;
    declaration = attribute , ":" , value , ";" ;
    attribute   = "width" | "depth" | "height" | "left" | "top"
                | "elevation" | "orientation" ;
    value       = number , [ "m" ] ;
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import FLOOR_EPS, Layout, OrientedBox, RoomSpec

METER_ATTRS = ("width", "depth", "height", "left", "top", "elevation")
REQUIRED_ATTRS = METER_ATTRS + ("orientation",)


class GrammarError(Exception):
    """Base class for layout-rule parse failures."""


class NoRulesFound(GrammarError):
    def __init__(self):
        super().__init__("no layout rules found in the response")


class MissingAttribute(GrammarError):
    def __init__(self, selector: str, attribute: str):
        self.selector = selector
        self.attribute = attribute
        super().__init__(f"rule {selector!r} lacks required attribute {attribute!r}")


class MalformedValue(GrammarError):
    def __init__(self, selector: str, attribute: str, raw: str):
        self.selector = selector
        self.attribute = attribute
        self.raw = raw
        super().__init__(f"rule {selector!r}, attribute {attribute!r}: bad value {raw!r}")


class DuplicateRule(GrammarError):
    def __init__(self, selector: str, reason: str = "selector already used"):
        self.selector = selector
        super().__init__(f"rule {selector!r}: {reason}")


@dataclass(frozen=True)
class CssRule:
    selector: str
    declarations: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class CssLayoutDocument:
    """Lexed rule list; the midpoint between raw text and a Layout."""

    rules: tuple[CssRule, ...]


def _fmt_meters(v: float) -> str:
    s = f"{v:.2f}"
    if s == "-0.00":
        s = "0.00"
    return s + "m"


def _fmt_degrees(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def selector_for(category: str, index: int) -> str:
    return f"{category.replace(' ', '-')}-{index}"


def category_of_selector(selector: str) -> str:
    base = re.sub(r"-\d+$", "", selector)
    return base.replace("-", " ")


def document_of(layout: Layout) -> CssLayoutDocument:
    counts: dict[str, int] = {}
    rules = []
    for box in layout.boxes:
        idx = counts.get(box.category, 0)
        counts[box.category] = idx + 1
        w, h, d = box.size
        x, y, z = box.center
        decls = (
            ("width", _fmt_meters(w)),
            ("depth", _fmt_meters(d)),
            ("height", _fmt_meters(h)),
            ("left", _fmt_meters(x)),
            ("top", _fmt_meters(y)),
            ("elevation", _fmt_meters(z)),
            ("orientation", _fmt_degrees(box.orientation_deg)),
        )
        rules.append(CssRule(selector_for(box.category, idx), decls))
    return CssLayoutDocument(tuple(rules))


def render_document(doc: CssLayoutDocument) -> str:
    lines = []
    for rule in doc.rules:
        body = " ".join(f"{attr}: {val};" for attr, val in rule.declarations)
        lines.append(f"{rule.selector} {{ {body} }}")
    return "\n".join(lines)


def serialize_layout(layout: Layout) -> str:
    """Render a layout as CSS rules, one per line; empty layout -> empty text."""
    return render_document(document_of(layout))


_RULE_RE = re.compile(r"([A-Za-z][A-Za-z0-9\-]*)\s*\{([^{}]*)\}")
_DECL_RE = re.compile(r"^\s*([A-Za-z\-]+)\s*:\s*(.*?)\s*$")
_METER_RE = re.compile(r"^[+-]?\d+(?:\.\d+)?\s*m$")
_DEGREE_RE = re.compile(r"^[+-]?\d+(?:\.\d+)?$")


def scan_document(text: str) -> CssLayoutDocument:
    """Lex rules out of arbitrary text, ignoring prose and code fences."""
    cleaned = re.sub(r"^\s*```[A-Za-z0-9]*\s*$", "", text, flags=re.MULTILINE)
    rules = []
    seen = set()
    for match in _RULE_RE.finditer(cleaned):
        selector, body = match.group(1), match.group(2)
        if ":" not in body:
            continue  # a brace block with no declarations is prose, not a rule
        if selector in seen:
            raise DuplicateRule(selector)
        seen.add(selector)
        decls = []
        for chunk in body.split(";"):
            if not chunk.strip():
                continue
            decl = _DECL_RE.match(chunk)
            if decl is None:
                raise MalformedValue(selector, "<declaration>", chunk.strip())
            decls.append((decl.group(1).lower(), decl.group(2)))
        rules.append(CssRule(selector, tuple(decls)))
    if not rules:
        raise NoRulesFound()
    return CssLayoutDocument(tuple(rules))


def _rule_values(rule: CssRule) -> dict[str, float]:
    found: dict[str, float] = {}
    for attr, raw in rule.declarations:
        if attr not in REQUIRED_ATTRS:
            continue  # unknown attributes are surroundings, not errors
        if attr in found:
            raise MalformedValue(rule.selector, attr, "duplicated attribute")
        pattern = _METER_RE if attr in METER_ATTRS else _DEGREE_RE
        if not pattern.match(raw):
            raise MalformedValue(rule.selector, attr, raw)
        found[attr] = float(raw.rstrip("m").strip()) if attr in METER_ATTRS else float(raw)
    for attr in REQUIRED_ATTRS:
        if attr not in found:
            raise MissingAttribute(rule.selector, attr)
    return found


def document_to_layout(doc: CssLayoutDocument, room: RoomSpec) -> Layout:
    boxes = []
    for rule in doc.rules:
        vals = _rule_values(rule)
        for attr in ("width", "depth", "height"):
            if vals[attr] <= 0:
                raise MalformedValue(rule.selector, attr, f"{vals[attr]} (must be positive)")
        if vals["elevation"] < 0:
            raise MalformedValue(rule.selector, "elevation", f"{vals['elevation']} (negative)")
        if vals["elevation"] - vals["height"] / 2 < -FLOOR_EPS:
            raise MalformedValue(
                rule.selector, "elevation", f"{vals['elevation']} (box sinks below the floor)"
            )
        try:
            box = OrientedBox(
                category=category_of_selector(rule.selector),
                center=(vals["left"], vals["top"], vals["elevation"]),
                size=(vals["width"], vals["height"], vals["depth"]),
                orientation_deg=vals["orientation"],
            )
        except ValueError as exc:
            raise MalformedValue(rule.selector, "<rule>", str(exc)) from exc
        boxes.append((rule.selector, box))
    layout_boxes = []
    seen = set()
    for selector, box in boxes:
        key = (box.category, box.center, box.size, box.orientation_deg)
        if key in seen:
            raise DuplicateRule(selector, "identical box already parsed")
        seen.add(key)
        layout_boxes.append(box)
    return Layout(room=room, boxes=tuple(layout_boxes))


def parse_layout(text: str, room: RoomSpec) -> Layout:
    """Parse LLM response text into a Layout; raises GrammarError subclasses."""
    return document_to_layout(scan_document(text), room)
