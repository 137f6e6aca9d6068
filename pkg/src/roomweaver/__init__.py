"""roomweaver: natural-language room descriptions to validated 3D layouts."""

from .core import (
    GridCell,
    Layout,
    OrientedBox,
    RoomSpec,
    Violation,
    box_iou_3d,
    boxes_overlap,
    footprint_polygon,
    grid_cell_of,
    out_of_bounds,
    validate_layout,
)
from .describe import Description, describe, paraphrase
from .gateway import ChatExchange, ChatMessage, ChatParams, Gateway, GatewayMode, generate_layout
from .grammar import parse_layout, serialize_layout
from .interchange import layout_from_dict, layout_to_dict, load_layout, save_layout
from .metrics import EvalReport, SceneEval, count_metrics, evaluate_set, layout_miou, scene_flags
from .prompts import (
    Condition,
    Exemplar,
    ExemplarStore,
    Polarity,
    PromptBundle,
    SelectionStrategy,
    build_prompt,
    condition_distance,
    select_exemplars,
)

__version__ = "0.1.0"

__all__ = [
    "GridCell",
    "Layout",
    "OrientedBox",
    "RoomSpec",
    "Violation",
    "box_iou_3d",
    "boxes_overlap",
    "footprint_polygon",
    "grid_cell_of",
    "out_of_bounds",
    "validate_layout",
    "Description",
    "describe",
    "paraphrase",
    "ChatExchange",
    "ChatMessage",
    "ChatParams",
    "Gateway",
    "GatewayMode",
    "generate_layout",
    "parse_layout",
    "serialize_layout",
    "layout_from_dict",
    "layout_to_dict",
    "load_layout",
    "save_layout",
    "EvalReport",
    "SceneEval",
    "count_metrics",
    "evaluate_set",
    "layout_miou",
    "scene_flags",
    "Condition",
    "Exemplar",
    "ExemplarStore",
    "Polarity",
    "PromptBundle",
    "SelectionStrategy",
    "build_prompt",
    "condition_distance",
    "select_exemplars",
    "__version__",
]
