"""Command-line entry points.

Exit codes: 0 success, 2 runtime/generation failure (missing fixture,
unparseable reply, bad data files), 3 configuration error (bad flags,
missing store, live mode without a key).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .assemble import AssembleOptions, Catalog, CategoryNotInCatalog, assemble
from .core import RoomSpec
from .describe import describe
from .gateway import AuthError, ChatParams, Gateway, GatewayError, generate_layout
from .grammar import GrammarError
from .ingest import PreprocessFilters, StoreBuildOptions, build_store, load_scenes, preprocess
from .interchange import SchemaError, load_layout, save_layout
from .metrics import SceneIdMismatch, evaluate_set
from .prompts import (
    Condition,
    ExemplarStore,
    InsufficientExemplars,
    SelectionStrategy,
    build_prompt,
    select_exemplars,
)

EXIT_OK = 0
EXIT_RUNTIME = 2
EXIT_CONFIG = 3


class ConfigError(Exception):
    pass


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)


def _strategy(name: str) -> SelectionStrategy:
    try:
        return SelectionStrategy(name)
    except ValueError:
        raise ConfigError(f"unknown strategy {name!r} (random|retrieval|pos_neg)")


def _gateway(mode: str, fixture_dir, model: str | None = None) -> Gateway:
    del model  # the model rides on ChatParams, not on the gateway
    try:
        return Gateway(mode=mode, fixture_dir=fixture_dir)
    except ValueError:
        raise ConfigError(f"unknown mode {mode!r} (live|record|replay)")
    except AuthError as exc:
        raise ConfigError(str(exc))


def _load_store(path) -> ExemplarStore:
    try:
        return ExemplarStore.load(path)
    except SchemaError as exc:
        raise ConfigError(f"cannot load exemplar store: {exc}")


def _load_scene_dir(path) -> list[tuple[str, object]]:
    pairs = []
    for f in sorted(Path(path).glob("*.json")):
        if f.name.endswith(".diagnostics.json"):
            continue  # generation sidecar, not a layout
        doc = json.loads(f.read_text(encoding="utf-8"))
        scene_id = doc.get("scene_id", f.stem)
        pairs.append((scene_id, load_layout(f)))
    return pairs


@click.group()
def cli():
    """Language-driven room layout generation, assembly and evaluation."""


@cli.command()
@click.option("--room-type", required=True)
@click.option("--length", type=float, required=True)
@click.option("--width", type=float, required=True)
@click.option("--description", default=None)
@click.option("--description-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--store", "store_path", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--k", type=int, default=8, show_default=True)
@click.option("--strategy", default="retrieval", show_default=True)
@click.option("--mode", default="replay", show_default=True)
@click.option("--fixture-dir", type=click.Path(), default=None)
@click.option("--repair-attempts", type=int, default=0, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--model", default="gpt-4", show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--diagnostics-out", type=click.Path(), default=None,
              help="defaults to <out>.diagnostics.json")
def generate(room_type, length, width, description, description_file, store_path, k,
             strategy, mode, fixture_dir, repair_attempts, seed, model, out, diagnostics_out):
    """Generate a layout from a description via in-context learning."""
    if (description is None) == (description_file is None):
        raise ConfigError("provide exactly one of --description / --description-file")
    if description_file is not None:
        description = Path(description_file).read_text(encoding="utf-8").strip()
    strategy = _strategy(strategy)
    store = _load_store(store_path)
    gateway = _gateway(mode, fixture_dir)
    room = RoomSpec(room_type=room_type, length=length, width=width)
    query = Condition(description=description, room=room)
    try:
        exemplars = select_exemplars(store, query, k, strategy, seed=seed)
    except InsufficientExemplars as exc:
        raise ConfigError(str(exc))
    bundle = build_prompt(query, exemplars)
    layout, diagnostics = generate_layout(
        room, bundle, gateway, repair_attempts=repair_attempts, params=ChatParams(model=model)
    )
    save_layout(layout, out)
    diag_path = diagnostics_out or f"{out}.diagnostics.json"
    Path(diag_path).write_text(
        json.dumps(diagnostics.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    for v in diagnostics.violations:
        click.echo(f"violation: box {v.box_index} {v.kind}: {v.detail}", err=True)
    click.echo(f"wrote {out} ({len(layout.boxes)} boxes, "
               f"{len(diagnostics.violations)} residual violations)")


@cli.command()
@click.option("--pred", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--gt", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--tol", type=float, default=0.01, show_default=True)
@click.option("--json-out", type=click.Path(), default=None)
def evaluate(pred, gt, tol, json_out):
    """Evaluate predicted layouts against ground truth and print the table."""
    report = evaluate_set(_load_scene_dir(pred), _load_scene_dir(gt), tol)
    click.echo(f"scenes: {len(report.scenes)}")
    click.echo(report.render_table())
    if json_out:
        Path(json_out).write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )


@cli.command("describe")
@click.option("--layout", "layout_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", type=click.Path(), default=None)
def describe_cmd(layout_path, out):
    """Print the rule-based description of a layout, one sentence per line."""
    layout = load_layout(layout_path)
    description = describe(layout)
    text = "\n".join(description.sentences) + ("\n" if description.sentences else "")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command("assemble")
@click.option("--layout", "layout_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--trajectory-out", type=click.Path(), default=None)
@click.option("--fit-to-box", is_flag=True, default=False)
@click.option("--cameras/--no-cameras", "cameras_on", default=True)
@click.option("--camera-count", type=int, default=250, show_default=True)
@click.option("--elevation-deg", type=float, default=35.0, show_default=True)
@click.option("--radius-factor", type=float, default=1.5, show_default=True)
def assemble_cmd(layout_path, catalog_path, out, trajectory_out, fit_to_box, cameras_on,
                 camera_count, elevation_deg, radius_factor):
    """Assemble a scene from a layout and a catalog manifest."""
    layout = load_layout(layout_path)
    catalog = Catalog.load(catalog_path)
    opts = AssembleOptions(
        fit_to_box=fit_to_box,
        cameras_on=cameras_on,
        camera_count=camera_count,
        elevation_deg=elevation_deg,
        radius_factor=radius_factor,
    )
    scene = assemble(layout, catalog, opts)
    scene.save(out)
    if trajectory_out:
        Path(trajectory_out).write_text(scene.camera_trajectory(), encoding="utf-8")
    click.echo(f"wrote {out} ({len(scene.instances)} instances, {len(scene.cameras)} cameras)")


@cli.command("ingest")
@click.option("--root", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--room-type", default=None)
@click.option("--out-store", type=click.Path(), required=True)
@click.option("--max-objects", type=int, default=12, show_default=True)
@click.option("--whitelist", default=None, help="comma-separated category whitelist")
@click.option("--tol", type=float, default=0.01, show_default=True)
@click.option("--paraphrase-mode", default=None,
              help="paraphrase descriptions via the LLM (live|record|replay)")
@click.option("--fixture-dir", type=click.Path(), default=None)
def ingest_cmd(root, room_type, out_store, max_objects, whitelist, tol, paraphrase_mode,
               fixture_dir):
    """Load interchange scenes, filter them, and build an exemplar store."""
    scenes = load_scenes(root, room_type)
    filters = PreprocessFilters(
        max_objects=max_objects,
        category_whitelist=frozenset(whitelist.split(",")) if whitelist else None,
        tol=tol,
    )
    kept, rejected = preprocess(scenes, filters)
    gateway = _gateway(paraphrase_mode, fixture_dir) if paraphrase_mode else None
    store = build_store(kept, rejected, StoreBuildOptions(paraphrase_with=gateway, tol=tol))
    store.save(out_store)
    negatives = sum(1 for r in rejected if r.negative_eligible)
    click.echo(
        f"scenes: {len(scenes)} kept: {len(kept)} rejected: {len(rejected)} "
        f"(negatives mined: {negatives})"
    )
    for reject in rejected:
        click.echo(f"rejected {reject.record.scene_id}: {', '.join(reject.reasons)}", err=True)


@cli.command("serve")
@click.option("--bind", default="127.0.0.1:8080", show_default=True)
@click.option("--store", "store_path", type=click.Path(exists=True, file_okay=False),
              required=True)
@click.option("--mode", default="replay", show_default=True)
@click.option("--fixture-dir", type=click.Path(), default=None)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="serve a static UI bundle at / (the API stays under /v1)")
def serve_cmd(bind, store_path, mode, fixture_dir, catalog_path, ui_dir):
    """Run the HTTP service backing the designer UI."""
    from .server import serve

    try:
        serve(bind, store_path, mode, fixture_dir=fixture_dir, catalog_path=catalog_path,
              ui_dir=ui_dir)
    except AuthError as exc:
        raise ConfigError(str(exc))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except click.UsageError as exc:
        _fail(exc.format_message())
        return EXIT_CONFIG
    except ConfigError as exc:
        _fail(str(exc))
        return EXIT_CONFIG
    except (GatewayError, GrammarError, SchemaError, SceneIdMismatch,
            CategoryNotInCatalog, InsufficientExemplars) as exc:
        _fail(f"{type(exc).__name__}: {exc}")
        return EXIT_RUNTIME
    except click.Abort:
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
