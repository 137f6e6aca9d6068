/** Top-down layout rendering, split into a pure display-list builder and a
 * thin canvas painter. The builder is a pure function of its inputs, so the
 * same layout/violations always produce the same drawn scene, and tests can
 * assert on the display list without a real canvas.
 */

import { Viewport, footprintCorners, orientationArrow } from "./geometry";
import type { LayoutDoc, Violation } from "./types";
import type { Point } from "./geometry";

export type BoxStyle = "normal" | "selected" | "oob" | "overlap";

export interface RoomShape {
  kind: "room";
  corners: Point[];
}

export interface GridShape {
  kind: "grid";
  lines: Array<{ from: Point; to: Point }>;
}

export interface BoxShape {
  kind: "box";
  index: number;
  corners: Point[];
  label: string;
  labelAt: Point;
  arrow: { from: Point; to: Point };
  style: BoxStyle;
}

export type Shape = RoomShape | GridShape | BoxShape;

export interface RenderOptions {
  canvasWidth: number;
  canvasHeight: number;
  showGrid: boolean;
  selected?: number;
}

function styleFor(index: number, violations: Violation[], selected?: number): BoxStyle {
  if (index === selected) {
    return "selected";
  }
  if (violations.some((v) => v.kind === "oob" && v.box_index === index)) {
    return "oob";
  }
  if (
    violations.some(
      (v) => v.kind === "overlap" && (v.box_index === index || v.partner === index),
    )
  ) {
    return "overlap";
  }
  return "normal";
}

export function buildScene(
  layout: LayoutDoc,
  violations: Violation[],
  opts: RenderOptions,
): Shape[] {
  const room = layout.room;
  const view = new Viewport(room, opts.canvasWidth, opts.canvasHeight);
  const shapes: Shape[] = [];

  shapes.push({
    kind: "room",
    corners: [
      view.toCanvas({ x: 0, y: 0 }),
      view.toCanvas({ x: room.length, y: 0 }),
      view.toCanvas({ x: room.length, y: room.width }),
      view.toCanvas({ x: 0, y: room.width }),
    ],
  });

  if (opts.showGrid) {
    const lines = [];
    for (let i = 1; i < 3; i++) {
      lines.push({
        from: view.toCanvas({ x: (room.length * i) / 3, y: 0 }),
        to: view.toCanvas({ x: (room.length * i) / 3, y: room.width }),
      });
      lines.push({
        from: view.toCanvas({ x: 0, y: (room.width * i) / 3 }),
        to: view.toCanvas({ x: room.length, y: (room.width * i) / 3 }),
      });
    }
    shapes.push({ kind: "grid", lines });
  }

  layout.boxes.forEach((box, index) => {
    const arrow = orientationArrow(box);
    shapes.push({
      kind: "box",
      index,
      corners: footprintCorners(box).map((p) => view.toCanvas(p)),
      label: box.category,
      labelAt: view.toCanvas({ x: box.center[0], y: box.center[1] }),
      arrow: { from: view.toCanvas(arrow.from), to: view.toCanvas(arrow.to) },
      style: styleFor(index, violations, opts.selected),
    });
  });
  return shapes;
}

const BOX_COLORS: Record<BoxStyle, { stroke: string; fill: string }> = {
  normal: { stroke: "#2b6cb0", fill: "rgba(43, 108, 176, 0.15)" },
  selected: { stroke: "#2f855a", fill: "rgba(47, 133, 90, 0.2)" },
  oob: { stroke: "#c53030", fill: "rgba(197, 48, 48, 0.2)" },
  overlap: { stroke: "#b7791f", fill: "rgba(183, 121, 31, 0.25)" },
};

export function paint(ctx: CanvasRenderingContext2D, shapes: Shape[]): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const shape of shapes) {
    if (shape.kind === "room") {
      ctx.strokeStyle = "#1a202c";
      ctx.lineWidth = 2;
      tracePolygon(ctx, shape.corners);
      ctx.stroke();
    } else if (shape.kind === "grid") {
      ctx.strokeStyle = "#cbd5e0";
      ctx.lineWidth = 1;
      for (const line of shape.lines) {
        ctx.beginPath();
        ctx.moveTo(line.from.x, line.from.y);
        ctx.lineTo(line.to.x, line.to.y);
        ctx.stroke();
      }
    } else {
      const colors = BOX_COLORS[shape.style];
      ctx.lineWidth = shape.style === "normal" ? 1.5 : 2.5;
      ctx.strokeStyle = colors.stroke;
      ctx.fillStyle = colors.fill;
      tracePolygon(ctx, shape.corners);
      ctx.fill();
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(shape.arrow.from.x, shape.arrow.from.y);
      ctx.lineTo(shape.arrow.to.x, shape.arrow.to.y);
      ctx.stroke();
      ctx.fillStyle = "#1a202c";
      ctx.font = "12px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(shape.label, shape.labelAt.x, shape.labelAt.y - 4);
    }
  }
}

function tracePolygon(ctx: CanvasRenderingContext2D, corners: Point[]): void {
  ctx.beginPath();
  ctx.moveTo(corners[0].x, corners[0].y);
  for (let i = 1; i < corners.length; i++) {
    ctx.lineTo(corners[i].x, corners[i].y);
  }
  ctx.closePath();
}
