/** Display-side geometry: world-to-canvas mapping and footprint math.
 *
 * This is presentation math only (drawing, hit-testing, drag deltas). The
 * violations shown to the user always come from the service's /v1/validate,
 * never from anything computed here.
 */

import type { BoxDoc, RoomDoc } from "./types";

export interface Point {
  x: number;
  y: number;
}

/** Maps room coordinates (meters, +y away from the viewer) onto the canvas. */
export class Viewport {
  readonly scale: number;
  readonly offsetX: number;
  readonly offsetY: number;

  constructor(
    room: RoomDoc,
    readonly canvasWidth: number,
    readonly canvasHeight: number,
    margin = 24,
  ) {
    const sx = (canvasWidth - 2 * margin) / room.length;
    const sy = (canvasHeight - 2 * margin) / room.width;
    this.scale = Math.min(sx, sy);
    this.offsetX = (canvasWidth - room.length * this.scale) / 2;
    this.offsetY = (canvasHeight - room.width * this.scale) / 2;
    this.roomWidth = room.width;
  }

  private readonly roomWidth: number;

  /** World (meters) to canvas pixels; +y in the room renders upward. */
  toCanvas(p: Point): Point {
    return {
      x: this.offsetX + p.x * this.scale,
      y: this.offsetY + (this.roomWidth - p.y) * this.scale,
    };
  }

  toWorld(p: Point): Point {
    return {
      x: (p.x - this.offsetX) / this.scale,
      y: this.roomWidth - (p.y - this.offsetY) / this.scale,
    };
  }
}

/** Footprint corners (world meters, counter-clockwise). */
export function footprintCorners(box: BoxDoc): Point[] {
  const [cx, cy] = box.center;
  const hw = box.size[0] / 2;
  const hd = box.size[2] / 2;
  const a = (box.orientation * Math.PI) / 180;
  const cos = Math.cos(a);
  const sin = Math.sin(a);
  const local: Array<[number, number]> = [
    [-hw, -hd],
    [hw, -hd],
    [hw, hd],
    [-hw, hd],
  ];
  return local.map(([u, v]) => ({
    x: cx + u * cos - v * sin,
    y: cy + u * sin + v * cos,
  }));
}

/** Arrow from the box center along its local +y axis (the facing direction). */
export function orientationArrow(box: BoxDoc): { from: Point; to: Point } {
  const [cx, cy] = box.center;
  const a = (box.orientation * Math.PI) / 180;
  const len = Math.max(box.size[0], box.size[2]) * 0.45;
  return {
    from: { x: cx, y: cy },
    to: { x: cx - len * Math.sin(a), y: cy + len * Math.cos(a) },
  };
}

export function pointInFootprint(box: BoxDoc, p: Point): boolean {
  const corners = footprintCorners(box);
  for (let i = 0; i < corners.length; i++) {
    const a = corners[i];
    const b = corners[(i + 1) % corners.length];
    const cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < 0) {
      return false;
    }
  }
  return true;
}

/** Topmost box under the cursor, or -1. Later boxes draw on top. */
export function hitTest(boxes: BoxDoc[], p: Point): number {
  for (let i = boxes.length - 1; i >= 0; i--) {
    if (pointInFootprint(boxes[i], p)) {
      return i;
    }
  }
  return -1;
}

export function snapAngle(deg: number, step = 90): number {
  const snapped = Math.round(deg / step) * step;
  return ((snapped % 360) + 360) % 360;
}
