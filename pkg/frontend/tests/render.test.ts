import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { canonicalLayoutJson } from "../src/canonical";
import { Viewport, footprintCorners, hitTest, snapAngle } from "../src/geometry";
import { buildScene } from "../src/render";
import type { BoxShape } from "../src/render";
import type { LayoutDoc, Violation } from "../src/types";

const FIXTURES = new URL("../../tests/fixtures/", import.meta.url);

function fixtureLayout(): LayoutDoc {
  const raw = readFileSync(new URL("layout5.json", FIXTURES), "utf-8");
  return JSON.parse(raw) as LayoutDoc;
}

const OPTS = { canvasWidth: 720, canvasHeight: 720, showGrid: true };

describe("buildScene", () => {
  it("renders one box shape per layout box", () => {
    const layout = fixtureLayout();
    const shapes = buildScene(layout, [], OPTS);
    const boxes = shapes.filter((s) => s.kind === "box");
    expect(boxes).toHaveLength(layout.boxes.length);
  });

  it("is a pure function of its inputs", () => {
    const layout = fixtureLayout();
    const violations: Violation[] = [
      { box_index: 0, kind: "oob", detail: "out" },
    ];
    const a = buildScene(layout, violations, OPTS);
    const b = buildScene(layout, violations, OPTS);
    expect(a).toEqual(b);
  });

  it("styles OOB and overlapping boxes from the violation list", () => {
    const layout = fixtureLayout();
    const violations: Violation[] = [
      { box_index: 0, kind: "oob", detail: "out" },
      { box_index: 1, kind: "overlap", detail: "overlaps", partner: 2 },
    ];
    const boxes = buildScene(layout, violations, OPTS).filter(
      (s): s is BoxShape => s.kind === "box",
    );
    expect(boxes[0].style).toBe("oob");
    expect(boxes[1].style).toBe("overlap");
    expect(boxes[2].style).toBe("overlap"); // partner side of the pair
    expect(boxes[3].style).toBe("normal");
  });

  it("selection style wins over violation styles", () => {
    const layout = fixtureLayout();
    const violations: Violation[] = [{ box_index: 0, kind: "oob", detail: "out" }];
    const boxes = buildScene(layout, violations, { ...OPTS, selected: 0 }).filter(
      (s): s is BoxShape => s.kind === "box",
    );
    expect(boxes[0].style).toBe("selected");
  });

  it("grid overlay toggles", () => {
    const layout = fixtureLayout();
    expect(buildScene(layout, [], OPTS).some((s) => s.kind === "grid")).toBe(true);
    expect(
      buildScene(layout, [], { ...OPTS, showGrid: false }).some((s) => s.kind === "grid"),
    ).toBe(false);
  });

  it("places a top-left box in the upper-left ninth of the canvas", () => {
    const layout: LayoutDoc = {
      schema: "roomweaver/1",
      room: { type: "bedroom", length: 6, width: 6 },
      boxes: [
        { category: "wardrobe", center: [0.8, 5.2, 1.1], size: [0.6, 2.2, 0.8], orientation: 0 },
      ],
    };
    const boxes = buildScene(layout, [], OPTS).filter((s): s is BoxShape => s.kind === "box");
    expect(boxes[0].labelAt.x).toBeLessThan(720 / 3);
    expect(boxes[0].labelAt.y).toBeLessThan(720 / 3);
  });

  it("rotating a box 90 degrees turns its arrow perpendicular", () => {
    const base: LayoutDoc = {
      schema: "roomweaver/1",
      room: { type: "bedroom", length: 6, width: 6 },
      boxes: [{ category: "desk", center: [3, 3, 0.4], size: [1.2, 0.8, 0.6], orientation: 0 }],
    };
    const rotated: LayoutDoc = {
      ...base,
      boxes: [{ ...base.boxes[0], orientation: 90 }],
    };
    const arrowOf = (layout: LayoutDoc) => {
      const box = buildScene(layout, [], OPTS).find((s): s is BoxShape => s.kind === "box")!;
      return {
        dx: box.arrow.to.x - box.arrow.from.x,
        dy: box.arrow.to.y - box.arrow.from.y,
      };
    };
    const a = arrowOf(base);
    const b = arrowOf(rotated);
    expect(a.dx * b.dx + a.dy * b.dy).toBeCloseTo(0, 6);
  });
});

describe("viewport", () => {
  it("round-trips world and canvas coordinates", () => {
    const view = new Viewport({ type: "bedroom", length: 5, width: 4 }, 720, 720);
    const p = { x: 1.23, y: 3.21 };
    const back = view.toWorld(view.toCanvas(p));
    expect(back.x).toBeCloseTo(p.x, 9);
    expect(back.y).toBeCloseTo(p.y, 9);
  });

  it("renders +y upward", () => {
    const view = new Viewport({ type: "bedroom", length: 4, width: 4 }, 720, 720);
    const low = view.toCanvas({ x: 2, y: 0.5 });
    const high = view.toCanvas({ x: 2, y: 3.5 });
    expect(high.y).toBeLessThan(low.y);
  });
});

describe("hit testing", () => {
  const box = { category: "desk", center: [3, 3, 0.4], size: [1.2, 0.8, 0.6], orientation: 45 } as const;

  it("hits the rotated footprint, not its bounding box", () => {
    const boxes = [box as unknown as LayoutDoc["boxes"][number]];
    expect(hitTest(boxes, { x: 3, y: 3 })).toBe(0);
    // bounding-box corner that the rotated rectangle does not cover
    expect(hitTest(boxes, { x: 3.6, y: 3.28 })).toBe(-1);
  });

  it("footprint corners close a counter-clockwise loop", () => {
    const corners = footprintCorners(box as unknown as LayoutDoc["boxes"][number]);
    let area = 0;
    for (let i = 0; i < 4; i++) {
      const a = corners[i];
      const b = corners[(i + 1) % 4];
      area += a.x * b.y - b.x * a.y;
    }
    expect(area / 2).toBeGreaterThan(0);
    expect(area / 2).toBeCloseTo(1.2 * 0.6, 9);
  });
});

describe("snapAngle", () => {
  it("snaps to the nearest quarter turn", () => {
    expect(snapAngle(89)).toBe(90);
    expect(snapAngle(134)).toBe(90);
    expect(snapAngle(136)).toBe(180);
    expect(snapAngle(359)).toBe(0);
  });
});

describe("canonicalLayoutJson", () => {
  it("reproduces the engine's file bytes for the fixture layout", () => {
    const raw = readFileSync(new URL("layout5.json", FIXTURES), "utf-8");
    expect(canonicalLayoutJson(JSON.parse(raw))).toBe(raw);
  });

  it("reproduces the engine's bytes for every store layout", () => {
    const manifestRaw = readFileSync(new URL("store/manifest.json", FIXTURES), "utf-8");
    const manifest = JSON.parse(manifestRaw) as { exemplars: Array<{ file: string }> };
    for (const entry of manifest.exemplars) {
      const raw = readFileSync(new URL(`store/${entry.file}`, FIXTURES), "utf-8");
      expect(canonicalLayoutJson(JSON.parse(raw))).toBe(raw);
    }
  });
});
