/** Contract tests against a real replay-mode service.
 *
 * The engine's HTTP service is spawned as a child process with the
 * checked-in fixture store and recorded responses, so these tests need no
 * network and no API key, yet exercise the genuine wire contract the UI
 * depends on.
 */

import { spawn, spawnSync } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { buildScene } from "../src/render";
import type { BoxShape } from "../src/render";
import { DesignSession } from "../src/session";

const REPO_ROOT = fileURLToPath(new URL("../..", import.meta.url));
const FIXTURES = fileURLToPath(new URL("../../tests/fixtures/", import.meta.url));
const PORT = 8942;
const BASE = `http://127.0.0.1:${PORT}`;
const ROOM = { type: "bedroom", length: 3.5, width: 4.2 };

let service: ChildProcess;

async function waitForHealth(timeoutMs = 20_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/v1/health`);
      if (resp.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not become healthy in time");
}

beforeAll(async () => {
  service = spawn(
    "python3",
    [
      "-m", "roomweaver.cli", "serve",
      "--bind", `127.0.0.1:${PORT}`,
      "--store", `${FIXTURES}store`,
      "--mode", "replay",
      "--fixture-dir", `${FIXTURES}replay`,
      "--catalog", `${FIXTURES}catalog.json`,
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  await waitForHealth();
}, 30_000);

afterAll(() => {
  service?.kill();
});

function fixturePrompt(): string {
  return readFileSync(`${FIXTURES}query_description.txt`, "utf-8").trim();
}

describe("designer session against the replay service", () => {
  it("submitting the fixture prompt renders one shape per generated box", async () => {
    const session = new DesignSession(new ApiClient(BASE), ROOM);
    await session.submitPrompt(fixturePrompt());
    expect(session.lastError).toBeNull();
    expect(session.turns).toHaveLength(1);
    const shapes = buildScene(session.currentLayout, session.violations, {
      canvasWidth: 720,
      canvasHeight: 720,
      showGrid: true,
    });
    const boxShapes = shapes.filter((s): s is BoxShape => s.kind === "box");
    expect(session.currentLayout.boxes.length).toBeGreaterThan(0);
    expect(boxShapes).toHaveLength(session.currentLayout.boxes.length);
  });

  it("dragging a box beyond the wall surfaces an OOB highlight from /v1/validate", async () => {
    const session = new DesignSession(new ApiClient(BASE), ROOM);
    await session.submitPrompt(fixturePrompt());
    const before = session.violations.filter((v) => v.box_index === 0);
    expect(before).toHaveLength(0);

    const box = session.currentLayout.boxes[0];
    await session.editBox(0, { center: [-0.6, box.center[1], box.center[2]] });

    const oob = session.violations.find((v) => v.kind === "oob" && v.box_index === 0);
    expect(oob).toBeDefined();
    expect(oob!.detail).toContain("beyond the floor boundary");

    const boxShapes = buildScene(session.currentLayout, session.violations, {
      canvasWidth: 720,
      canvasHeight: 720,
      showGrid: false,
    }).filter((s): s is BoxShape => s.kind === "box");
    expect(boxShapes[0].style).toBe("oob");
  });

  it("the description pane mirrors /v1/describe for manual edits", async () => {
    const session = new DesignSession(new ApiClient(BASE), ROOM);
    await session.submitPrompt(fixturePrompt());
    expect(session.sentences).toHaveLength(session.currentLayout.boxes.length);
    expect(session.sentences[0]).toMatch(/is placed at the .* of the room/);
  });

  it("export bytes equal the engine's serialization of the same layout", async () => {
    const session = new DesignSession(new ApiClient(BASE), ROOM);
    await session.submitPrompt(fixturePrompt());
    const exported = session.exportLayout();

    const python = spawnSync(
      "python3",
      [
        "-c",
        "import sys, json\n"
        + "from roomweaver.interchange import layout_from_dict, dumps_layout\n"
        + "doc = json.load(sys.stdin)\n"
        + "sys.stdout.write(dumps_layout(layout_from_dict(doc)))\n",
      ],
      { cwd: REPO_ROOT, input: JSON.stringify(session.currentLayout), encoding: "utf-8" },
    );
    expect(python.status).toBe(0);
    expect(exported).toBe(python.stdout);
  });

  it("scene export round-trips through /v1/assemble", async () => {
    const session = new DesignSession(new ApiClient(BASE), ROOM);
    await session.submitPrompt(fixturePrompt());
    const scene = await session.exportScene(4);
    const doc = JSON.parse(scene) as { schema: string; instances: unknown[] };
    expect(doc.schema).toBe("roomweaver-scene/1");
    expect(doc.instances).toHaveLength(session.currentLayout.boxes.length);
  });
});
