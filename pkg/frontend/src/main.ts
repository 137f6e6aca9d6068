/** DOM wiring for the designer: form, canvas interactions, exports. */

import { ApiClient } from "./api";
import { Viewport, hitTest, snapAngle } from "./geometry";
import { buildScene, paint } from "./render";
import { DesignSession } from "./session";
import type { RoomDoc } from "./types";

const API_BASE = (window as { ROOMWEAVER_API?: string }).ROOMWEAVER_API ?? "";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function currentRoom(): RoomDoc {
  return {
    type: el<HTMLSelectElement>("room-type").value,
    length: Number(el<HTMLInputElement>("room-length").value),
    width: Number(el<HTMLInputElement>("room-width").value),
  };
}

function download(filename: string, text: string): void {
  const blob = new Blob([text], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("layout-canvas");
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("canvas 2d context unavailable");
  }

  const api = new ApiClient(API_BASE);
  const session = new DesignSession(api, currentRoom());
  let selected = -1;
  let showGrid = true;
  let dragging = false;

  const redraw = () => {
    const shapes = buildScene(session.currentLayout, session.violations, {
      canvasWidth: canvas.width,
      canvasHeight: canvas.height,
      showGrid,
      selected: selected >= 0 ? selected : undefined,
    });
    paint(ctx, shapes);

    el("status-line").textContent = session.pending
      ? "generating…"
      : session.lastError
        ? `error: ${session.lastError}`
        : `${session.currentLayout.boxes.length} objects`;
    el("violations").innerHTML = session.violations
      .map((v) => `<li class="${v.kind}">box ${v.box_index}: ${v.detail}</li>`)
      .join("");
    el("sentences").innerHTML = session.sentences
      .map((s) => `<li>${s}</li>`)
      .join("");
    el("history").innerHTML = session.turns
      .map((t) => `<li>#${t.turnId}: ${t.prompt.slice(0, 80)}</li>`)
      .join("");
    el<HTMLButtonElement>("submit-prompt").disabled = session.pending;
    el<HTMLButtonElement>("cancel-prompt").hidden = !session.pending;
  };
  session.onChange(redraw);

  el<HTMLFormElement>("prompt-form").addEventListener("submit", (event) => {
    event.preventDefault();
    session.setRoom(currentRoom());
    void session.submitPrompt(el<HTMLTextAreaElement>("prompt-text").value.trim());
  });
  el("cancel-prompt").addEventListener("click", () => {
    session.cancelPending();
    redraw();
  });
  el<HTMLInputElement>("grid-toggle").addEventListener("change", (event) => {
    showGrid = (event.target as HTMLInputElement).checked;
    redraw();
  });

  const viewport = () =>
    new Viewport(session.currentLayout.room, canvas.width, canvas.height);

  canvas.addEventListener("mousedown", (event) => {
    const world = viewport().toWorld({ x: event.offsetX, y: event.offsetY });
    selected = hitTest(session.currentLayout.boxes, world);
    dragging = selected >= 0;
    redraw();
  });
  canvas.addEventListener("mousemove", (event) => {
    if (!dragging || selected < 0) {
      return;
    }
    const world = viewport().toWorld({ x: event.offsetX, y: event.offsetY });
    const box = session.currentLayout.boxes[selected];
    // local preview while dragging; the service re-validates on mouseup
    box.center = [world.x, world.y, box.center[2]];
    redraw();
  });
  canvas.addEventListener("mouseup", () => {
    if (dragging && selected >= 0) {
      const box = session.currentLayout.boxes[selected];
      void session.editBox(selected, { center: box.center });
    }
    dragging = false;
  });
  el("rotate-box").addEventListener("click", () => {
    if (selected < 0) {
      return;
    }
    const box = session.currentLayout.boxes[selected];
    const snap = el<HTMLInputElement>("snap-toggle").checked;
    const next = snap ? snapAngle(box.orientation + 90) : (box.orientation + 15) % 360;
    void session.editBox(selected, { orientation: next });
  });

  el("export-layout").addEventListener("click", () => {
    download("layout.json", session.exportLayout());
  });
  el("export-scene").addEventListener("click", () => {
    void session
      .exportScene()
      .then((text) => download("scene.json", text))
      .catch((err) => {
        session.lastError = err instanceof Error ? err.message : String(err);
        redraw();
      });
  });

  redraw();
}

document.addEventListener("DOMContentLoaded", main);
