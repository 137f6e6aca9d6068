/** Design session state: prompt turns, the current layout, edits, exports.
 *
 * The session never computes violations itself; after every generate or
 * edit it asks /v1/validate and stores the answer verbatim. Only one
 * generate request is in flight at a time, and a response that arrives
 * after a newer submit is discarded by turn id.
 */

import { ApiClient } from "./api";
import { canonicalLayoutJson } from "./canonical";
import type {
  BoxDoc,
  DesignTurn,
  GenerateDiagnostics,
  LayoutDoc,
  RoomDoc,
  Violation,
} from "./types";

export interface BoxEdit {
  center?: [number, number, number];
  size?: [number, number, number];
  orientation?: number;
}

export type SessionListener = (session: DesignSession) => void;

export class DesignSession {
  room: RoomDoc;
  currentLayout: LayoutDoc;
  violations: Violation[] = [];
  sentences: string[] = [];
  lastDiagnostics: GenerateDiagnostics | null = null;
  lastError: string | null = null;
  pending = false;

  private readonly history: DesignTurn[] = [];
  private readonly api: ApiClient;
  private nextTurnId = 1;
  private inFlight: AbortController | null = null;
  private listener: SessionListener | null = null;

  constructor(api: ApiClient, room: RoomDoc) {
    this.api = api;
    this.room = room;
    this.currentLayout = emptyLayout(room);
  }

  onChange(listener: SessionListener): void {
    this.listener = listener;
  }

  private notify(): void {
    this.listener?.(this);
  }

  get turns(): readonly DesignTurn[] {
    return this.history;
  }

  setRoom(room: RoomDoc): void {
    this.room = room;
    if (this.currentLayout.boxes.length === 0) {
      this.currentLayout = emptyLayout(room);
    }
    this.notify();
  }

  /** Send a prompt through /v1/generate and append the turn on success. */
  async submitPrompt(text: string): Promise<void> {
    this.cancelPending();
    const controller = new AbortController();
    this.inFlight = controller;
    const turnId = this.nextTurnId++;
    this.pending = true;
    this.lastError = null;
    this.notify();
    try {
      const result = await this.api.generate(
        {
          room_type: this.room.type,
          length: this.room.length,
          width: this.room.width,
          description: text,
        },
        controller.signal,
      );
      if (turnId < this.nextTurnId - 1) {
        return; // a newer submit superseded this response
      }
      this.currentLayout = result.layout;
      this.lastDiagnostics = result.diagnostics;
      this.history.push({ turnId, prompt: text, layout: result.layout });
      await this.refreshFromService();
    } catch (err) {
      if (!controller.signal.aborted) {
        this.lastError = err instanceof Error ? err.message : String(err);
      }
    } finally {
      if (this.inFlight === controller) {
        this.inFlight = null;
      }
      this.pending = false;
      this.notify();
    }
  }

  cancelPending(): void {
    if (this.inFlight) {
      this.inFlight.abort();
      this.inFlight = null;
      this.pending = false;
    }
  }

  /** Apply a manual edit, then re-validate and re-describe via the service. */
  async editBox(index: number, edit: BoxEdit): Promise<void> {
    const boxes = this.currentLayout.boxes.map((box, i) =>
      i === index ? applyEdit(box, edit) : box,
    );
    this.currentLayout = { ...this.currentLayout, boxes };
    this.lastError = null;
    try {
      await this.refreshFromService();
    } catch (err) {
      // keep the edit; showing the failure is the UI's job
      this.lastError = err instanceof Error ? err.message : String(err);
    }
    this.notify();
  }

  /** Re-fetch violations and sentences for the current layout. */
  async refreshFromService(): Promise<void> {
    if (this.currentLayout.boxes.length === 0) {
      this.violations = [];
      this.sentences = [];
      return;
    }
    const [validation, description] = await Promise.all([
      this.api.validate(this.currentLayout),
      this.api.describe(this.currentLayout),
    ]);
    this.violations = validation.violations;
    this.sentences = description.sentences;
  }

  /** Interchange-file bytes of the current layout, as the engine writes them. */
  exportLayout(): string {
    return canonicalLayoutJson(this.currentLayout);
  }

  async exportScene(cameraCount = 8): Promise<string> {
    const result = await this.api.assemble(this.currentLayout, cameraCount);
    return canonicalLayoutJson(result.scene);
  }
}

function emptyLayout(room: RoomDoc): LayoutDoc {
  return { schema: "roomweaver/1", room, boxes: [] };
}

function applyEdit(box: BoxDoc, edit: BoxEdit): BoxDoc {
  return {
    ...box,
    center: edit.center ?? box.center,
    size: edit.size ?? box.size,
    orientation: edit.orientation ?? box.orientation,
  };
}
