/** Wire types mirroring the roomweaver /v1 API and interchange schema. */

export interface RoomDoc {
  type: string;
  length: number;
  width: number;
  height?: number;
}

export interface BoxDoc {
  category: string;
  center: [number, number, number];
  size: [number, number, number];
  orientation: number;
}

export interface LayoutDoc {
  schema: "roomweaver/1";
  room: RoomDoc;
  boxes: BoxDoc[];
  scene_id?: string;
  floor_plan?: string;
}

export interface Violation {
  box_index: number;
  kind: "oob" | "overlap";
  detail: string;
  partner?: number;
}

export interface ValidateResult {
  oob: boolean;
  overlap: boolean;
  violations: Violation[];
}

export interface GenerateDiagnostics {
  attempts: number;
  violations: Violation[];
}

export interface GenerateResult {
  layout: LayoutDoc;
  diagnostics: GenerateDiagnostics;
}

export interface DescribeResult {
  sentences: string[];
  source: "rule_based" | "paraphrased";
}

export interface AssembleResult {
  scene: unknown;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export type Envelope<T> =
  | { ok: true; data: T }
  | { ok: false; error: ApiErrorBody };

/** One prompt/layout exchange kept in the session history. */
export interface DesignTurn {
  turnId: number;
  prompt: string;
  layout: LayoutDoc;
}
