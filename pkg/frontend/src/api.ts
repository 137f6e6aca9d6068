/** Minimal fetch client for the roomweaver /v1 endpoints. */

import type {
  AssembleResult,
  DescribeResult,
  Envelope,
  GenerateResult,
  LayoutDoc,
  ValidateResult,
} from "./types";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, code: string, message: string, detail?: unknown) {
    super(message);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export interface GenerateRequest {
  room_type: string;
  length: number;
  width: number;
  description: string;
  k?: number;
  strategy?: string;
  seed?: number;
  repair_attempts?: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl: FetchLike = fetch.bind(globalThis)) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(
    path: string,
    init?: RequestInit,
  ): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = (await resp.json()) as Envelope<T>;
    if (!body.ok) {
      throw new ApiError(resp.status, body.error.code, body.error.message, body.error.detail);
    }
    return body.data;
  }

  private post<T>(path: string, payload: unknown, signal?: AbortSignal): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
  }

  health(): Promise<{ status: string; exemplars: number }> {
    return this.request("/v1/health");
  }

  generate(req: GenerateRequest, signal?: AbortSignal): Promise<GenerateResult> {
    return this.post("/v1/generate", req, signal);
  }

  validate(layout: LayoutDoc, tol = 0.01): Promise<ValidateResult> {
    return this.post("/v1/validate", { layout, tol });
  }

  describe(layout: LayoutDoc): Promise<DescribeResult> {
    return this.post("/v1/describe", { layout });
  }

  assemble(layout: LayoutDoc, cameraCount = 8): Promise<AssembleResult> {
    return this.post("/v1/assemble", { layout, camera_count: cameraCount });
  }
}
