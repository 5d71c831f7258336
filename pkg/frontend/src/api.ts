/**
 * Thin HTTP client for the annotation service.
 *
 * The fetch implementation is injectable so tests run against a fake
 * and alternative runtimes can supply their own. Non-2xx responses
 * become ApiError with the service's error code when the body carries
 * one ("error"/"detail" envelope) and "HTTP_ERROR" otherwise, e.g. for
 * request-model failures that return FastAPI's default detail list.
 */

import type {
  DashboardPayload,
  Phase1SubmissionBody,
  ScoreSubmissionBody,
  SubmissionReceipt,
  TaskView,
  ValiditySubmissionBody,
  WorkerRecord,
  WorkerRegistration,
} from "./types";

interface FetchResponseLike {
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<FetchResponseLike>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, code: string, detail: unknown) {
    super(`${status} ${code}`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

interface RequestOptions {
  worker?: string;
  body?: unknown;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? (globalThis.fetch as unknown as FetchLike);
  }

  private async raw(method: string, path: string, options: RequestOptions = {}): Promise<string> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (options.worker !== undefined) headers.Authorization = `Bearer ${options.worker}`;
    const init: Parameters<FetchLike>[1] = { method, headers };
    if (options.body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(options.body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    if (response.status >= 400) {
      let parsed: unknown = null;
      try {
        parsed = text === "" ? null : JSON.parse(text);
      } catch {
        parsed = text;
      }
      const envelope = parsed as { error?: string; detail?: unknown } | null;
      const code = envelope && typeof envelope.error === "string" ? envelope.error : "HTTP_ERROR";
      const detail = envelope && envelope.detail !== undefined ? envelope.detail : parsed;
      throw new ApiError(response.status, code, detail);
    }
    return text;
  }

  private async request<T>(method: string, path: string, options: RequestOptions = {}): Promise<T> {
    const text = await this.raw(method, path, options);
    return (text === "" ? null : JSON.parse(text)) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  async rubric(): Promise<Record<string, string>> {
    const data = await this.request<{ rubric: Record<string, string> }>("GET", "/rubric");
    return data.rubric;
  }

  registerWorker(registration: WorkerRegistration): Promise<WorkerRecord> {
    return this.request("POST", "/workers", { body: registration });
  }

  getWorker(workerId: string): Promise<WorkerRecord> {
    return this.request("GET", `/workers/${encodeURIComponent(workerId)}`);
  }

  /** Next open task for the worker in the phase, or null when the
   * queue is empty. */
  async nextTask(phase: "phase1" | "phase2", workerId: string): Promise<TaskView | null> {
    const data = await this.request<{ task: TaskView | null }>(
      "GET", `/tasks/next?phase=${encodeURIComponent(phase)}`, { worker: workerId },
    );
    return data.task;
  }

  submitPhase1(taskId: string, body: Phase1SubmissionBody, workerId: string): Promise<SubmissionReceipt> {
    return this.request("POST", `/tasks/${encodeURIComponent(taskId)}/phase1`, { body, worker: workerId });
  }

  submitValidity(taskId: string, body: ValiditySubmissionBody, workerId: string): Promise<SubmissionReceipt> {
    return this.request("POST", `/tasks/${encodeURIComponent(taskId)}/validity`, { body, worker: workerId });
  }

  submitScore(taskId: string, body: ScoreSubmissionBody, workerId: string): Promise<SubmissionReceipt> {
    return this.request("POST", `/tasks/${encodeURIComponent(taskId)}/score`, { body, worker: workerId });
  }

  createSnapshot(): Promise<{ id: string }> {
    return this.request("POST", "/admin/snapshots");
  }

  listSnapshots(): Promise<{ snapshots: Array<{ id: string; created_at: string }> }> {
    return this.request("GET", "/admin/snapshots");
  }

  runFunnel(snapshotId: string): Promise<{ rows: Array<[string, number]> }> {
    return this.request("POST", `/admin/snapshots/${encodeURIComponent(snapshotId)}/funnel`);
  }

  report<T>(snapshotId: string, name: "stats" | "coverage" | "agreement"): Promise<T> {
    return this.request("GET", `/admin/snapshots/${encodeURIComponent(snapshotId)}/reports/${name}`);
  }

  /** CSV export for a snapshot bucket, as raw text. */
  exportCsv(snapshotId: string, bucket = "kept"): Promise<string> {
    return this.raw(
      "GET",
      `/admin/snapshots/${encodeURIComponent(snapshotId)}/export?bucket=${encodeURIComponent(bucket)}`,
    );
  }

  /** Everything the dashboard renders for one snapshot, in the bundle
   * shape buildDashboard consumes. */
  async fetchDashboard(snapshotId: string): Promise<DashboardPayload> {
    const funnel = await this.runFunnel(snapshotId);
    const stats = await this.report<DashboardPayload["stats"]>(snapshotId, "stats");
    const coverage = await this.report<DashboardPayload["coverage"]>(snapshotId, "coverage");
    const agreement = await this.report<DashboardPayload["agreement"]>(snapshotId, "agreement");
    return { snapshot_id: snapshotId, funnel, stats, coverage, agreement };
  }
}
