/**
 * Typed client for the annotation service HTTP API.
 *
 * The client does no linguistic processing. Every rendered field comes
 * verbatim from the service, which stays the single source of truth for
 * distances, queue order, and label validation.
 */

export type Label = "yes" | "inflected" | "no";

export const LABELS: readonly Label[] = ["yes", "inflected", "no"];

export interface TaskView {
  pair_id: string;
  lemma: string;
  pos_max: string;
  lemma_freq: number;
  term: string;
  distance: number;
  contexts: string[];
  annotator_id?: string;
  served_at?: string;
}

export interface NextTask {
  task: TaskView | null;
  remaining: number;
}

export interface LabelAck {
  ok: boolean;
  pair_id: string;
  annotator: string;
  label: Label;
  labeled: number;
}

export interface SkipAck {
  ok: boolean;
  pair_id: string;
  annotator: string;
}

export interface AnnotatorProgress {
  labeled: number;
  by_label: Record<Label, number>;
}

export interface Progress {
  total_pairs: number;
  total_labels: number;
  annotators: Record<string, AnnotatorProgress>;
  fully_labeled: number;
}

export interface Agreement {
  kappa: number | null;
  n_items: number;
  n_annotators: number;
}

export interface PairDetail {
  task: TaskView;
  labels: Record<string, Label>;
  adjudicated: string;
}

/** Non-2xx response. Status 0 means the request never reached the service. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  nextTask(annotator: string): Promise<NextTask> {
    const query = encodeURIComponent(annotator);
    return this.request<NextTask>(`/api/tasks/next?annotator=${query}`);
  }

  submitLabel(pairId: string, annotator: string, label: Label): Promise<LabelAck> {
    const path = `/api/tasks/${encodeURIComponent(pairId)}/label`;
    return this.request<LabelAck>(path, { annotator, label });
  }

  skipTask(pairId: string, annotator: string): Promise<SkipAck> {
    const path = `/api/tasks/${encodeURIComponent(pairId)}/skip`;
    return this.request<SkipAck>(path, { annotator });
  }

  progress(): Promise<Progress> {
    return this.request<Progress>("/api/progress");
  }

  agreement(): Promise<Agreement> {
    return this.request<Agreement>("/api/agreement");
  }

  pairDetail(pairId: string): Promise<PairDetail> {
    return this.request<PairDetail>(`/api/pairs/${encodeURIComponent(pairId)}`);
  }

  private async request<T>(path: string, body?: unknown): Promise<T> {
    const init: RequestInit | undefined =
      body === undefined
        ? undefined
        : {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
          };
    let res: Response;
    try {
      res = await this.fetchFn(this.base + path, init);
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      throw new ApiError(0, message);
    }
    const text = await res.text();
    let data: unknown = null;
    if (text) {
      try {
        data = JSON.parse(text);
      } catch {
        data = null;
      }
    }
    if (!res.ok) {
      const detail = (data as { detail?: unknown } | null)?.detail;
      const message =
        typeof detail === "string" ? detail : `HTTP ${res.status}`;
      throw new ApiError(res.status, message);
    }
    return data as T;
  }
}
