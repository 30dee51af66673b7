// Typed client for the matching service HTTP API. Every method returns the
// parsed wire document; non-2xx responses become ApiError with the service's
// {"error": message} body when present.

export type ColumnKind = "numeric" | "date" | "text";

export interface ProjectDocument {
  project: string;
  name: string;
  headers: (string | null)[];
  kinds: ColumnKind[];
  rows: string[][];
}

export interface ProjectSummary {
  project: string;
  name: string;
  headers: (string | null)[];
  rows: number;
}

export type MatcherScore = number | "skipped";

export type DecisionStatus = "pending" | "accepted" | "rejected" | "edited";

export interface PairView {
  source: number;
  target: number;
  scores: Record<string, MatcherScore> | null;
  combined: number | null;
  status: DecisionStatus;
  added: boolean;
  edited_target?: number;
}

export interface SessionConfig {
  matchers: string[];
  threshold: number;
  k: number;
  provider: string | null;
}

export interface DecisionEntry {
  pair: [number, number];
  decision: "accept" | "reject" | "edit" | "reset";
  target?: number;
}

export interface SessionView {
  session: string;
  source: string;
  target: string;
  config: SessionConfig;
  pairs: PairView[];
  mapping: [number, number][];
  decisions: DecisionEntry[];
  merged_project: string | null;
}

export interface AggregatePoint {
  key: string;
  value: number;
}

export interface AggregateSeries {
  series: AggregatePoint[];
}

export type AggFn = "sum" | "avg" | "count" | "min" | "max";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

// fetch is injectable so tests can substitute a canned transport
export type Transport = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly transport: Transport;

  constructor(base = "", transport: Transport = fetch.bind(globalThis)) {
    this.base = base.replace(/\/$/, "");
    this.transport = transport;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.transport(this.base + path, init);
    if (!response.ok) {
      let message = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { error?: string };
        if (typeof body.error === "string") message = body.error;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }

  listProjects(): Promise<{ projects: ProjectSummary[] }> {
    return this.request("/projects");
  }

  getProject(id: string): Promise<ProjectDocument> {
    return this.request(`/projects/${id}`);
  }

  uploadProject(name: string, csv: string | Blob): Promise<ProjectDocument> {
    const query = new URLSearchParams({ name });
    return this.request(`/projects?${query}`, {
      method: "POST",
      headers: { "Content-Type": "text/csv" },
      body: csv,
    });
  }

  aggregate(
    project: string,
    x: number,
    y: number,
    fn: AggFn,
  ): Promise<AggregateSeries> {
    const query = new URLSearchParams({
      x: String(x),
      y: String(y),
      fn,
    });
    return this.request(`/projects/${project}/aggregate?${query}`);
  }

  createSession(
    source: string,
    target: string,
    config?: Partial<SessionConfig>,
  ): Promise<SessionView> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ source, target, config }),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}`);
  }

  postDecision(id: string, entry: DecisionEntry): Promise<SessionView> {
    return this.request(`/sessions/${id}/decisions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(entry),
    });
  }

  merge(
    id: string,
    includeUnmatched = true,
  ): Promise<{ project: string }> {
    return this.request(`/sessions/${id}/merge`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ include_unmatched: includeUnmatched }),
    });
  }
}
