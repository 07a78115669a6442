import type {
  HeatmapPayload,
  MetaPayload,
  Point,
  ProjectRequest,
  ProjectionPayload,
  SelectionPayload,
  SessionPayload,
  TestPayload,
  TestRequest,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

/**
 * Typed client for the service. Each panel channel keeps at most one request
 * in flight: issuing a new request on the same channel aborts the stale one.
 */
export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    readonly base: string = "",
    private readonly fetchImpl: typeof fetch = fetch
  ) {}

  private async request<T>(channel: string, path: string, init?: RequestInit): Promise<T> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);
    try {
      const response = await this.fetchImpl(this.base + path, {
        ...init,
        signal: controller.signal,
      });
      const body = await response.json();
      if (!response.ok) {
        throw new ApiError(response.status, body?.detail ?? response.statusText);
      }
      return body as T;
    } finally {
      if (this.inflight.get(channel) === controller) {
        this.inflight.delete(channel);
      }
    }
  }

  private post<T>(channel: string, path: string, body: unknown): Promise<T> {
    return this.request<T>(channel, path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("sessions", "/sessions");
  }

  sessionInfo(id: string): Promise<SessionPayload> {
    return this.request("session", `/session/${id}`);
  }

  selectPath(id: string, a: string, b: string): Promise<SelectionPayload> {
    return this.post("select", `/session/${id}/path`, { a, b });
  }

  selectGroups(id: string, polygons: Point[][]): Promise<SelectionPayload> {
    return this.post("select", `/session/${id}/groups`, { polygons });
  }

  project(id: string, req: ProjectRequest): Promise<ProjectionPayload> {
    return this.post("project", `/session/${id}/project`, req);
  }

  runTest(id: string, req: TestRequest): Promise<TestPayload> {
    return this.post("test", `/session/${id}/test`, req);
  }

  heatmap(id: string, rows?: string[], features?: string[]): Promise<HeatmapPayload> {
    const params = new URLSearchParams();
    if (rows?.length) params.set("rows", rows.join(","));
    if (features?.length) params.set("features", features.join(","));
    const query = params.toString();
    return this.request("heatmap", `/session/${id}/heatmap${query ? "?" + query : ""}`);
  }

  meta(id: string): Promise<MetaPayload> {
    return this.request("meta", `/session/${id}/meta`);
  }
}
