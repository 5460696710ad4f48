// Typed client for the tracelens read-only HTTP API. The UI never derives
// metrics itself; everything rendered comes out of these payloads.

export interface FileSpan {
  path: string;
  offset: number;
  line_count: number;
}

export interface TrackPoint {
  event_id: number;
  timestamp_ms: number;
  type: string;
  category: string;
  file: string | null;
  global_pos: number | null;
  visible_span: [number, number] | null;
  marker: boolean;
}

export interface TrackPayload {
  lod: number;
  point_count: number;
  files: FileSpan[];
  points: TrackPoint[];
}

export interface StreamEvent {
  id: number;
  timestamp_ms: number;
  type: string;
  payload: Record<string, unknown>;
  context: Record<string, unknown>;
}

export interface Phase {
  label: string;
  start_event_id: number;
  end_event_id: number;
  start_ms: number;
  end_ms: number;
}

export interface PatternMatch {
  kind: string;
  start_event_id: number;
  end_event_id: number;
  evidence: number[];
  flags: string[];
  region: unknown;
}

export interface TrajectorySample {
  event_id: number;
  timestamp_ms: number;
  score: number;
  distinct_files: number;
}

export interface Trajectory {
  final_score: number;
  distinct_files: number;
  samples: TrajectorySample[];
  triggers: Array<Record<string, unknown>>;
}

export interface RecordingSummary {
  recording_id: string;
  event_count: number;
  duration_ms: number;
  distinct_files: number;
  session_count: number;
  final_score: number;
  pattern_counts: Record<string, number>;
  phase_durations_ms: Record<string, number>;
  [extra: string]: unknown;
}

export interface Report {
  recording_id: string;
  config_digest: string;
  summary: RecordingSummary;
  lod_point_counts: number[];
  [extra: string]: unknown;
}

export interface AlignedComparison {
  shared_manifest: boolean;
  trajectories: Record<string, Trajectory>;
}

export interface Comparison {
  recordings: string[];
  summaries: Record<string, RecordingSummary>;
  rankings: Record<string, Array<{ rank: number; recording_id: string; value: number }>>;
  aligned: AlignedComparison | null;
  warnings: string[];
}

export class ApiError extends Error {
  constructor(public readonly code: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

/**
 * Fetch wrapper with in-flight deduplication: concurrent requests for the
 * same URL share one network call, so zoom chatter never stacks fetches.
 */
export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(private readonly base: string = '') {}

  listRecordings(): Promise<RecordingSummary[]> {
    return this.get('/recordings');
  }

  report(id: string): Promise<Report> {
    return this.get(`/recordings/${encodeURIComponent(id)}`);
  }

  events(id: string, offset = 0, limit = 500, filter?: string): Promise<StreamEvent[]> {
    const params = new URLSearchParams({ offset: String(offset), limit: String(limit) });
    if (filter) params.set('filter', filter);
    return this.get(`/recordings/${encodeURIComponent(id)}/events?${params}`);
  }

  track(id: string, lod: number, filter?: string): Promise<TrackPayload> {
    const params = new URLSearchParams({ lod: String(lod) });
    if (filter) params.set('filter', filter);
    return this.get(`/recordings/${encodeURIComponent(id)}/track?${params}`);
  }

  phases(id: string): Promise<Phase[]> {
    return this.get(`/recordings/${encodeURIComponent(id)}/phases`);
  }

  patterns(id: string): Promise<PatternMatch[]> {
    return this.get(`/recordings/${encodeURIComponent(id)}/patterns`);
  }

  trajectory(id: string): Promise<Trajectory> {
    return this.get(`/recordings/${encodeURIComponent(id)}/trajectory`);
  }

  compare(ids: string[]): Promise<Comparison> {
    return this.get(`/compare?ids=${ids.map(encodeURIComponent).join(',')}`);
  }

  private get<T>(path: string): Promise<T> {
    const url = this.base + path;
    const pending = this.inflight.get(url);
    if (pending) return pending as Promise<T>;
    const request = this.fetchJson<T>(url).finally(() => {
      this.inflight.delete(url);
    });
    this.inflight.set(url, request);
    return request;
  }

  private async fetchJson<T>(url: string): Promise<T> {
    const response = await fetch(url);
    if (!response.ok) {
      let message = response.statusText;
      try {
        const body = (await response.json()) as { message?: string };
        if (body && typeof body.message === 'string') message = body.message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }
}
