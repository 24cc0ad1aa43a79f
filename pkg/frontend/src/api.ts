import type {
  AgreementReport,
  LabelTaskView,
  RelevanceLabel,
  ThemeEntry,
} from './types.js';

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the annotation HTTP API. The server log is the
 * single source of truth; this client never caches labels. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, null);
    }
    return response;
  }

  private async requireOk(response: Response, expected: number): Promise<Response> {
    if (response.status !== expected) {
      let detail = '';
      try {
        const body = (await response.json()) as { detail?: string; error?: string };
        detail = body.detail ?? body.error ?? '';
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(detail || `unexpected status ${response.status}`, response.status);
    }
    return response;
  }

  async createSession(
    mode: 'Pair' | 'Solo',
    annotators: string[],
    recordIds: string[],
  ): Promise<string> {
    const response = await this.request('/api/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ mode, annotators, record_ids: recordIds }),
    });
    await this.requireOk(response, 201);
    const body = (await response.json()) as { session_id: string };
    return body.session_id;
  }

  /** Next unlabeled task for this annotator, or null when the queue is done. */
  async nextTask(sessionId: string, annotator: string): Promise<LabelTaskView | null> {
    const response = await this.request(
      `/api/sessions/${encodeURIComponent(sessionId)}/next?annotator=${encodeURIComponent(annotator)}`,
    );
    if (response.status === 204) {
      return null;
    }
    await this.requireOk(response, 200);
    return (await response.json()) as LabelTaskView;
  }

  async submitLabel(
    sessionId: string,
    recordId: string,
    annotator: string,
    label: RelevanceLabel,
  ): Promise<void> {
    const response = await this.request(
      `/api/sessions/${encodeURIComponent(sessionId)}/labels`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ record_id: recordId, annotator, label }),
      },
    );
    await this.requireOk(response, 201);
  }

  async agreement(sessionId: string): Promise<AgreementReport> {
    const response = await this.request(
      `/api/sessions/${encodeURIComponent(sessionId)}/agreement`,
    );
    await this.requireOk(response, 200);
    return (await response.json()) as AgreementReport;
  }

  async submitResolution(
    sessionId: string,
    recordId: string,
    label: RelevanceLabel,
  ): Promise<void> {
    const response = await this.request(
      `/api/sessions/${encodeURIComponent(sessionId)}/resolutions`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ record_id: recordId, label }),
      },
    );
    await this.requireOk(response, 201);
  }

  async listThemes(): Promise<ThemeEntry[]> {
    const response = await this.request('/api/themes');
    await this.requireOk(response, 200);
    const body = (await response.json()) as { themes: ThemeEntry[] };
    return body.themes;
  }

  async nameTheme(clusterKey: string, name: string): Promise<void> {
    const response = await this.request(
      `/api/themes/${encodeURIComponent(clusterKey)}/name`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ name }),
      },
    );
    await this.requireOk(response, 201);
  }
}
