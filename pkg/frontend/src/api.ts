/** Typed client for the embedding session service. All paths are relative,
 * so the page works wherever the service mounts it. */

export interface SessionState {
  id?: string;
  ids: string[];
  coords: number[][];
  revision: number;
  status: string;
  tripletCount: number;
  labels?: number[];
  error?: string;
}

export interface SelectionResponse {
  added: number;
  tripletCount: number;
}

export interface ReembedResponse {
  status: string;
  revision: number;
}

export interface ExportPayload {
  triplets_csv: string;
  embedding_csv: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }

  /** 409: a re-embed is running; retry when the session goes idle. */
  get busy(): boolean {
    return this.status === 409;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(path, init);
  if (!res.ok) {
    let message = `request failed (${res.status})`;
    try {
      const body = await res.json();
      if (body && typeof body.error === 'string') message = body.error;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(res.status, message);
  }
  return res.json() as Promise<T>;
}

function post<T>(path: string, body: unknown): Promise<T> {
  return request<T>(path, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
}

export const api = {
  createSession(config: Record<string, unknown> = {}, dataset = 'default'): Promise<SessionState> {
    return post<SessionState>('/sessions', { dataset, config });
  },

  getState(sid: string): Promise<SessionState> {
    return request<SessionState>(`/sessions/${sid}`);
  },

  submitSelection(sid: string, ref: string, selected: string[], shown: string[]): Promise<SelectionResponse> {
    return post<SelectionResponse>(`/sessions/${sid}/selections`, { ref, selected, shown });
  },

  reembed(sid: string, config: Record<string, unknown> = {}): Promise<ReembedResponse> {
    return post<ReembedResponse>(`/sessions/${sid}/reembed`, { config });
  },

  exportSession(sid: string): Promise<ExportPayload> {
    return request<ExportPayload>(`/sessions/${sid}/export`);
  },
};

/**
 * Poll get_state until the session leaves "embedding", reporting every
 * state seen. Resolves with the first non-embedding state.
 */
export function pollWhileEmbedding(
  sid: string,
  onState: (s: SessionState) => void,
  intervalMs = 1000,
): Promise<SessionState> {
  return new Promise((resolve, reject) => {
    let timer: ReturnType<typeof setInterval> | undefined;
    const tick = async () => {
      let s: SessionState;
      try {
        s = await api.getState(sid);
      } catch (err) {
        if (timer !== undefined) clearInterval(timer);
        reject(err);
        return;
      }
      onState(s);
      if (s.status !== 'embedding') {
        if (timer !== undefined) clearInterval(timer);
        resolve(s);
      }
    };
    timer = setInterval(tick, intervalMs);
    void tick();
  });
}
