import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiError, api, pollWhileEmbedding } from '../src/api.js';
import { constraintMessage } from '../src/state.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
  vi.useRealTimers();
});

describe('api client', () => {
  it('posts dataset and config on create', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse({
      id: 's1', ids: ['a'], coords: [[0, 0]], revision: 1,
      status: 'idle', tripletCount: 0,
    }));
    vi.stubGlobal('fetch', fetchMock);
    const s = await api.createSession({ perplexity: 10 });
    expect(s.id).toBe('s1');
    const [path, init] = fetchMock.mock.calls[0];
    expect(path).toBe('/sessions');
    expect(JSON.parse(init.body)).toEqual({
      dataset: 'default', config: { perplexity: 10 },
    });
  });

  it('raises ApiError carrying the service error body', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(
      jsonResponse({ error: 'unknown session' }, 404)));
    await expect(api.getState('nope')).rejects.toThrowError('unknown session');
    await expect(api.getState('nope')).rejects.toMatchObject({ status: 404, busy: false });
  });

  it('flags 409 as busy', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(
      jsonResponse({ error: 're-embedding in progress' }, 409)));
    const err = await api.reembed('s1').catch((e) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).busy).toBe(true);
  });
});

describe('acceptance: displayed constraint count equals the service response', () => {
  // The client shows whatever number the service returns; it never does
  // the |S| * (|G| - |S|) arithmetic itself. Exercised over the same
  // screen shapes the service suite uses.
  const shapes: Array<[number, number]> = [[4, 12], [2, 5], [5, 5], [1, 2]];

  for (const [nSel, nShown] of shapes) {
    it(`reflects the service count for ${nSel} of ${nShown}`, async () => {
      const serverSide = nSel * (nShown - nSel);
      vi.stubGlobal('fetch', vi.fn(async (path: string, init: RequestInit) => {
        const body = JSON.parse(init.body as string);
        expect(body.selected.length).toBe(nSel);
        expect(body.shown.length).toBe(nShown);
        return jsonResponse({ added: serverSide, tripletCount: serverSide });
      }));
      const shown = Array.from({ length: nShown }, (_, i) => `p${i + 1}`);
      const resp = await api.submitSelection('s1', 'p0', shown.slice(0, nSel), shown);
      const displayed = constraintMessage(resp.added);
      expect(displayed.startsWith(`${serverSide} constraints added`)).toBe(true);
    });
  }
});

describe('pollWhileEmbedding', () => {
  it('reports every state and resolves when embedding ends', async () => {
    vi.useFakeTimers();
    const states = [
      { ids: [], coords: [], revision: 1, status: 'embedding', tripletCount: 32 },
      { ids: [], coords: [], revision: 1, status: 'embedding', tripletCount: 32 },
      { ids: [], coords: [], revision: 2, status: 'idle', tripletCount: 32 },
    ];
    let call = 0;
    vi.stubGlobal('fetch', vi.fn(async () => jsonResponse(states[Math.min(call++, 2)])));

    const seen: number[] = [];
    const done = pollWhileEmbedding('s1', (s) => seen.push(s.revision), 1000);
    await vi.advanceTimersByTimeAsync(2500);
    const final = await done;
    expect(final.revision).toBe(2);
    expect(final.status).toBe('idle');
    expect(seen).toEqual([1, 1, 2]);
  });

  it('rejects when a poll fails', async () => {
    vi.useFakeTimers();
    vi.stubGlobal('fetch', vi.fn(async () => jsonResponse({ error: 'gone' }, 404)));
    const done = pollWhileEmbedding('s1', () => undefined, 1000);
    const failure = expect(done).rejects.toMatchObject({ status: 404 });
    await vi.advanceTimersByTimeAsync(10);
    await failure;
  });
});
