import { describe, expect, it, vi } from 'vitest';

import { ReviewApi } from './api';

function fetchStub(status = 200, payload: unknown = {}) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => payload,
  })) as unknown as typeof fetch;
}

describe('ReviewApi', () => {
  it('encodes corpus ids and domains in paths', async () => {
    const stub = fetchStub(200, []);
    const api = new ReviewApi(stub);
    await api.samples('moj korpus', 'čudna.si/domena');
    const url = (stub as unknown as ReturnType<typeof vi.fn>).mock.calls[0][0] as string;
    expect(url).toContain('/api/corpora/moj%20korpus/domains/%C4%8Dudna.si%2Fdomena/samples');
  });

  it('rejects non-2xx responses with the status', async () => {
    const api = new ReviewApi(fetchStub(503));
    await expect(api.domains('x')).rejects.toThrow('503');
  });

  it('never sends a verdict outside the closed set', async () => {
    const stub = fetchStub(200);
    const api = new ReviewApi(stub);
    await expect(
      // @ts-expect-error deliberately bypassing the type to hit the runtime guard
      api.submitVerdict('c', 'd.si', 'spammy', '', 'r'),
    ).rejects.toThrow('invalid verdict');
    expect(stub).not.toHaveBeenCalled();
  });

  it('posts verdicts as JSON', async () => {
    const stub = fetchStub(200);
    const api = new ReviewApi(stub);
    await api.submitVerdict('c', 'd.si', 'generated', 'why', 'me');
    const [, options] = (stub as unknown as ReturnType<typeof vi.fn>).mock.calls[0];
    expect(options.method).toBe('POST');
    expect(JSON.parse(options.body)).toEqual({
      domain: 'd.si',
      verdict: 'generated',
      reason: 'why',
      reviewer: 'me',
    });
  });

  it('surfaces a 422 rejection', async () => {
    const api = new ReviewApi(fetchStub(422));
    await expect(api.submitVerdict('c', 'd.si', 'generated', '', 'r')).rejects.toThrow('422');
  });
});
