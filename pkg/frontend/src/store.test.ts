import { describe, expect, it } from 'vitest';

import { FakeService } from './fake_service';
import { TriageStore } from './store';

const SEVEN = [
  { domain: 'prvi.si', texts: 40, words: 4000 },
  { domain: 'drugi.si', texts: 20, words: 2000 },
  { domain: 'tretji.si', texts: 15, words: 1500 },
  { domain: 'cetrti.si', texts: 10, words: 1000 },
  { domain: 'peti.si', texts: 6, words: 600 },
  { domain: 'sesti.si', texts: 5, words: 500 },
  { domain: 'sedmi.si', texts: 4, words: 400 },
];

async function readyStore(service = new FakeService('fixture', SEVEN)) {
  const store = new TriageStore(service);
  await store.load();
  return { store, service };
}

describe('loading', () => {
  it('seven unreviewed items, focus on rank 1', async () => {
    const { store } = await readyStore();
    const state = store.getState();
    expect(state.phase).toBe('ready');
    expect(state.items).toHaveLength(7);
    expect(store.view().progress).toEqual({ reviewed: 0, total: 7 });
    expect(state.focusedDomain).toBe('prvi.si');
    expect(state.samples.length).toBeGreaterThan(0);
  });

  it('unreachable service gives a visible error state', async () => {
    const broken = {
      corpora: async () => {
        throw new Error('connection refused');
      },
    } as unknown as FakeService;
    const store = new TriageStore(broken);
    await store.load();
    const state = store.getState();
    expect(state.phase).toBe('error');
    expect(state.errorMessage).toContain('connection refused');
  });

  it('retry after failure recovers', async () => {
    const service = new FakeService('fixture', SEVEN);
    let calls = 0;
    const flaky = new Proxy(service, {
      get(target, prop, receiver) {
        if (prop === 'corpora') {
          return async () => {
            calls += 1;
            if (calls === 1) throw new Error('down');
            return target.corpora();
          };
        }
        return Reflect.get(target, prop, receiver);
      },
    });
    const store = new TriageStore(flaky);
    await store.load();
    expect(store.getState().phase).toBe('error');
    await store.load();
    expect(store.getState().phase).toBe('ready');
  });
});

describe('verdict submission', () => {
  it('marks the domain and advances focus', async () => {
    const { store, service } = await readyStore();
    await store.submitVerdict('generated');
    const state = store.getState();
    const first = state.items.find((i) => i.domain === 'prvi.si');
    expect(first?.status).toBe('generated');
    expect(state.focusedDomain).toBe('drugi.si');
    expect(service.verdictLog).toEqual([{ domain: 'prvi.si', verdict: 'generated' }]);
    expect(store.view().progress.reviewed).toBe(1);
  });

  it('refreshes the degradation counter from the service', async () => {
    const { store } = await readyStore();
    await store.submitVerdict('generated'); // prvi.si holds 40 of 100 texts
    expect(store.getState().serverBadTextsPct).toBeCloseTo(40.0, 10);
  });

  it('rolls back on rejection and keeps focus', async () => {
    const { store, service } = await readyStore();
    service.failNext = true;
    await store.submitVerdict('generated');
    const state = store.getState();
    const first = state.items.find((i) => i.domain === 'prvi.si');
    expect(first?.status).toBe('unreviewed');
    expect(state.focusedDomain).toBe('prvi.si');
    expect(state.toast).toContain('verdict rejected');
    expect(service.verdictLog).toEqual([]);
  });

  it('completion banner state after the last verdict', async () => {
    const { store } = await readyStore();
    for (let i = 0; i < 7; i += 1) {
      await store.submitVerdict(i % 2 ? 'good' : 'generated');
    }
    expect(store.view().complete).toBe(true);
    expect(store.getState().focusedDomain).toBeNull();
  });
});

describe('sample paging', () => {
  it('wraps around', async () => {
    const { store } = await readyStore();
    const n = store.getState().samples.length;
    for (let i = 0; i < n; i += 1) store.nextSample();
    expect(store.getState().sampleIndex).toBe(0);
  });
});
