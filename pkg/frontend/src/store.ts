import type { ReviewClient } from './api';
import {
  badTextShare,
  firstUnreviewed,
  isComplete,
  nextFocus,
  orderQueue,
  progress,
  withStatus,
} from './queue';
import type { Sample, TriageQueueItem, Verdict } from './types';

export interface TriageState {
  phase: 'loading' | 'ready' | 'error';
  errorMessage: string | null;
  corpusId: string;
  corpusTexts: number;
  items: TriageQueueItem[];
  focusedDomain: string | null;
  samples: Sample[];
  sampleIndex: number;
  serverBadTextsPct: number;
  submitting: boolean;
  toast: string | null;
}

type Listener = (state: TriageState) => void;

/** Single-user triage session: optimistic verdicts with rollback, one
 * in-flight submission at a time, focus advancing to the next unreviewed
 * domain. */
export class TriageStore {
  private state: TriageState = {
    phase: 'loading',
    errorMessage: null,
    corpusId: '',
    corpusTexts: 0,
    items: [],
    focusedDomain: null,
    samples: [],
    sampleIndex: 0,
    serverBadTextsPct: 0,
    submitting: false,
    toast: null,
  };
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ReviewClient,
    private readonly topN = 250,
    private readonly reviewer = 'curator',
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  getState(): TriageState {
    return this.state;
  }

  private set(patch: Partial<TriageState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async load(): Promise<void> {
    this.set({ phase: 'loading', errorMessage: null });
    try {
      const corpora = await this.api.corpora();
      if (!corpora.length) throw new Error('service has no corpora loaded');
      const corpus = corpora[0];
      const [domains, degradation] = await Promise.all([
        this.api.domains(corpus.corpus_id, this.topN),
        this.api.degradation(corpus.corpus_id, this.topN),
      ]);
      const items = orderQueue(domains.rows);
      this.set({
        phase: 'ready',
        corpusId: corpus.corpus_id,
        corpusTexts: corpus.n_texts,
        items,
        focusedDomain: firstUnreviewed(items),
        serverBadTextsPct: degradation.bad_texts_pct,
      });
      await this.loadSamples();
    } catch (error) {
      // never fail silently: surface the message and keep the retry path
      this.set({ phase: 'error', errorMessage: String(error) });
    }
  }

  async loadSamples(): Promise<void> {
    const domain = this.state.focusedDomain;
    if (!domain) {
      this.set({ samples: [], sampleIndex: 0 });
      return;
    }
    try {
      const samples = await this.api.samples(this.state.corpusId, domain);
      this.set({ samples, sampleIndex: 0 });
    } catch (error) {
      this.set({ samples: [], sampleIndex: 0, toast: `samples failed: ${error}` });
    }
  }

  focus(domain: string): void {
    if (this.state.items.some((item) => item.domain === domain)) {
      this.set({ focusedDomain: domain, samples: [], sampleIndex: 0 });
      void this.loadSamples();
    }
  }

  nextSample(): void {
    if (this.state.samples.length) {
      this.set({
        sampleIndex: (this.state.sampleIndex + 1) % this.state.samples.length,
      });
    }
  }

  /** Optimistic verdict: apply locally, roll back if the service rejects. */
  async submitVerdict(verdict: Verdict): Promise<void> {
    const domain = this.state.focusedDomain;
    if (!domain || this.state.submitting) return;
    const before = this.state.items;
    const optimistic = withStatus(before, domain, verdict);
    this.set({
      items: optimistic,
      submitting: true,
      toast: null,
      focusedDomain: nextFocus(before, domain),
    });
    try {
      await this.api.submitVerdict(this.state.corpusId, domain, verdict, '', this.reviewer);
      const degradation = await this.api.degradation(this.state.corpusId, this.topN);
      this.set({ submitting: false, serverBadTextsPct: degradation.bad_texts_pct });
      await this.loadSamples();
    } catch (error) {
      // rollback: restore the previous status and focus the failed domain
      this.set({
        items: before,
        submitting: false,
        focusedDomain: domain,
        toast: `verdict rejected, try again: ${error}`,
      });
    }
  }

  view() {
    const { items, corpusTexts } = this.state;
    return {
      ordered: orderQueue(items),
      progress: progress(items),
      localBadShare: badTextShare(items, corpusTexts),
      complete: isComplete(items),
    };
  }
}
