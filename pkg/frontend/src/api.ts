import type {
  CorpusInfo,
  DegradationSummary,
  DomainsResponse,
  Sample,
  Verdict,
} from './types';
import { isVerdict } from './types';

/** What the triage screen needs from the review service. */
export interface ReviewClient {
  corpora(): Promise<CorpusInfo[]>;
  domains(corpusId: string, top?: number): Promise<DomainsResponse>;
  samples(corpusId: string, domain: string, n?: number): Promise<Sample[]>;
  degradation(corpusId: string, top?: number): Promise<DegradationSummary>;
  submitVerdict(
    corpusId: string,
    domain: string,
    verdict: Verdict,
    reason: string,
    reviewer: string,
  ): Promise<void>;
}

/** Thin client over the review service HTTP+JSON API. */
export class ReviewApi implements ReviewClient {
  constructor(
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
    private readonly base = '',
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  corpora(): Promise<CorpusInfo[]> {
    return this.get('/api/corpora');
  }

  domains(corpusId: string, top = 250): Promise<DomainsResponse> {
    return this.get(`/api/corpora/${encodeURIComponent(corpusId)}/domains?top=${top}`);
  }

  samples(corpusId: string, domain: string, n = 5): Promise<Sample[]> {
    return this.get(
      `/api/corpora/${encodeURIComponent(corpusId)}/domains/${encodeURIComponent(domain)}/samples?n=${n}`,
    );
  }

  degradation(corpusId: string, top = 250): Promise<DegradationSummary> {
    return this.get(`/api/corpora/${encodeURIComponent(corpusId)}/degradation?top=${top}`);
  }

  async submitVerdict(
    corpusId: string,
    domain: string,
    verdict: Verdict,
    reason: string,
    reviewer: string,
  ): Promise<void> {
    // mirror the server's closed set; never send anything else
    if (!isVerdict(verdict)) {
      throw new Error(`invalid verdict: ${verdict}`);
    }
    const response = await this.fetchFn(
      `${this.base}/api/corpora/${encodeURIComponent(corpusId)}/verdicts`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ domain, verdict, reason, reviewer }),
      },
    );
    if (!response.ok) {
      throw new Error(`verdict rejected: ${response.status}`);
    }
  }
}
