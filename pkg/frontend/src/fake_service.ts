import type { ReviewClient } from './api';
import type {
  CorpusInfo,
  DegradationSummary,
  DomainsResponse,
  Sample,
  Status,
  TriageQueueItem,
  Verdict,
} from './types';
import { isVerdict } from './types';

export interface FakeDomain {
  domain: string;
  texts: number;
  words: number;
}

/** In-memory stand-in for the review service, mirroring its semantics:
 * ranked domains, unreviewed-first ordering, latest-verdict-wins log,
 * removal list of non-good verdicts, degradation over the whole corpus. */
export class FakeService implements ReviewClient {
  readonly verdictLog: Array<{ domain: string; verdict: Verdict }> = [];
  failNext = false;

  constructor(
    readonly corpusId: string,
    readonly domainsSpec: FakeDomain[],
  ) {}

  private totals() {
    return {
      texts: this.domainsSpec.reduce((s, d) => s + d.texts, 0),
      words: this.domainsSpec.reduce((s, d) => s + d.words, 0),
    };
  }

  private active(): Map<string, Verdict> {
    const map = new Map<string, Verdict>();
    for (const entry of this.verdictLog) map.set(entry.domain, entry.verdict);
    return map;
  }

  async corpora(): Promise<CorpusInfo[]> {
    const { texts, words } = this.totals();
    return [
      {
        corpus_id: this.corpusId,
        n_texts: texts,
        n_words: words,
        n_domains: this.domainsSpec.length,
      },
    ];
  }

  async domains(corpusId: string, top = 250): Promise<DomainsResponse> {
    this.checkCorpus(corpusId);
    const { texts } = this.totals();
    const active = this.active();
    const ranked = [...this.domainsSpec].sort(
      (a, b) => b.texts - a.texts || a.domain.localeCompare(b.domain),
    );
    const rows: TriageQueueItem[] = ranked.slice(0, top).map((d, index) => ({
      domain: d.domain,
      rank: index + 1,
      texts: d.texts,
      words: d.words,
      share_pct: (100 * d.texts) / texts,
      status: (active.get(d.domain) ?? 'unreviewed') as Status,
    }));
    rows.sort((a, b) => {
      const ua = a.status === 'unreviewed' ? 0 : 1;
      const ub = b.status === 'unreviewed' ? 0 : 1;
      return ua !== ub ? ua - ub : a.rank - b.rank;
    });
    return {
      rows,
      reviewed: rows.filter((r) => r.status !== 'unreviewed').length,
      total: rows.length,
    };
  }

  async samples(corpusId: string, domain: string, n = 5): Promise<Sample[]> {
    this.checkCorpus(corpusId);
    const spec = this.domainsSpec.find((d) => d.domain === domain);
    if (!spec) throw new Error(`unknown domain ${domain}`);
    return Array.from({ length: Math.min(n, spec.texts) }, (_, i) => ({
      id: `${domain}-${String(i).padStart(3, '0')}`,
      url: `https://${domain}/stran/${i}`,
      text: `vzorec besedila ${domain} ${i}`,
    }));
  }

  async degradation(corpusId: string, top = 250): Promise<DegradationSummary> {
    this.checkCorpus(corpusId);
    const { texts, words } = this.totals();
    const active = this.active();
    const ranked = [...this.domainsSpec]
      .sort((a, b) => b.texts - a.texts || a.domain.localeCompare(b.domain))
      .slice(0, top);
    let badTexts = 0;
    let badWords = 0;
    let badDomains = 0;
    for (const d of ranked) {
      const verdict = active.get(d.domain);
      if (verdict && verdict !== 'good') {
        badDomains += 1;
        badTexts += d.texts;
        badWords += d.words;
      }
    }
    return {
      corpus_id: this.corpusId,
      top_n: top,
      n_bad_domains: badDomains,
      bad_texts_pct: (100 * badTexts) / texts,
      bad_words_pct: (100 * badWords) / words,
    };
  }

  async submitVerdict(
    corpusId: string,
    domain: string,
    verdict: Verdict,
  ): Promise<void> {
    this.checkCorpus(corpusId);
    if (this.failNext) {
      this.failNext = false;
      throw new Error('injected 422');
    }
    if (!isVerdict(verdict)) throw new Error('422 invalid verdict');
    this.verdictLog.push({ domain, verdict });
  }

  /** Removal-list semantics: active non-good verdicts. */
  removalList(): string[] {
    return [...this.active()]
      .filter(([, verdict]) => verdict !== 'good')
      .map(([domain]) => domain)
      .sort();
  }

  /** What applying the removal list to the corpus would keep. */
  applyRemoval(): FakeDomain[] {
    const bad = new Set(this.removalList());
    return this.domainsSpec.filter((d) => !bad.has(d.domain));
  }

  private checkCorpus(corpusId: string): void {
    if (corpusId !== this.corpusId) throw new Error(`404 unknown corpus ${corpusId}`);
  }
}
