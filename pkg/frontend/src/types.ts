export const BAD_VERDICTS = ['machine_translated', 'generated', 'encoding_broken'] as const;
export const VERDICTS = ['good', ...BAD_VERDICTS] as const;

export type Verdict = (typeof VERDICTS)[number];
export type Status = 'unreviewed' | Verdict;

export interface TriageQueueItem {
  domain: string;
  rank: number;
  texts: number;
  words: number;
  share_pct: number;
  status: Status;
}

export interface DomainsResponse {
  rows: TriageQueueItem[];
  reviewed: number;
  total: number;
}

export interface CorpusInfo {
  corpus_id: string;
  n_texts: number;
  n_words: number;
  n_domains: number;
}

export interface Sample {
  id: string;
  url: string;
  text: string;
}

export interface DegradationSummary {
  corpus_id: string;
  top_n: number;
  n_bad_domains: number;
  bad_texts_pct: number;
  bad_words_pct: number;
}

export function isVerdict(value: string): value is Verdict {
  return (VERDICTS as readonly string[]).includes(value);
}
