import type { Status, TriageQueueItem } from './types';

/** Pure queue math: ordering, progress, focus movement, bad-share totals.
 * Rendering derives everything from (items, focus), so replaying the same
 * service responses always yields the same view. */

export function orderQueue(items: TriageQueueItem[]): TriageQueueItem[] {
  return [...items].sort((a, b) => {
    const ua = a.status === 'unreviewed' ? 0 : 1;
    const ub = b.status === 'unreviewed' ? 0 : 1;
    return ua !== ub ? ua - ub : a.rank - b.rank;
  });
}

export interface Progress {
  reviewed: number;
  total: number;
}

export function progress(items: TriageQueueItem[]): Progress {
  return {
    reviewed: items.filter((item) => item.status !== 'unreviewed').length,
    total: items.length,
  };
}

/** Share of corpus texts sitting on domains marked with a bad verdict. */
export function badTextShare(items: TriageQueueItem[], corpusTexts: number): number {
  if (corpusTexts <= 0) return 0;
  const badTexts = items
    .filter((item) => item.status !== 'unreviewed' && item.status !== 'good')
    .reduce((sum, item) => sum + item.texts, 0);
  return (100 * badTexts) / corpusTexts;
}

export function firstUnreviewed(items: TriageQueueItem[]): string | null {
  const ordered = orderQueue(items);
  const hit = ordered.find((item) => item.status === 'unreviewed');
  return hit ? hit.domain : null;
}

/** The next unreviewed domain after a verdict lands on `domain`. */
export function nextFocus(items: TriageQueueItem[], domain: string): string | null {
  const remaining = items.filter(
    (item) => item.status === 'unreviewed' && item.domain !== domain,
  );
  return remaining.length ? orderQueue(remaining)[0].domain : null;
}

export function withStatus(
  items: TriageQueueItem[],
  domain: string,
  status: Status,
): TriageQueueItem[] {
  return items.map((item) => (item.domain === domain ? { ...item, status } : item));
}

export function isComplete(items: TriageQueueItem[]): boolean {
  return items.length > 0 && items.every((item) => item.status !== 'unreviewed');
}
