import type { Verdict } from './types';

export type TriageAction =
  | { kind: 'verdict'; verdict: Verdict }
  | { kind: 'next-sample' }
  | { kind: 'move'; delta: 1 | -1 };

/** Keyboard-first triage: 1-4 record verdicts, space pages through
 * samples, j/k (or arrows) move the focus. Returns null for keys the
 * triage screen does not own. */
export function actionForKey(key: string): TriageAction | null {
  switch (key) {
    case '1':
      return { kind: 'verdict', verdict: 'good' };
    case '2':
      return { kind: 'verdict', verdict: 'machine_translated' };
    case '3':
      return { kind: 'verdict', verdict: 'generated' };
    case '4':
      return { kind: 'verdict', verdict: 'encoding_broken' };
    case ' ':
      return { kind: 'next-sample' };
    case 'j':
    case 'ArrowDown':
      return { kind: 'move', delta: 1 };
    case 'k':
    case 'ArrowUp':
      return { kind: 'move', delta: -1 };
    default:
      return null;
  }
}
