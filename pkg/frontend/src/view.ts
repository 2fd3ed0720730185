import type { TriageState } from './store';
import type { TriageStore } from './store';

const VERDICT_KEYS = [
  ['1', 'good'],
  ['2', 'machine_translated'],
  ['3', 'generated'],
  ['4', 'encoding_broken'],
] as const;

/** DOM rendering. Sample text is inserted with textContent only; crawled
 * content must never execute in the curator's browser. */
export function render(root: HTMLElement, store: TriageStore, state: TriageState): void {
  root.textContent = '';

  if (state.phase === 'loading') {
    root.append(el('p', 'status', 'Loading corpus…'));
    return;
  }
  if (state.phase === 'error') {
    const box = el('div', 'error-box');
    box.append(el('p', 'error', `Service unreachable: ${state.errorMessage}`));
    const retry = el('button', 'retry', 'Retry') as HTMLButtonElement;
    retry.addEventListener('click', () => void store.load());
    box.append(retry);
    root.append(box);
    return;
  }

  const { ordered, progress, localBadShare, complete } = store.view();

  const header = el('header', 'topbar');
  header.append(el('h1', '', `Domain triage: ${state.corpusId}`));
  header.append(
    el('span', 'progress', `${progress.reviewed}/${progress.total} reviewed`),
  );
  header.append(
    el(
      'span',
      'badshare',
      `bad domains hold ${state.serverBadTextsPct.toFixed(1)}% of texts ` +
        `(local ${localBadShare.toFixed(1)}%)`,
    ),
  );
  root.append(header);

  if (complete) {
    root.append(
      el(
        'div',
        'banner',
        `Review complete: bad domains hold ${state.serverBadTextsPct.toFixed(1)}% of corpus texts.`,
      ),
    );
  }

  if (state.toast) {
    root.append(el('div', 'toast', state.toast));
  }

  const layout = el('div', 'layout');
  layout.append(renderQueue(store, state, ordered));
  layout.append(renderSamplePanel(store, state));
  root.append(layout);
}

function renderQueue(
  store: TriageStore,
  state: TriageState,
  ordered: ReturnType<TriageStore['view']>['ordered'],
): HTMLElement {
  const list = el('ul', 'queue');
  for (const item of ordered) {
    const row = el('li', `row status-${item.status}`);
    if (item.domain === state.focusedDomain) row.classList.add('focused');
    row.append(el('span', 'rank', `#${item.rank}`));
    row.append(el('span', 'domain', item.domain));
    row.append(el('span', 'texts', `${item.texts} texts`));
    row.append(el('span', 'share', `${item.share_pct.toFixed(1)}%`));
    row.append(el('span', 'status', item.status));
    row.addEventListener('click', () => store.focus(item.domain));
    list.append(row);
  }
  return list;
}

function renderSamplePanel(store: TriageStore, state: TriageState): HTMLElement {
  const panel = el('section', 'samples');
  if (!state.focusedDomain) {
    panel.append(el('p', '', 'Nothing left to review.'));
    return panel;
  }
  panel.append(el('h2', '', state.focusedDomain));

  const bar = el('div', 'verdict-bar');
  for (const [key, verdict] of VERDICT_KEYS) {
    const button = el('button', `verdict-${verdict}`, `${key} ${verdict}`) as HTMLButtonElement;
    button.disabled = state.submitting;
    button.addEventListener('click', () => void store.submitVerdict(verdict));
    bar.append(button);
  }
  panel.append(bar);
  panel.append(el('p', 'hint', 'keys: 1-4 verdict, space next sample, j/k move'));

  if (state.samples.length) {
    const sample = state.samples[state.sampleIndex];
    panel.append(
      el('p', 'sample-meta', `${state.sampleIndex + 1}/${state.samples.length}  ${sample.url}`),
    );
    const text = el('pre', 'sample-text');
    text.textContent = sample.text;
    panel.append(text);
  } else {
    panel.append(el('p', '', 'Loading samples…'));
  }
  return panel;
}

function el(tag: string, className = '', text = ''): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}
