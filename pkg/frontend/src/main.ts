import { ReviewApi } from './api';
import { actionForKey } from './keyboard';
import { orderQueue } from './queue';
import { TriageStore } from './store';
import { render } from './view';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');

const store = new TriageStore(new ReviewApi());

store.subscribe((state) => render(root, store, state));

document.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement || event.target instanceof HTMLTextAreaElement) {
    return;
  }
  const action = actionForKey(event.key);
  if (!action) return;
  event.preventDefault();
  const state = store.getState();
  if (state.phase !== 'ready') return;
  switch (action.kind) {
    case 'verdict':
      void store.submitVerdict(action.verdict);
      break;
    case 'next-sample':
      store.nextSample();
      break;
    case 'move': {
      const ordered = orderQueue(state.items);
      if (!ordered.length) break;
      const index = ordered.findIndex((item) => item.domain === state.focusedDomain);
      const next = ordered[(index + action.delta + ordered.length) % ordered.length];
      store.focus(next.domain);
      break;
    }
  }
});

void store.load();
