// DOM glue: render the store into a root element and translate clicks
// back into store actions. Polling keeps the pending list fresh.

import { POLL_INTERVAL_MS } from './config.js';
import { renderApp } from './render.js';
import { TriageStore } from './store.js';
import type { TriageApi } from './api.js';
import type { Decision } from './types.js';

export function bootstrap(root: HTMLElement, api: TriageApi): TriageStore {
  const store = new TriageStore(api);

  store.subscribe((state) => {
    root.innerHTML = renderApp(state);
  });

  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement | null;
    const button = target?.closest<HTMLElement>('[data-action]');
    if (!button) {
      return;
    }
    const action = button.dataset.action;
    const id = button.dataset.id ?? '';
    if (action === 'confirm' || action === 'dismiss') {
      const decision: Decision = action === 'confirm' ? 'confirm' : 'dismiss';
      void store.decide(id, decision);
    } else if (action === 'expand') {
      store.toggleExpand(id, button.dataset.side === 'target' ? 'target' : 'source');
    } else if (action === 'retry') {
      void store.refresh();
    } else if (action === 'dismiss-notice') {
      store.dismissNotice(id);
    }
  });

  void store.refresh();
  setInterval(() => {
    void store.refresh();
  }, POLL_INTERVAL_MS);
  return store;
}
