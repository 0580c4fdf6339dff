// HTML string builders. Pure functions of the state, so the card markup
// (score badge, truncation, disabled buttons) is testable without a DOM.

import { formatScore, formatTimestamp, needsTruncation, truncate } from './format.js';
import type { TriageState } from './store.js';
import type { ItemRef, SuggestionView } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

function renderMetadata(metadata: Record<string, string>): string {
  const entries = Object.entries(metadata);
  if (entries.length === 0) {
    return '';
  }
  const rows = entries
    .map(
      ([key, value]) =>
        `<div class="meta-row"><span class="meta-key">${escapeHtml(key)}</span>` +
        `<span class="meta-value">${escapeHtml(value)}</span></div>`,
    )
    .join('');
  return `<div class="metadata">${rows}</div>`;
}

function renderPane(
  view: SuggestionView,
  side: 'source' | 'target',
  item: ItemRef,
  expanded: boolean,
): string {
  const label = side === 'source' ? 'New item' : 'Suggested match';
  const showFull = expanded || !needsTruncation(item.text);
  const text = showFull ? item.text : truncate(item.text);
  const expander = needsTruncation(item.text)
    ? `<button class="expander" data-action="expand" data-id="${escapeHtml(view.suggestionId)}"` +
      ` data-side="${side}">${expanded ? 'Show less' : 'Show more'}</button>`
    : '';
  const missing = item.missing ? ' <span class="missing">(deleted)</span>' : '';
  return (
    `<div class="pane pane-${side}">` +
    `<div class="pane-head">${label}: <code>${escapeHtml(item.id)}</code>${missing}</div>` +
    `<div class="pane-text">${escapeHtml(text)}${showFull ? '' : '…'}</div>` +
    expander +
    renderMetadata(item.metadata) +
    `</div>`
  );
}

export function renderCard(view: SuggestionView, state: TriageState): string {
  const busy = state.inFlight.has(view.suggestionId);
  const disabled = busy ? ' disabled' : '';
  const sid = escapeHtml(view.suggestionId);
  return (
    `<article class="card" data-suggestion="${sid}">` +
    `<header class="card-head">` +
    `<span class="badge score">${formatScore(view.score)}</span>` +
    `<span class="sid">${sid}</span>` +
    `<time>${escapeHtml(formatTimestamp(view.createdAt))}</time>` +
    `</header>` +
    `<div class="panes">` +
    renderPane(view, 'source', view.source, state.expanded.has(`${view.suggestionId}:source`)) +
    renderPane(view, 'target', view.target, state.expanded.has(`${view.suggestionId}:target`)) +
    `</div>` +
    `<footer class="actions">` +
    `<button class="confirm" data-action="confirm" data-id="${sid}"${disabled}>Confirm match</button>` +
    `<button class="dismiss" data-action="dismiss" data-id="${sid}"${disabled}>Dismiss</button>` +
    (busy ? `<span class="busy">saving…</span>` : '') +
    `</footer>` +
    `</article>`
  );
}

export function renderApp(state: TriageState): string {
  const banner = state.error
    ? `<div class="banner error">Cannot reach the service: ${escapeHtml(state.error)} ` +
      `<button data-action="retry">Retry</button></div>`
    : '';
  const notices = state.notices
    .map(
      (n) =>
        `<div class="banner notice notice-${n.kind}">${escapeHtml(n.text)} ` +
        `<button data-action="dismiss-notice" data-id="${escapeHtml(n.suggestionId)}">OK</button></div>`,
    )
    .join('');
  const cards =
    state.views.length > 0
      ? state.views.map((view) => renderCard(view, state)).join('')
      : `<div class="empty">${state.loading ? 'Loading…' : 'No pending suggestions.'}</div>`;
  return (
    `<header class="top">` +
    `<h1>Suggestion review</h1>` +
    `<span class="counter"><strong>${state.pendingCount}</strong> pending</span>` +
    `</header>` +
    banner +
    notices +
    `<main class="cards">${cards}</main>`
  );
}
