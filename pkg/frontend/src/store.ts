// State machine behind the triage screen. Pure of DOM concerns so the
// decision flow is testable in Node; rendering subscribes to changes.

import { ApiError, type TriageApi } from './api.js';
import type { Decision, SuggestionView } from './types.js';

export interface Notice {
  suggestionId: string;
  kind: 'decided' | 'already_decided' | 'gone';
  text: string;
}

export interface TriageState {
  views: SuggestionView[];
  pendingCount: number;
  loading: boolean;
  error: string | null; // retry banner when the service is unreachable
  inFlight: ReadonlySet<string>;
  notices: Notice[];
  expanded: ReadonlySet<string>; // `${suggestionId}:${'source' | 'target'}`
}

const MAX_NOTICES = 4;

export class TriageStore {
  private views: SuggestionView[] = [];
  private loading = false;
  private error: string | null = null;
  private inFlight = new Set<string>();
  private notices: Notice[] = [];
  private expanded = new Set<string>();
  private listeners: Array<(state: TriageState) => void> = [];

  constructor(private readonly api: TriageApi) {}

  subscribe(listener: (state: TriageState) => void): void {
    this.listeners.push(listener);
  }

  get state(): TriageState {
    return {
      views: this.views,
      pendingCount: this.views.length,
      loading: this.loading,
      error: this.error,
      inFlight: this.inFlight,
      notices: this.notices,
      expanded: this.expanded,
    };
  }

  /** Pull the pending list; on failure keep the stale list and raise the
   * retry banner instead of blanking the screen. */
  async refresh(): Promise<void> {
    this.loading = true;
    this.emit();
    try {
      this.views = await this.api.fetchPending();
      this.error = null;
    } catch (error) {
      this.error = error instanceof Error ? error.message : String(error);
    } finally {
      this.loading = false;
      this.emit();
    }
  }

  /** Confirm or dismiss one suggestion. Ignored while a decision for the
   * same card is already in flight. */
  async decide(suggestionId: string, decision: Decision): Promise<void> {
    if (this.inFlight.has(suggestionId)) {
      return;
    }
    this.inFlight.add(suggestionId);
    this.emit();
    let settled = true;
    try {
      const updated = await this.api.submitDecision(suggestionId, decision);
      this.removeView(suggestionId);
      this.pushNotice({
        suggestionId,
        kind: 'decided',
        text: `Suggestion ${suggestionId} ${updated.state}.`,
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.removeView(suggestionId);
        this.pushNotice({
          suggestionId,
          kind: 'already_decided',
          text: `Suggestion ${suggestionId} was already decided elsewhere.`,
        });
      } else if (error instanceof ApiError && error.status === 404) {
        this.removeView(suggestionId);
        this.pushNotice({
          suggestionId,
          kind: 'gone',
          text: `Suggestion ${suggestionId} no longer exists.`,
        });
      } else {
        // never reached the server: keep the card, raise the banner, and
        // skip the refresh that would immediately clear it
        settled = false;
        this.error = error instanceof Error ? error.message : String(error);
      }
    } finally {
      this.inFlight.delete(suggestionId);
      this.emit();
    }
    if (settled) {
      // re-converge to server state after any decision outcome
      await this.refresh();
    }
  }

  toggleExpand(suggestionId: string, side: 'source' | 'target'): void {
    const key = `${suggestionId}:${side}`;
    if (this.expanded.has(key)) {
      this.expanded.delete(key);
    } else {
      this.expanded.add(key);
    }
    this.emit();
  }

  dismissNotice(suggestionId: string): void {
    this.notices = this.notices.filter((n) => n.suggestionId !== suggestionId);
    this.emit();
  }

  private removeView(suggestionId: string): void {
    this.views = this.views.filter((v) => v.suggestionId !== suggestionId);
  }

  private pushNotice(notice: Notice): void {
    this.notices = [...this.notices, notice].slice(-MAX_NOTICES);
  }

  private emit(): void {
    const snapshot = this.state;
    for (const listener of this.listeners) {
      listener(snapshot);
    }
  }
}
