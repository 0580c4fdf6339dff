// Thin typed client for the vsim service HTTP API.

import type { Decision, ItemDto, ItemRef, SuggestionDto, SuggestionView } from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export interface TriageApi {
  fetchPending(): Promise<SuggestionView[]>;
  submitDecision(suggestionId: string, decision: Decision): Promise<SuggestionDto>;
}

type FetchLike = typeof fetch;

async function request<T>(fetchFn: FetchLike, url: string, init?: RequestInit): Promise<T> {
  const response = await fetchFn(url, init);
  if (!response.ok) {
    let code = 'Http';
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { error?: { code?: string; message?: string } };
      if (body.error) {
        code = body.error.code ?? code;
        message = body.error.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export function createApi(baseUrl: string, fetchFn: FetchLike = fetch): TriageApi {
  const base = baseUrl.replace(/\/+$/, '');

  async function fetchItem(id: string): Promise<ItemRef> {
    try {
      const item = await request<ItemDto>(fetchFn, `${base}/texts/${encodeURIComponent(id)}`);
      return { id: item.id, text: item.text, metadata: item.metadata, missing: false };
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        return { id, text: '(item no longer exists)', metadata: {}, missing: true };
      }
      throw error;
    }
  }

  return {
    async fetchPending(): Promise<SuggestionView[]> {
      const body = await request<{ suggestions: SuggestionDto[] }>(
        fetchFn,
        `${base}/suggestions?state=pending`,
      );
      // fetch each distinct item once, even when several suggestions share it
      const ids = new Set<string>();
      for (const s of body.suggestions) {
        ids.add(s.source_id);
        ids.add(s.target_id);
      }
      const items = new Map<string, ItemRef>();
      await Promise.all(
        [...ids].map(async (id) => {
          items.set(id, await fetchItem(id));
        }),
      );
      // preserve the API's ordering (newest first)
      return body.suggestions.map((s) => ({
        suggestionId: s.suggestion_id,
        score: s.score,
        state: s.state,
        createdAt: s.created_at,
        source: items.get(s.source_id)!,
        target: items.get(s.target_id)!,
      }));
    },

    async submitDecision(suggestionId: string, decision: Decision): Promise<SuggestionDto> {
      return request<SuggestionDto>(
        fetchFn,
        `${base}/suggestions/${encodeURIComponent(suggestionId)}/decision`,
        {
          method: 'POST',
          headers: { 'Content-Type': 'application/json' },
          body: JSON.stringify({ decision }),
        },
      );
    },
  };
}
