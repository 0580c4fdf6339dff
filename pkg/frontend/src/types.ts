// Wire types, exactly as the service returns them.

export interface SuggestionDto {
  suggestion_id: string;
  source_id: string;
  target_id: string;
  score: number;
  state: 'pending' | 'confirmed' | 'dismissed';
  created_at: string;
  decided_at: string | null;
}

export interface ItemDto {
  id: string;
  text: string;
  status: 'pending' | 'fact_checked';
  metadata: Record<string, string>;
  created_at: string | null;
}

export type Decision = 'confirm' | 'dismiss';

// One side of a triage card: the new item or its suggested match.
export interface ItemRef {
  id: string;
  text: string;
  metadata: Record<string, string>;
  missing: boolean; // item deleted on the server (GET /texts/{id} -> 404)
}

// A pending suggestion joined with both item texts, ready to render.
export interface SuggestionView {
  suggestionId: string;
  score: number;
  state: string;
  createdAt: string;
  source: ItemRef;
  target: ItemRef;
}
