// Service base URL resolution: ?api=... query parameter first, then a
// window-level override (set in config.js), then the default dev port.

export const DEFAULT_BASE_URL = 'http://localhost:8040';

export const POLL_INTERVAL_MS = 10_000;

declare global {
  interface Window {
    VSIM_API_BASE?: string;
  }
}

export function resolveBaseUrl(win: Pick<Window, 'location'> & { VSIM_API_BASE?: string }): string {
  const fromQuery = new URLSearchParams(win.location.search).get('api');
  return fromQuery || win.VSIM_API_BASE || DEFAULT_BASE_URL;
}
