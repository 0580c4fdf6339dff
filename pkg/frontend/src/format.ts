// Pure display helpers. The UI never computes similarity; it only formats
// numbers the API already produced.

export const TRUNCATE_CHARS = 2000;

/** Score badge text: rounded half-up to two decimals ("0.9586" -> "0.96"). */
export function formatScore(score: number): string {
  return (Math.round(score * 100) / 100).toFixed(2);
}

export function needsTruncation(text: string): boolean {
  return text.length > TRUNCATE_CHARS;
}

export function truncate(text: string): string {
  return needsTruncation(text) ? text.slice(0, TRUNCATE_CHARS) : text;
}

export function formatTimestamp(rfc3339: string): string {
  const date = new Date(rfc3339);
  return Number.isNaN(date.getTime()) ? rfc3339 : date.toLocaleString();
}
