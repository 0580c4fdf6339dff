import { describe, expect, it } from 'vitest';

import { TRUNCATE_CHARS, formatScore, needsTruncation, truncate } from '../src/format.js';

describe('formatScore', () => {
  it('rounds half-up to two decimals', () => {
    expect(formatScore(0.9586)).toBe('0.96');
    expect(formatScore(0.005)).toBe('0.01'); // exactly-half case rounds up
    expect(formatScore(0.994)).toBe('0.99');
  });

  it('pads exact values to two decimals', () => {
    expect(formatScore(1.0)).toBe('1.00');
    expect(formatScore(0.5)).toBe('0.50');
    expect(formatScore(0)).toBe('0.00');
  });

  it('rounds apparent midpoints up', () => {
    // 0.955 * 100 lands exactly on 95.5 in binary, and half-up takes it to 96
    expect(formatScore(0.955)).toBe('0.96');
  });

  it('handles negative cosine scores', () => {
    expect(formatScore(-0.4251)).toBe('-0.43');
    expect(formatScore(-1)).toBe('-1.00');
  });
});

describe('truncation', () => {
  it('leaves short texts alone', () => {
    const text = 'a'.repeat(TRUNCATE_CHARS);
    expect(needsTruncation(text)).toBe(false);
    expect(truncate(text)).toBe(text);
  });

  it('cuts texts over the limit', () => {
    const text = 'b'.repeat(TRUNCATE_CHARS + 1);
    expect(needsTruncation(text)).toBe(true);
    expect(truncate(text)).toHaveLength(TRUNCATE_CHARS);
  });

  it('handles the 5000-character case', () => {
    const text = 'x'.repeat(5000);
    expect(needsTruncation(text)).toBe(true);
    expect(truncate(text)).toBe(text.slice(0, TRUNCATE_CHARS));
  });
});
