/** Display formatting only; never feeds back into any computation. */

export function usd(value: number): string {
  if (value >= 1e9) return `$${(value / 1e9).toFixed(2)}B`;
  if (value >= 1e6) return `$${(value / 1e6).toFixed(2)}M`;
  if (value >= 1e3) return `$${(value / 1e3).toFixed(1)}k`;
  return `$${value.toFixed(2)}`;
}

export function cellName(scope: string, authority: string): string {
  return `${scope}/${authority.replace("_", " ")}`;
}

export function sentimentLabel(value: number): string {
  return value >= 0 ? `+${value.toFixed(2)}` : value.toFixed(2);
}
