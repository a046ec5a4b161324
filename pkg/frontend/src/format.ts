/** Number formatting. Undefined metric values render as an em dash,
 * never as 0: a 0/0 metric carries no information and must look that way. */

export const UNDEFINED_LABEL = "—";

export function formatMetric(value: number | null | undefined, digits = 3): string {
  if (value === null || value === undefined || Number.isNaN(value)) {
    return UNDEFINED_LABEL;
  }
  const rounded = value.toFixed(digits);
  // trim trailing zeros but keep at least one decimal ("1.0", "0.333")
  return rounded.replace(/(\.\d*?)0+$/, "$1").replace(/\.$/, ".0");
}

export function formatCount(value: number | null | undefined): string {
  if (value === null || value === undefined) return UNDEFINED_LABEL;
  return String(value);
}

export function formatThreshold(value: number | null | undefined): string {
  if (value === null || value === undefined) return "∞"; // nothing matched yet
  return formatMetric(value, 4);
}
