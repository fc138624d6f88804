/** Client-side facet engine, used in static mode (no API).
 *
 * The semantics mirror the server exactly: a selection is a conjunction
 * across facets and a disjunction within a facet, and a facet's counts
 * ignore that facet's own constraint (multi-select faceting), so displayed
 * counts never diverge between modes.
 */

import type { FacetCounts, FacetValue, Selection, UiItem } from "./types.js";

/** Canonical text token for a facet value ("19", "8.5", "youtube"). */
export function valueToken(value: FacetValue): string {
  return typeof value === "number" ? String(value) : value;
}

function matches(item: UiItem, selection: Selection, skipFacet?: string): boolean {
  for (const [facet, accepted] of selection) {
    if (facet === skipFacet) continue;
    const value = item.facets[facet];
    if (value === undefined || !accepted.has(valueToken(value))) return false;
  }
  return true;
}

/** Items satisfying the selection, original order preserved. */
export function applySelection(items: UiItem[], selection: Selection): UiItem[] {
  return items.filter((item) => matches(item, selection));
}

/** Value counts per facet under the selection, own constraint removed. */
export function facetCounts(
  items: UiItem[],
  selection: Selection,
  facetNames: string[],
): FacetCounts {
  const counts: FacetCounts = {};
  for (const facet of facetNames) {
    const counter = new Map<string, number>();
    let allNumeric = true;
    for (const item of items) {
      if (!matches(item, selection, facet)) continue;
      const value = item.facets[facet];
      if (value === undefined) continue;
      if (typeof value !== "number") allNumeric = false;
      const token = valueToken(value);
      counter.set(token, (counter.get(token) ?? 0) + 1);
    }
    const tokens = [...counter.keys()].sort(
      allNumeric ? (a, b) => Number(a) - Number(b) : undefined,
    );
    const byValue: Record<string, number> = {};
    for (const token of tokens) byValue[token] = counter.get(token)!;
    counts[facet] = byValue;
  }
  return counts;
}
