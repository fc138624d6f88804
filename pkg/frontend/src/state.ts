/** View state and its URL-fragment encoding.
 *
 * The whole state lives in the fragment so a reload (or a shared link)
 * reproduces the view: `#view=grid&focus=2&f.Answer=A&f.Answer=Same`.
 * Facet parameters carry an `f.` prefix; repeated keys are within-facet
 * disjunction, exactly like the API query strings.
 */

import type { Selection } from "./types.js";

export type ViewName = "grid" | "worker-workload" | "ranker-distribution";

export const VIEW_NAMES: ViewName[] = ["grid", "worker-workload", "ranker-distribution"];

export interface ViewState {
  selection: Selection;
  focusedItem: number | null;
  view: ViewName;
}

export function emptyState(): ViewState {
  return { selection: new Map(), focusedItem: null, view: "grid" };
}

/** Toggle one facet value; empty facet sets are dropped from the selection. */
export function toggleValue(state: ViewState, facet: string, token: string): ViewState {
  const selection: Selection = new Map(
    [...state.selection].map(([name, values]) => [name, new Set(values)]),
  );
  const values = selection.get(facet) ?? new Set<string>();
  if (values.has(token)) {
    values.delete(token);
  } else {
    values.add(token);
  }
  if (values.size === 0) {
    selection.delete(facet);
  } else {
    selection.set(facet, values);
  }
  return { ...state, selection };
}

/** Replace a facet's accepted set wholesale (chart-to-filter). */
export function setFacet(state: ViewState, facet: string, tokens: string[]): ViewState {
  const selection: Selection = new Map(
    [...state.selection].map(([name, values]) => [name, new Set(values)]),
  );
  if (tokens.length === 0) {
    selection.delete(facet);
  } else {
    selection.set(facet, new Set(tokens));
  }
  return { ...state, selection };
}

export function clearSelection(state: ViewState): ViewState {
  return { ...state, selection: new Map() };
}

/** Encode the state as a URL fragment (without the leading '#'). */
export function encodeFragment(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  if (state.focusedItem !== null) params.set("focus", String(state.focusedItem));
  for (const facet of [...state.selection.keys()].sort()) {
    for (const token of [...state.selection.get(facet)!].sort()) {
      params.append(`f.${facet}`, token);
    }
  }
  return params.toString();
}

/** Decode a fragment back into a state; unknown parameters are ignored. */
export function decodeFragment(fragment: string): ViewState {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const state = emptyState();
  const view = params.get("view");
  if (view && (VIEW_NAMES as string[]).includes(view)) state.view = view as ViewName;
  const focus = params.get("focus");
  if (focus !== null && /^\d+$/.test(focus)) state.focusedItem = Number(focus);
  for (const [key, token] of params) {
    if (!key.startsWith("f.")) continue;
    const facet = key.slice(2);
    if (!facet) continue;
    const values = state.selection.get(facet) ?? new Set<string>();
    values.add(token);
    state.selection.set(facet, values);
  }
  return state;
}

/** Structural equality of two selections (order-insensitive). */
export function sameSelection(a: Selection, b: Selection): boolean {
  if (a.size !== b.size) return false;
  for (const [facet, values] of a) {
    const other = b.get(facet);
    if (!other || other.size !== values.size) return false;
    for (const token of values) if (!other.has(token)) return false;
  }
  return true;
}

/** API query string for a selection ("Answer=A&Answer=Same"). */
export function selectionQuery(selection: Selection): string {
  const params = new URLSearchParams();
  for (const facet of [...selection.keys()].sort()) {
    for (const token of [...selection.get(facet)!].sort()) {
      params.append(facet, token);
    }
  }
  return params.toString();
}
