/** Data access in two modes.
 *
 * Live mode talks to the serving API (`/api/...`); static mode fetches
 * `exhibit.json` + `analytics.json` once and computes facet counts
 * client-side with the same semantics, so a bundle directory behind any
 * static file server explores identically.
 */

import { applySelection, facetCounts } from "./facetmath.js";
import { selectionQuery } from "./state.js";
import type {
  AnalyticsData,
  ExhibitData,
  FacetCounts,
  FacetValue,
  RankerReport,
  Selection,
  UiItem,
  WorkerSummary,
} from "./types.js";

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class DataSourceError extends Error {}

export interface DataSource {
  readonly mode: "api" | "static";
  facetNames(): string[];
  items(selection: Selection): Promise<UiItem[]>;
  facets(selection: Selection): Promise<FacetCounts>;
  workers(): Promise<WorkerSummary[]>;
  rankers(): Promise<RankerReport>;
}

async function getJson(fetchFn: FetchLike, url: string): Promise<unknown> {
  let response;
  try {
    response = await fetchFn(url);
  } catch (cause) {
    throw new DataSourceError(`cannot reach ${url}`);
  }
  if (!response.ok) {
    throw new DataSourceError(`${url} answered ${response.status}`);
  }
  return response.json();
}

/** Exhibit item key for a facet display name: lowercase, no whitespace. */
export function facetKey(name: string): string {
  return name.toLowerCase().replace(/\s+/g, "");
}

function withQuery(path: string, selection: Selection): string {
  const query = selectionQuery(selection);
  return query ? `${path}?${query}` : path;
}

interface ApiItem {
  id: number;
  name: string;
  description: string;
  image: string;
  thumbnail: string;
  facets: Record<string, FacetValue>;
}

export class ApiDataSource implements DataSource {
  readonly mode = "api";

  private constructor(
    private readonly fetchFn: FetchLike,
    private readonly names: string[],
    private readonly base: string,
  ) {}

  /** Probe the API; resolves to null when it is not there. */
  static async probe(fetchFn: FetchLike, base = ""): Promise<ApiDataSource | null> {
    try {
      const counts = (await getJson(fetchFn, `${base}/api/facets`)) as FacetCounts;
      return new ApiDataSource(fetchFn, Object.keys(counts), base);
    } catch {
      return null;
    }
  }

  facetNames(): string[] {
    return [...this.names];
  }

  async items(selection: Selection): Promise<UiItem[]> {
    const url = withQuery(`${this.base}/api/items`, selection);
    const payload = (await getJson(this.fetchFn, url)) as ApiItem[];
    return payload.map((item) => ({
      id: item.id,
      label: item.name,
      description: item.description,
      image: item.image,
      thumbnail: item.thumbnail,
      facets: item.facets,
    }));
  }

  async facets(selection: Selection): Promise<FacetCounts> {
    const url = withQuery(`${this.base}/api/facets`, selection);
    return (await getJson(this.fetchFn, url)) as FacetCounts;
  }

  async workers(): Promise<WorkerSummary[]> {
    return (await getJson(this.fetchFn, `${this.base}/api/analytics/workers`)) as WorkerSummary[];
  }

  async rankers(): Promise<RankerReport> {
    return (await getJson(this.fetchFn, `${this.base}/api/analytics/rankers`)) as RankerReport;
  }
}

const RESERVED_KEYS = new Set(["type", "label", "image", "thumbnail"]);

/** Normalize exhibit.json items to UiItems under the given facet names. */
export function itemsFromExhibit(data: ExhibitData, facetNames: string[]): UiItem[] {
  return data.items.map((raw, index) => {
    const facets: Record<string, FacetValue> = {};
    for (const name of facetNames) {
      const value = raw[facetKey(name)];
      if (typeof value === "string" || typeof value === "number") {
        facets[name] = value;
      }
    }
    return {
      id: index,
      label: typeof raw.label === "string" ? raw.label : String(index),
      description: "",
      image: typeof raw.image === "string" ? raw.image : "",
      thumbnail: typeof raw.thumbnail === "string" ? raw.thumbnail : "",
      facets,
    };
  });
}

/** Infer facet display names from exhibit item keys when the page has none. */
export function facetNamesFromExhibit(data: ExhibitData): string[] {
  const keys = new Set<string>();
  for (const item of data.items) {
    for (const key of Object.keys(item)) {
      if (!RESERVED_KEYS.has(key)) keys.add(key);
    }
  }
  return [...keys];
}

export class StaticDataSource implements DataSource {
  readonly mode = "static";

  constructor(
    private readonly allItems: UiItem[],
    private readonly analytics: AnalyticsData,
    private readonly names: string[],
  ) {}

  static async load(fetchFn: FetchLike, facetNames?: string[]): Promise<StaticDataSource> {
    const exhibit = (await getJson(fetchFn, "exhibit.json")) as ExhibitData;
    const analytics = (await getJson(fetchFn, "analytics.json")) as AnalyticsData;
    const names =
      facetNames && facetNames.length > 0 ? facetNames : facetNamesFromExhibit(exhibit);
    return new StaticDataSource(itemsFromExhibit(exhibit, names), analytics, names);
  }

  facetNames(): string[] {
    return [...this.names];
  }

  async items(selection: Selection): Promise<UiItem[]> {
    return applySelection(this.allItems, selection);
  }

  async facets(selection: Selection): Promise<FacetCounts> {
    return facetCounts(this.allItems, selection, this.names);
  }

  async workers(): Promise<WorkerSummary[]> {
    return this.analytics.workers;
  }

  async rankers(): Promise<RankerReport> {
    return this.analytics.rankers;
  }
}

/** Live API when reachable, static bundle otherwise. */
export async function createDataSource(
  fetchFn: FetchLike,
  facetNames?: string[],
): Promise<DataSource> {
  const api = await ApiDataSource.probe(fetchFn);
  if (api !== null) return api;
  return StaticDataSource.load(fetchFn, facetNames);
}
