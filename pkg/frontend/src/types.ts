/** Shared types for the explorer. */

export type FacetValue = string | number;

/** One collection item, normalized from either the API or exhibit.json. */
export interface UiItem {
  id: number;
  label: string;
  description: string;
  image: string;
  thumbnail: string;
  /** Facet values keyed by facet display name ("Worker", "Answer", ...). */
  facets: Record<string, FacetValue>;
}

/** Per-facet value counts: facet name -> value token -> count. */
export type FacetCounts = Record<string, Record<string, number>>;

/** Active selection: facet name -> accepted value tokens. */
export type Selection = Map<string, Set<string>>;

export interface WorkerSummary {
  worker_id: string;
  assignment_count: number;
  mean_work_time_s: number;
  agreement_rate: number | null;
  share_of_work: number;
}

export interface RankerReport {
  wins: Record<string, number>;
  same_count: number;
  column_a_label_count: number;
  column_b_label_count: number;
}

export interface UnitSummary {
  query: string;
  label_counts: Record<string, number>;
  majority: string | null;
  disagreement: number;
  vote_total: number;
}

/** exhibit.json shape (facet keys are lowercased display names). */
export interface ExhibitData {
  types: { Item: { pluralLabel: string } };
  items: Array<Record<string, unknown>>;
}

export interface AnalyticsData {
  units: UnitSummary[];
  workers: WorkerSummary[];
  rankers: RankerReport;
}
