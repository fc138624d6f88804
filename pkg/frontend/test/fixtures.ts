/** Fixtures mirroring the six-row bundle the backend tests build. */

import type { AnalyticsData, ExhibitData, UiItem } from "../src/types.js";
import { itemsFromExhibit } from "../src/datasource.js";

export const FACET_NAMES = [
  "Worker",
  "Query",
  "Answer",
  "QueryType",
  "HasEntity",
  "QueryLength",
  "WorkTime",
];

const ROWS: Array<[string, string, string, string, string, number, number]> = [
  ["youtube", "1", "A", "navigational", "company", 1, 19],
  ["youtube", "2", "A", "navigational", "company", 1, 7],
  ["youtube", "3", "A", "navigational", "company", 1, 8],
  ["selena gomez", "1", "Same", "informational", "person", 2, 21],
  ["selena gomez", "4", "B", "informational", "person", 2, 37],
  ["selena gomez", "3", "B", "informational", "person", 2, 9],
];

export const EXHIBIT: ExhibitData = {
  types: { Item: { pluralLabel: "Items" } },
  items: ROWS.map(([query, worker, answer, querytype, hasentity, querylength, worktime], i) => ({
    type: "Item",
    label: query,
    worker,
    query,
    answer,
    querytype,
    hasentity,
    querylength,
    worktime,
    image: `images/${i}.svg`,
    thumbnail: `images/${i}_tb.svg`,
  })),
};

export const ANALYTICS: AnalyticsData = {
  units: [
    {
      query: "youtube",
      label_counts: { A: 3 },
      majority: "A",
      disagreement: 0,
      vote_total: 3,
    },
    {
      query: "selena gomez",
      label_counts: { B: 2, Same: 1 },
      majority: "B",
      disagreement: 1 / 3,
      vote_total: 3,
    },
  ],
  workers: [
    { worker_id: "1", assignment_count: 2, mean_work_time_s: 20, agreement_rate: 0.5, share_of_work: 2 / 6 },
    { worker_id: "3", assignment_count: 2, mean_work_time_s: 8.5, agreement_rate: 1, share_of_work: 2 / 6 },
    { worker_id: "2", assignment_count: 1, mean_work_time_s: 7, agreement_rate: 1, share_of_work: 1 / 6 },
    { worker_id: "4", assignment_count: 1, mean_work_time_s: 37, agreement_rate: 1, share_of_work: 1 / 6 },
  ],
  rankers: {
    wins: { r1: 3, r2: 2 },
    same_count: 1,
    column_a_label_count: 3,
    column_b_label_count: 2,
  },
};

export function fixtureItems(): UiItem[] {
  return itemsFromExhibit(EXHIBIT, FACET_NAMES);
}

/** A fetch stub serving the static bundle files. */
export function staticFetch(): (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}> {
  return async (url: string) => {
    const body = url.endsWith("exhibit.json")
      ? EXHIBIT
      : url.endsWith("analytics.json")
        ? ANALYTICS
        : null;
    if (body === null || url.startsWith("/api/")) {
      return { ok: false, status: 404, json: async () => ({}) };
    }
    return { ok: true, status: 200, json: async () => body };
  };
}
