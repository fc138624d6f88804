/** HTML renderers: pure functions from data to markup strings.
 *
 * All interactivity is attached by the app through event delegation on
 * `data-*` attributes, so these stay testable without a DOM.
 */

import type { ViewName } from "./state.js";
import type {
  FacetCounts,
  RankerReport,
  Selection,
  UiItem,
  WorkerSummary,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderSidebar(
  facetNames: string[],
  counts: FacetCounts,
  selection: Selection,
): string {
  const sections = facetNames.map((facet) => {
    const chosen = selection.get(facet) ?? new Set<string>();
    const rows = Object.entries(counts[facet] ?? {})
      .map(([token, count]) => {
        const selected = chosen.has(token) ? " selected" : "";
        return (
          `<li class="facet-value${selected}" data-facet="${escapeHtml(facet)}" ` +
          `data-value="${escapeHtml(token)}">` +
          `<span class="value">${escapeHtml(token)}</span>` +
          `<span class="count">${count}</span></li>`
        );
      })
      .join("");
    return (
      `<section class="facet" data-facet="${escapeHtml(facet)}">` +
      `<h2>${escapeHtml(facet)}</h2><ul class="facet-values">${rows}</ul></section>`
    );
  });
  return sections.join("");
}

export function renderGrid(items: UiItem[]): string {
  if (items.length === 0) {
    return '<p class="empty">No items match the current selection.</p>';
  }
  const tiles = items.map(
    (item) =>
      `<figure class="tile" data-item="${item.id}">` +
      `<img src="${escapeHtml(item.thumbnail)}" alt="${escapeHtml(item.label)}" ` +
      `loading="lazy" onerror="this.closest('figure').classList.add('missing')">` +
      `<figcaption>${escapeHtml(item.label)}</figcaption></figure>`,
  );
  return tiles.join("");
}

export function renderDetail(item: UiItem): string {
  const rows = Object.entries(item.facets)
    .map(
      ([facet, value]) =>
        `<tr><th>${escapeHtml(facet)}</th><td>${escapeHtml(String(value))}</td></tr>`,
    )
    .join("");
  const description = item.description
    ? `<p class="description">${escapeHtml(item.description)}</p>`
    : "";
  return (
    `<div class="detail-card" data-item="${item.id}">` +
    `<button class="close" data-action="close-detail" aria-label="Close">&times;</button>` +
    `<img src="${escapeHtml(item.image)}" alt="${escapeHtml(item.label)}" ` +
    `onerror="this.classList.add('missing')">` +
    `<h2>${escapeHtml(item.label)}</h2>${description}` +
    `<table class="facet-table">${rows}</table></div>`
  );
}

export function renderWorkerChart(workers: WorkerSummary[]): string {
  if (workers.length === 0) return '<p class="empty">No worker data.</p>';
  const max = Math.max(...workers.map((w) => w.assignment_count));
  const bars = workers.map((worker) => {
    const width = max > 0 ? (worker.assignment_count / max) * 100 : 0;
    const share = (worker.share_of_work * 100).toFixed(1);
    return (
      `<div class="bar-row" data-worker="${escapeHtml(worker.worker_id)}">` +
      `<span class="bar-label">${escapeHtml(worker.worker_id)}</span>` +
      `<span class="bar" style="width:${width}%"></span>` +
      `<span class="bar-count">${worker.assignment_count} (${share}%)</span></div>`
    );
  });
  return (
    `<h2>Worker workload</h2><p class="hint">Click a bar to filter the grid.</p>` +
    `<div class="bar-chart worker-chart">${bars.join("")}</div>`
  );
}

export function renderRankerChart(report: RankerReport): string {
  const entries: Array<[string, number]> = [
    ...Object.entries(report.wins),
    ["same", report.same_count],
  ];
  const max = Math.max(1, ...entries.map(([, count]) => count));
  const bars = entries.map(
    ([name, count]) =>
      `<div class="bar-row" data-outcome="${escapeHtml(name)}">` +
      `<span class="bar-label">${escapeHtml(name)}</span>` +
      `<span class="bar" style="width:${(count / max) * 100}%"></span>` +
      `<span class="bar-count">${count}</span></div>`,
  );
  return (
    `<h2>Ranker preference</h2>` +
    `<div class="bar-chart ranker-chart">${bars.join("")}</div>` +
    `<p class="hint">Raw column labels: A ${report.column_a_label_count}, ` +
    `B ${report.column_b_label_count} (position-bias check).</p>`
  );
}

export function renderTabs(active: ViewName): string {
  const tabs: Array<[ViewName, string]> = [
    ["grid", "Grid"],
    ["worker-workload", "Workers"],
    ["ranker-distribution", "Rankers"],
  ];
  return tabs
    .map(
      ([view, title]) =>
        `<button class="tab${view === active ? " active" : ""}" ` +
        `data-view="${view}">${title}</button>`,
    )
    .join("");
}

export function renderErrorBanner(message: string): string {
  return `<div class="error-banner" role="alert">${escapeHtml(message)}</div>`;
}
