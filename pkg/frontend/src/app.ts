/** Browser wiring: event delegation, hash routing, stale-response guard.
 *
 * The app is read-only; every interaction only changes the view state,
 * which lives in the URL fragment. At most one refresh is in flight per
 * state change; responses arriving out of order are discarded by sequence
 * number.
 */

import type { DataSource } from "./datasource.js";
import {
  decodeFragment,
  emptyState,
  encodeFragment,
  sameSelection,
  setFacet,
  toggleValue,
  type ViewState,
} from "./state.js";
import {
  renderDetail,
  renderErrorBanner,
  renderGrid,
  renderRankerChart,
  renderSidebar,
  renderTabs,
  renderWorkerChart,
} from "./render.js";
import type { UiItem } from "./types.js";

export interface Mounts {
  sidebar: HTMLElement;
  grid: HTMLElement;
  charts: HTMLElement;
  tabs: HTMLElement;
  detail: HTMLElement;
}

export class ExplorerApp {
  private state: ViewState = emptyState();
  private sequence = 0;
  private items: UiItem[] = [];

  constructor(
    private readonly source: DataSource,
    private readonly mounts: Mounts,
  ) {}

  async start(): Promise<void> {
    this.state = decodeFragment(window.location.hash);
    this.bindEvents();
    await this.refresh();
  }

  private bindEvents(): void {
    this.mounts.sidebar.addEventListener("click", (event) => {
      const row = (event.target as HTMLElement).closest<HTMLElement>("[data-value]");
      if (!row || !row.dataset.facet) return;
      this.update(toggleValue(this.state, row.dataset.facet, row.dataset.value ?? ""));
    });
    this.mounts.grid.addEventListener("click", (event) => {
      const tile = (event.target as HTMLElement).closest<HTMLElement>("[data-item]");
      if (!tile) return;
      this.update({ ...this.state, focusedItem: Number(tile.dataset.item) });
    });
    this.mounts.tabs.addEventListener("click", (event) => {
      const tab = (event.target as HTMLElement).closest<HTMLElement>("[data-view]");
      if (!tab) return;
      this.update({ ...this.state, view: tab.dataset.view as ViewState["view"] });
    });
    this.mounts.charts.addEventListener("click", (event) => {
      const bar = (event.target as HTMLElement).closest<HTMLElement>("[data-worker]");
      if (!bar || !bar.dataset.worker) return;
      const next = setFacet(this.state, "Worker", [bar.dataset.worker]);
      this.update({ ...next, view: "grid" });
    });
    this.mounts.detail.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.closest("[data-action='close-detail']") || target === this.mounts.detail) {
        this.update({ ...this.state, focusedItem: null });
      }
    });
    window.addEventListener("keydown", (event) => {
      if (event.key === "Escape" && this.state.focusedItem !== null) {
        this.update({ ...this.state, focusedItem: null });
      }
    });
    window.addEventListener("hashchange", () => {
      const next = decodeFragment(window.location.hash);
      const changed =
        !sameSelection(next.selection, this.state.selection) ||
        next.view !== this.state.view ||
        next.focusedItem !== this.state.focusedItem;
      if (changed) {
        this.state = next;
        void this.refresh();
      }
    });
  }

  private update(next: ViewState): void {
    const selectionChanged = !sameSelection(next.selection, this.state.selection);
    this.state = next;
    const fragment = encodeFragment(next);
    if (window.location.hash.replace(/^#/, "") !== fragment) {
      // hashchange will fire, but refresh now for snappier feedback
      history.replaceState(null, "", `#${fragment}`);
    }
    void this.refresh(selectionChanged);
  }

  private async refresh(selectionChanged = true): Promise<void> {
    const ticket = ++this.sequence;
    this.renderChrome();
    try {
      if (selectionChanged || this.items.length === 0) {
        const [items, counts] = await Promise.all([
          this.source.items(this.state.selection),
          this.source.facets(this.state.selection),
        ]);
        if (ticket !== this.sequence) return; // stale response
        this.items = items;
        this.mounts.sidebar.innerHTML = renderSidebar(
          this.source.facetNames(),
          counts,
          this.state.selection,
        );
        this.mounts.grid.innerHTML = renderGrid(items);
      }
      if (this.state.view === "worker-workload") {
        const workers = await this.source.workers();
        if (ticket !== this.sequence) return;
        this.mounts.charts.innerHTML = renderWorkerChart(workers);
      } else if (this.state.view === "ranker-distribution") {
        const rankers = await this.source.rankers();
        if (ticket !== this.sequence) return;
        this.mounts.charts.innerHTML = renderRankerChart(rankers);
      }
      this.mounts.sidebar.classList.remove("stale");
      this.renderDetailOverlay();
    } catch (problem) {
      if (ticket !== this.sequence) return;
      this.mounts.sidebar.classList.add("stale"); // keep old counts, marked
      this.mounts.grid.insertAdjacentHTML(
        "afterbegin",
        renderErrorBanner(`Data request failed: ${String(problem)}`),
      );
    }
  }

  private renderChrome(): void {
    this.mounts.tabs.innerHTML = renderTabs(this.state.view);
    const showCharts = this.state.view !== "grid";
    this.mounts.charts.hidden = !showCharts;
    this.mounts.grid.hidden = showCharts;
  }

  private renderDetailOverlay(): void {
    const focused = this.items.find((item) => item.id === this.state.focusedItem);
    if (focused === undefined) {
      this.mounts.detail.hidden = true;
      this.mounts.detail.innerHTML = "";
      return;
    }
    this.mounts.detail.innerHTML = renderDetail(focused);
    this.mounts.detail.hidden = false;
  }
}
