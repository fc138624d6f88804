/** Entry point: mount the explorer onto the bundle's index.html. */

import { ExplorerApp, type Mounts } from "./app.js";
import { createDataSource } from "./datasource.js";

function pageFacetNames(): string[] {
  return [...document.querySelectorAll<HTMLElement>("#facet-sidebar [data-facet]")]
    .map((section) => section.dataset.facet ?? "")
    .filter((name) => name.length > 0);
}

function requireMount(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing mount point #${id}`);
  return element;
}

async function boot(): Promise<void> {
  const mounts: Mounts = {
    sidebar: requireMount("facet-sidebar"),
    grid: requireMount("item-grid"),
    charts: requireMount("charts"),
    tabs: requireMount("view-tabs"),
    detail: requireMount("item-detail"),
  };
  const source = await createDataSource(
    (url) => fetch(url),
    pageFacetNames(),
  );
  await new ExplorerApp(source, mounts).start();
}

void boot();
