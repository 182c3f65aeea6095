/**
 * Results panel: the specific/general tab pair, the answer table for
 * the active tab (general rows showing their subclass witness), and
 * the enrichment strip with job progress and reports.
 */

import { EnrichableColumn, JobView, ResultRow, ResultTable } from "./api.js";
import { BuilderState, ResultTab } from "./builder.js";

export interface ResultHandlers {
  onTab: (tab: ResultTab) => void;
  onEnrich: (columnIndex: number) => void;
}

function witnessCaption(row: ResultRow): string {
  const entries = Object.entries(row.witness).sort((a, b) => Number(a[0]) - Number(b[0]));
  return entries.map(([, ref]) => `via ${ref.label}`).join(", ");
}

function renderTable(
  doc: Document,
  table: ResultTable,
  withWitness: boolean,
): HTMLElement {
  if (table.rows.length === 0) {
    const empty = doc.createElement("div");
    empty.className = "no-results";
    empty.textContent = "no results";
    return empty;
  }

  const el = doc.createElement("table");
  el.className = "answers";
  const head = doc.createElement("tr");
  for (const column of table.columns) {
    const th = doc.createElement("th");
    th.textContent = column.label;
    head.append(th);
  }
  const extras = ["dataset"];
  if (withWitness) extras.push("admitted by");
  for (const caption of extras) {
    const th = doc.createElement("th");
    th.className = "meta";
    th.textContent = caption;
    head.append(th);
  }
  el.append(head);

  for (const row of table.rows) {
    const tr = doc.createElement("tr");
    for (const value of row.values) {
      const td = doc.createElement("td");
      td.textContent = value.display;
      td.title = value.value;
      if (value.kind === "literal") td.classList.add("literal");
      tr.append(td);
    }
    const provenance = doc.createElement("td");
    provenance.className = "provenance";
    provenance.textContent = row.provenance;
    tr.append(provenance);
    if (withWitness) {
      const witness = doc.createElement("td");
      witness.className = "witness";
      witness.textContent = witnessCaption(row);
      tr.append(witness);
    }
    el.append(tr);
  }
  return el;
}

function renderTabs(doc: Document, state: BuilderState, handlers: ResultHandlers): HTMLElement {
  const result = state.lastResult!;
  const bar = doc.createElement("div");
  bar.className = "tabs";
  const tabs: Array<[ResultTab, string, number]> = [
    ["specific", "Specific results", result.specific.rows.length],
    ["general", "General results", result.general.rows.length],
  ];
  for (const [tab, caption, count] of tabs) {
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "tab";
    button.dataset.tab = tab;
    if (tab === state.resultTab) button.classList.add("active");
    button.textContent = `${caption} (${count})`;
    button.addEventListener("click", () => handlers.onTab(tab));
    bar.append(button);
  }
  if (result.cacheHit) {
    const badge = doc.createElement("span");
    badge.className = "cache-badge";
    badge.textContent = "cached";
    bar.append(badge);
  }
  return bar;
}

function enrichCaption(column: EnrichableColumn, state: BuilderState): string {
  const label = state.lastResult!.specific.columns[column.columnIndex]?.label ?? "";
  return `align ${label} (${column.reason})`;
}

function renderJob(doc: Document, job: JobView): HTMLElement {
  const item = doc.createElement("div");
  item.className = `job ${job.status}`;
  item.dataset.jobId = job.jobId;
  if (job.status === "failed") {
    const note = doc.createElement("p");
    note.className = "diagnostic";
    note.textContent = `alignment failed: ${job.diagnostic ?? "no diagnostic"}`;
    item.append(note);
    return item;
  }
  const heading = doc.createElement("p");
  heading.textContent = `alignment of column ${job.columnIndex} (${job.rowOrdinals.length} rows)`;
  item.append(heading);
  const list = doc.createElement("ul");
  list.className = "report";
  for (const line of job.report ?? []) {
    const li = doc.createElement("li");
    li.textContent = `row ${line.row}: ${line.summary} (score ${line.score})`;
    list.append(li);
  }
  item.append(list);
  return item;
}

export function renderResults(
  container: HTMLElement,
  state: BuilderState,
  handlers: ResultHandlers,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (!state.lastResult) return;

  container.append(renderTabs(doc, state, handlers));

  const active = state.resultTab === "specific" ? state.lastResult.specific : state.lastResult.general;
  const body = doc.createElement("div");
  body.className = `tab-body ${state.resultTab}`;
  body.append(renderTable(doc, active, state.resultTab === "general"));
  container.append(body);

  const strip = doc.createElement("div");
  strip.className = "enrichment";
  for (const column of state.lastResult.enrichableColumns) {
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "enrich";
    button.dataset.column = String(column.columnIndex);
    button.textContent = enrichCaption(column, state);
    button.addEventListener("click", () => handlers.onEnrich(column.columnIndex));
    strip.append(button);
  }
  for (const jobId of state.pendingJobs) {
    const spinner = doc.createElement("div");
    spinner.className = "job pending";
    spinner.dataset.jobId = jobId;
    spinner.textContent = "aligning…";
    strip.append(spinner);
  }
  for (const job of state.finishedJobs) {
    strip.append(renderJob(doc, job));
  }
  if (strip.childElementCount > 0) container.append(strip);
}
