/**
 * Composition root. Builds the page skeleton, wires the session
 * controller to the rendered pieces, and re-renders everything from
 * state on each change. All query behaviour lives on the server; this
 * file is plumbing.
 */

import { ApiClient, DatasetInfo } from "./api.js";
import { AutocompleteBox } from "./autocomplete.js";
import { BuilderState, SessionController } from "./builder.js";
import { renderChipRow } from "./chips.js";
import { pollJob } from "./jobs.js";
import { RelationPanel } from "./relations.js";
import { renderResults } from "./results.js";

export interface AppOptions {
  debounceMs?: number;
  pollIntervalMs?: number;
  maxPolls?: number;
}

export class App {
  readonly controller: SessionController;
  readonly rootSearch: AutocompleteBox;
  private readonly panel: RelationPanel;
  private readonly banner: HTMLElement;
  private readonly notice: HTMLElement;
  private readonly startSection: HTMLElement;
  private readonly builderSection: HTMLElement;
  private readonly chipRow: HTMLElement;
  private readonly resultsSection: HTMLElement;
  private readonly datasetSelect: HTMLSelectElement;
  private readonly executeButton: HTMLButtonElement;
  private readonly undoButton: HTMLButtonElement;
  private readonly sparqlDetails: HTMLDetailsElement;
  private readonly sparqlText: HTMLElement;

  constructor(
    readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: AppOptions = {},
  ) {
    this.controller = new SessionController(api);
    const doc = root.ownerDocument;
    root.classList.add("ontoquery");

    const header = doc.createElement("header");
    const title = doc.createElement("h1");
    title.textContent = "ontoquery";
    this.datasetSelect = doc.createElement("select");
    this.datasetSelect.className = "dataset";
    this.executeButton = doc.createElement("button");
    this.executeButton.type = "button";
    this.executeButton.className = "execute";
    this.executeButton.textContent = "run query";
    this.executeButton.disabled = true;
    header.append(title, this.datasetSelect, this.executeButton);
    root.append(header);

    this.banner = doc.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;
    root.append(this.banner);
    this.notice = doc.createElement("div");
    this.notice.className = "notice";
    this.notice.hidden = true;
    root.append(this.notice);

    this.startSection = doc.createElement("section");
    this.startSection.className = "start";
    const prompt = doc.createElement("p");
    prompt.textContent = "search a concept to begin a query";
    this.startSection.append(prompt);
    this.rootSearch = new AutocompleteBox(this.startSection, api, {
      placeholder: "concept, e.g. gene",
      debounceMs: options.debounceMs,
      onPick: (suggestion) => void this.controller.start(suggestion.class),
      onSuggestions: (suggestions) => this.controller.setSuggestions(suggestions),
      onError: (message) => this.controller.networkTrouble(message),
    });
    root.append(this.startSection);

    this.builderSection = doc.createElement("section");
    this.builderSection.className = "builder";
    this.builderSection.hidden = true;
    this.chipRow = doc.createElement("div");
    this.chipRow.className = "chip-row";
    this.builderSection.append(this.chipRow);

    const controls = doc.createElement("div");
    controls.className = "controls";
    this.undoButton = doc.createElement("button");
    this.undoButton.type = "button";
    this.undoButton.className = "undo";
    this.undoButton.textContent = "undo";
    this.undoButton.addEventListener("click", () => void this.controller.undo());
    const startOver = doc.createElement("button");
    startOver.type = "button";
    startOver.className = "start-over";
    startOver.textContent = "start over";
    startOver.addEventListener("click", () => this.controller.reset());
    controls.append(this.undoButton, startOver);
    this.builderSection.append(controls);

    this.panel = new RelationPanel(this.builderSection, api, this.controller, {
      debounceMs: options.debounceMs,
    });

    this.sparqlDetails = doc.createElement("details");
    this.sparqlDetails.className = "sparql";
    const summary = doc.createElement("summary");
    summary.textContent = "query text";
    this.sparqlText = doc.createElement("pre");
    this.sparqlDetails.append(summary, this.sparqlText);
    this.sparqlDetails.addEventListener("toggle", () => {
      if (this.sparqlDetails.open) void this.controller.refreshSparql();
    });
    this.builderSection.append(this.sparqlDetails);
    root.append(this.builderSection);

    this.resultsSection = doc.createElement("section");
    this.resultsSection.className = "results";
    root.append(this.resultsSection);

    this.executeButton.addEventListener("click", () => {
      void this.controller.execute(this.datasetSelect.value || undefined);
    });

    this.controller.subscribe((state) => this.render(state));
  }

  /** Load the dataset catalog; must succeed before queries can run. */
  async init(): Promise<void> {
    let datasets: DatasetInfo[];
    try {
      datasets = await this.api.datasets();
    } catch (error) {
      const message = error instanceof Error ? error.message : String(error);
      this.controller.networkTrouble(`cannot load datasets: ${message}`);
      return;
    }
    this.datasetSelect.replaceChildren();
    const doc = this.root.ownerDocument;
    for (const dataset of datasets) {
      const option = doc.createElement("option");
      option.value = dataset.id;
      option.textContent = `${dataset.label} (${dataset.tripleCount})`;
      this.datasetSelect.append(option);
    }
    // the union pseudo-dataset is always listed last; default to it
    const last = datasets[datasets.length - 1];
    if (last) this.datasetSelect.value = last.id;
  }

  private render(state: BuilderState): void {
    this.banner.hidden = state.banner === null;
    this.banner.textContent = state.banner ?? "";
    this.notice.hidden = state.notice === null;
    this.notice.textContent = state.notice ?? "";

    const active = state.sessionId !== null;
    this.startSection.hidden = active;
    this.builderSection.hidden = !active;
    this.executeButton.disabled = !active;
    if (!active) {
      this.resultsSection.replaceChildren();
      this.sparqlText.textContent = "";
      return;
    }

    renderChipRow(this.chipRow, state, {
      onFocus: (nodeId) => this.controller.focusChip(nodeId),
      onRemove: (nodeId) => void this.controller.removeChip(nodeId),
    });
    void this.panel.update(state);
    this.sparqlText.textContent = state.sparql?.text ?? "";

    renderResults(this.resultsSection, state, {
      onTab: (tab) => this.controller.selectTab(tab),
      onEnrich: (columnIndex) => void this.enrich(columnIndex),
    });
  }

  private async enrich(columnIndex: number): Promise<void> {
    const job = await this.controller.submitEnrichment(columnIndex);
    if (job === null) return;
    try {
      const settled = await pollJob(this.api, job.jobId, {
        intervalMs: this.options.pollIntervalMs,
        maxPolls: this.options.maxPolls,
      });
      this.controller.finishJob(settled);
    } catch (error) {
      const message = error instanceof Error ? error.message : String(error);
      this.controller.networkTrouble(message);
    }
  }
}

export function mountApp(root: HTMLElement, api: ApiClient, options: AppOptions = {}): App {
  return new App(root, api, options);
}

/* Browser bootstrap: mount onto the host element if the page has one.
 * The API base comes from the ?api= query parameter so the static
 * page can point at any running service. */
if (typeof document !== "undefined") {
  const host = document.getElementById("ontoquery-app");
  if (host) {
    const params = new URLSearchParams(window.location.search);
    const base = params.get("api") ?? "http://127.0.0.1:8750";
    const app = mountApp(host, new ApiClient(base));
    void app.init();
  }
}
