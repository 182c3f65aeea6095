/**
 * Concept autocomplete: a debounced text input backed by /suggest,
 * rendering a drop-down of labelled classes. Hovering an entry shows
 * its annotation (description, alternate labels, applicable
 * properties); picking one hands the suggestion to the caller.
 */

import { ApiClient, ConceptSuggestion } from "./api.js";

export interface AutocompleteOptions {
  placeholder?: string;
  debounceMs?: number;
  minLength?: number;
  onPick: (suggestion: ConceptSuggestion) => void;
  onSuggestions?: (suggestions: ConceptSuggestion[]) => void;
  onError?: (message: string) => void;
}

const DEFAULT_DEBOUNCE_MS = 300;

export class AutocompleteBox {
  readonly root: HTMLElement;
  readonly input: HTMLInputElement;
  private readonly list: HTMLUListElement;
  private suggestions: ConceptSuggestion[] = [];
  private highlighted = 0;
  private timer: ReturnType<typeof setTimeout> | undefined;
  private requestSeq = 0;

  constructor(
    parent: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: AutocompleteOptions,
  ) {
    const doc = parent.ownerDocument;
    this.root = doc.createElement("div");
    this.root.className = "autocomplete";
    this.input = doc.createElement("input");
    this.input.type = "text";
    this.input.placeholder = options.placeholder ?? "search concepts";
    this.list = doc.createElement("ul");
    this.list.className = "suggestions";
    this.root.append(this.input, this.list);
    parent.append(this.root);

    this.input.addEventListener("input", () => this.scheduleSearch());
    this.input.addEventListener("keydown", (event) => this.onKey(event));
  }

  private scheduleSearch(): void {
    if (this.timer !== undefined) clearTimeout(this.timer);
    const delay = this.options.debounceMs ?? DEFAULT_DEBOUNCE_MS;
    this.timer = setTimeout(() => void this.search(this.input.value), delay);
  }

  /** Query the service now, bypassing the debounce. */
  async search(prefix: string): Promise<void> {
    const trimmed = prefix.trim();
    if (trimmed.length < (this.options.minLength ?? 1)) {
      this.render([]);
      return;
    }
    const seq = ++this.requestSeq;
    try {
      const suggestions = await this.api.suggest(trimmed);
      if (seq !== this.requestSeq) return; // a newer keystroke won
      this.suggestions = suggestions;
      this.highlighted = 0;
      this.render(suggestions);
      this.options.onSuggestions?.(suggestions);
    } catch (error) {
      if (seq !== this.requestSeq) return;
      this.render([]);
      const message = error instanceof Error ? error.message : String(error);
      this.options.onError?.(message);
    }
  }

  private render(suggestions: ConceptSuggestion[]): void {
    const doc = this.root.ownerDocument;
    this.list.replaceChildren();
    if (suggestions.length === 0) {
      if (this.input.value.trim().length >= (this.options.minLength ?? 1)) {
        const empty = doc.createElement("li");
        empty.className = "empty";
        empty.textContent = "no matches";
        this.list.append(empty);
      }
      return;
    }
    suggestions.forEach((suggestion, index) => {
      const item = doc.createElement("li");
      item.dataset.class = suggestion.class;
      if (index === this.highlighted) item.classList.add("highlighted");

      const label = doc.createElement("span");
      label.className = "label";
      label.textContent = suggestion.label;
      item.append(label);
      if (suggestion.matchKind === "altLabel") {
        const kind = doc.createElement("span");
        kind.className = "match-kind";
        kind.textContent = "also known";
        item.append(kind);
      }
      item.append(this.annotationPopup(suggestion));

      item.addEventListener("mousedown", (event) => {
        event.preventDefault();
        this.pick(suggestion);
      });
      this.list.append(item);
    });
  }

  private annotationPopup(suggestion: ConceptSuggestion): HTMLElement {
    const doc = this.root.ownerDocument;
    const popup = doc.createElement("div");
    popup.className = "annotation-popup";
    const { description, altLabels, properties } = suggestion.annotation;
    if (description) {
      const p = doc.createElement("p");
      p.className = "description";
      p.textContent = description;
      popup.append(p);
    }
    if (altLabels.length > 0) {
      const p = doc.createElement("p");
      p.className = "alt-labels";
      p.textContent = `also: ${altLabels.join(", ")}`;
      popup.append(p);
    }
    if (properties.length > 0) {
      const p = doc.createElement("p");
      p.className = "properties";
      p.textContent = `properties: ${properties.join(", ")}`;
      popup.append(p);
    }
    return popup;
  }

  private onKey(event: KeyboardEvent): void {
    if (this.suggestions.length === 0) return;
    if (event.key === "ArrowDown" || event.key === "ArrowUp") {
      event.preventDefault();
      const delta = event.key === "ArrowDown" ? 1 : -1;
      const count = this.suggestions.length;
      this.highlighted = (this.highlighted + delta + count) % count;
      this.render(this.suggestions);
    } else if (event.key === "Enter") {
      event.preventDefault();
      const chosen = this.suggestions[this.highlighted];
      if (chosen) this.pick(chosen);
    } else if (event.key === "Escape") {
      this.clear();
    }
  }

  private pick(suggestion: ConceptSuggestion): void {
    this.input.value = suggestion.label;
    this.clear();
    this.options.onPick(suggestion);
  }

  clear(): void {
    this.suggestions = [];
    this.list.replaceChildren();
  }

  /** Drop-down entries currently shown, in rank order. */
  get current(): readonly ConceptSuggestion[] {
    return this.suggestions;
  }
}
