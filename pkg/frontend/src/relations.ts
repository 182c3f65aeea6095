/**
 * Extension panel for the focused chip.
 *
 * Class chips list their applicable relations, outgoing and incoming,
 * fetched from the service. Picking a data property attaches a value
 * chip at once; picking an object property opens a concept
 * autocomplete for the target, so every step of a query can be built
 * from suggestions alone. Literal chips get a comparison form instead.
 * The server stays the judge of what fits: a rejected combination
 * comes back as an inline error on the parent chip.
 */

import { ApiClient, NodeView, RelationInfo } from "./api.js";
import { AutocompleteBox } from "./autocomplete.js";
import { BuilderState, SessionController } from "./builder.js";

export interface RelationPanelOptions {
  debounceMs?: number;
}

const COMPARATORS = ["=", "!=", "<", "<=", ">", ">="];

export class RelationPanel {
  readonly root: HTMLElement;
  private renderedKey: string | null = null;
  private seq = 0;

  constructor(
    parent: HTMLElement,
    private readonly api: ApiClient,
    private readonly controller: SessionController,
    private readonly options: RelationPanelOptions = {},
  ) {
    this.root = parent.ownerDocument.createElement("div");
    this.root.className = "relation-panel";
    parent.append(this.root);
  }

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  /** Re-render for the given state; fetches only when the focus moved. */
  async update(state: BuilderState): Promise<void> {
    const node = state.view?.nodes.find((n) => n.id === state.focusedNodeId) ?? null;
    const key =
      node === null
        ? "none"
        : `${state.sessionId}:${node.id}:${node.kind}:${node.class ?? node.property}`;
    if (key === this.renderedKey) return;
    this.renderedKey = key;
    const seq = ++this.seq;

    this.root.replaceChildren();
    if (node === null) {
      const hint = this.doc.createElement("p");
      hint.className = "hint";
      hint.textContent = "select a chip to extend the query";
      this.root.append(hint);
      return;
    }
    if (node.kind === "literal") {
      this.root.append(this.filterForm(node));
      return;
    }

    const loading = this.doc.createElement("p");
    loading.className = "hint";
    loading.textContent = `relations of ${node.label}…`;
    this.root.append(loading);

    let outgoing: RelationInfo[];
    let incoming: RelationInfo[];
    try {
      [outgoing, incoming] = await Promise.all([
        this.api.relations(node.class!, "outgoing"),
        this.api.relations(node.class!, "incoming"),
      ]);
    } catch (error) {
      if (seq !== this.seq) return;
      this.renderedKey = null; // retry on the next focus
      const message = error instanceof Error ? error.message : String(error);
      this.controller.networkTrouble(`cannot load relations: ${message}`);
      this.root.replaceChildren();
      return;
    }
    if (seq !== this.seq) return;

    this.root.replaceChildren();
    const heading = this.doc.createElement("p");
    heading.className = "panel-heading";
    heading.textContent = `extend ${node.label}`;
    this.root.append(heading);
    this.root.append(this.relationGroup(node, outgoing, "outgoing"));
    this.root.append(this.relationGroup(node, incoming, "incoming"));
  }

  private relationGroup(
    node: NodeView,
    relations: RelationInfo[],
    direction: "outgoing" | "incoming",
  ): HTMLElement {
    const group = this.doc.createElement("div");
    group.className = `relation-group ${direction}`;
    const caption = this.doc.createElement("p");
    caption.className = "group-caption";
    caption.textContent = direction === "outgoing" ? "relations from here" : "relations to here";
    group.append(caption);
    const list = this.doc.createElement("ul");
    list.className = "relations";
    for (const relation of relations) {
      list.append(this.relationItem(node, relation, direction));
    }
    if (relations.length === 0) {
      const empty = this.doc.createElement("li");
      empty.className = "empty";
      empty.textContent = "none";
      list.append(empty);
    }
    group.append(list);
    return group;
  }

  private relationItem(
    node: NodeView,
    relation: RelationInfo,
    direction: "outgoing" | "incoming",
  ): HTMLElement {
    const item = this.doc.createElement("li");
    const button = this.doc.createElement("button");
    button.type = "button";
    button.className = "relation";
    button.dataset.property = relation.property;
    button.dataset.direction = direction;
    button.textContent =
      relation.kind === "data" ? `${relation.label} (${relation.datatype})` : relation.label;
    item.append(button);

    if (relation.kind === "data") {
      button.addEventListener("click", () => {
        void this.controller.addStep({ parentId: node.id, property: relation.property });
      });
      return item;
    }

    button.addEventListener("click", () => {
      // one target picker at a time
      for (const open of Array.from(this.root.querySelectorAll(".target-picker"))) {
        open.remove();
      }
      item.append(this.targetPicker(node, relation, direction));
    });
    return item;
  }

  private targetPicker(
    node: NodeView,
    relation: RelationInfo,
    direction: "outgoing" | "incoming",
  ): HTMLElement {
    const picker = this.doc.createElement("div");
    picker.className = "target-picker";
    const declared = direction === "outgoing" ? relation.ranges : relation.domains;
    if (declared.length > 0) {
      const hint = this.doc.createElement("p");
      hint.className = "hint";
      const labels = this.controller.labels;
      hint.textContent = `declared: ${declared.map((iri) => labels.get(iri)).join(", ")}`;
      picker.append(hint);
    }
    const box = new AutocompleteBox(picker, this.api, {
      placeholder: "target concept",
      debounceMs: this.options.debounceMs,
      onPick: (suggestion) => {
        void this.controller.addStep({
          parentId: node.id,
          property: relation.property,
          targetClass: suggestion.class,
          direction: direction === "outgoing" ? "forward" : "inverse",
        });
      },
      onError: (message) => this.controller.networkTrouble(message),
    });
    box.input.focus();
    return picker;
  }

  private filterForm(node: NodeView): HTMLElement {
    const form = this.doc.createElement("div");
    form.className = "filter-form";
    const caption = this.doc.createElement("p");
    caption.className = "panel-heading";
    caption.textContent = `constrain ${node.label} (${node.datatype})`;
    form.append(caption);

    const comparator = this.doc.createElement("select");
    comparator.className = "comparator";
    for (const symbol of COMPARATORS) {
      const option = this.doc.createElement("option");
      option.value = symbol;
      option.textContent = symbol;
      comparator.append(option);
    }
    const value = this.doc.createElement("input");
    value.type = "text";
    value.className = "filter-value";
    value.placeholder = "value";
    const apply = this.doc.createElement("button");
    apply.type = "button";
    apply.className = "apply-filter";
    apply.textContent = "add constraint";
    apply.addEventListener("click", () => {
      void this.controller.addFilter(node.id, comparator.value, {
        datatype: node.datatype!,
        value: value.value,
      });
    });
    form.append(comparator, value, apply);
    return form;
  }
}
