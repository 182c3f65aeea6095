/**
 * Chip-row rendering. One chip per query node, in node order, each
 * non-root chip prefixed with the relation that attached it. Leaf
 * chips get a removal button; validation errors render inline under
 * the chip they belong to.
 */

import { NodeView } from "./api.js";
import { BuilderState, Chip } from "./builder.js";

export interface ChipHandlers {
  onFocus: (nodeId: number) => void;
  onRemove: (nodeId: number) => void;
}

function selectionSummary(node: NodeView): string | null {
  const selection = node.selection;
  if (!selection) return null;
  const names = selection.instances.map((ref) => ref.label).join(", ");
  return selection.mode === "any-of" ? `any of: ${names}` : `none of: ${names}`;
}

function filterSummary(node: NodeView): string | null {
  const filters = node.filters ?? [];
  if (filters.length === 0) return null;
  return filters.map((f) => `${f.comparator} ${f.value}`).join(" and ");
}

function edgeCaption(node: NodeView): string {
  if (!node.edge) return "";
  const arrow = node.edge.direction === "forward" ? "→" : "←";
  return `${arrow} ${node.edge.propertyLabel} ${arrow}`;
}

function renderChip(doc: Document, chip: Chip, state: BuilderState, handlers: ChipHandlers) {
  const { node } = chip;
  const wrapper = doc.createElement("span");
  wrapper.className = "chip-slot";

  if (node.edge) {
    const edge = doc.createElement("span");
    edge.className = "edge";
    edge.textContent = edgeCaption(node);
    edge.title = `from node ${node.edge.parentId}`;
    wrapper.append(edge);
  }

  const chipEl = doc.createElement("button");
  chipEl.type = "button";
  chipEl.className = node.kind === "literal" ? "chip literal" : "chip";
  chipEl.dataset.nodeId = String(node.id);
  chipEl.title = node.variable;
  if (node.id === state.focusedNodeId) chipEl.classList.add("focused");

  const label = doc.createElement("span");
  label.className = "chip-label";
  label.textContent = node.label;
  chipEl.append(label);

  const detail = node.kind === "literal" ? filterSummary(node) : selectionSummary(node);
  if (detail) {
    const span = doc.createElement("span");
    span.className = "chip-detail";
    span.textContent = detail;
    chipEl.append(span);
  }
  if (node.kind === "literal" && node.datatype) {
    const span = doc.createElement("span");
    span.className = "chip-datatype";
    span.textContent = node.datatype;
    chipEl.append(span);
  }

  chipEl.addEventListener("click", () => handlers.onFocus(node.id));
  wrapper.append(chipEl);

  if (chip.removable) {
    const remove = doc.createElement("button");
    remove.type = "button";
    remove.className = "remove";
    remove.textContent = "×";
    remove.title = `remove ${node.label}`;
    remove.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onRemove(node.id);
    });
    wrapper.append(remove);
  }

  const error = state.chipErrors.get(node.id);
  if (error) {
    const note = doc.createElement("span");
    note.className = "chip-error";
    note.textContent = error;
    wrapper.append(note);
  }

  return wrapper;
}

export function renderChipRow(
  container: HTMLElement,
  state: BuilderState,
  handlers: ChipHandlers,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const chip of state.chips) {
    container.append(renderChip(doc, chip, state, handlers));
  }
}
