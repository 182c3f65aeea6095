import { describe, expect, it } from "vitest";

import { BuilderState, chipsOf, initialState } from "../src/builder.js";
import { renderChipRow } from "../src/chips.js";
import { NS, classNode, literalNode, view } from "./fixtures.js";

const CHAIN = view(2, [
  classNode(0, "Gene", "gene", "?any_gene1"),
  classNode(1, "Primer", "primer", "?any_primer2", {
    parentId: 0,
    property: NS + "has_primer",
    propertyLabel: "has primer",
    direction: "forward",
  }),
  literalNode(
    2,
    "primer_sequence",
    "primer sequence",
    "?any_primer_sequence3",
    {
      parentId: 1,
      property: NS + "primer_sequence",
      propertyLabel: "primer sequence",
      direction: "forward",
    },
    "string",
  ),
]);

function stateFor(v = CHAIN): BuilderState {
  const state = initialState();
  state.sessionId = "s1";
  state.view = v;
  state.chips = chipsOf(v);
  return state;
}

function render(state: BuilderState, handlers?: Partial<Parameters<typeof renderChipRow>[2]>) {
  const container = document.createElement("div");
  renderChipRow(container, state, {
    onFocus: handlers?.onFocus ?? (() => undefined),
    onRemove: handlers?.onRemove ?? (() => undefined),
  });
  return container;
}

describe("renderChipRow", () => {
  it("renders one chip per node, in node order, with edge captions", () => {
    const container = render(stateFor());
    const chips = Array.from(container.querySelectorAll(".chip"));
    expect(chips.map((c) => c.querySelector(".chip-label")?.textContent)).toEqual([
      "gene",
      "primer",
      "primer sequence",
    ]);
    const edges = Array.from(container.querySelectorAll(".edge"));
    expect(edges.map((e) => e.textContent)).toEqual([
      "→ has primer →",
      "→ primer sequence →",
    ]);
  });

  it("shows the variable as the chip tooltip", () => {
    const container = render(stateFor());
    const first = container.querySelector(".chip")!;
    expect(first.getAttribute("title")).toBe("?any_gene1");
  });

  it("marks literal chips and prints their datatype", () => {
    const container = render(stateFor());
    const literal = container.querySelector(".chip.literal")!;
    expect(literal.querySelector(".chip-datatype")?.textContent).toBe("string");
  });

  it("summarizes filters on literal chips", () => {
    const filtered = structuredClone(CHAIN);
    filtered.nodes[2].filters = [
      { comparator: ">", value: "1", datatype: "decimal" },
      { comparator: "<", value: "4", datatype: "decimal" },
    ];
    const container = render(stateFor(filtered));
    expect(container.querySelector(".chip.literal .chip-detail")?.textContent).toBe(
      "> 1 and < 4",
    );
  });

  it("summarizes selections on class chips", () => {
    const selected = structuredClone(CHAIN);
    selected.nodes[1].selection = {
      mode: "any-of",
      instances: [
        { iri: NS + "primer_1", label: "primer one" },
        { iri: NS + "primer_2", label: "primer two" },
      ],
    };
    const container = render(stateFor(selected));
    const detail = container.querySelectorAll(".chip")[1].querySelector(".chip-detail");
    expect(detail?.textContent).toBe("any of: primer one, primer two");
  });

  it("offers removal only on non-root leaves", () => {
    const container = render(stateFor());
    const removers = Array.from(container.querySelectorAll(".remove"));
    expect(removers).toHaveLength(1);
    expect(removers[0].getAttribute("title")).toBe("remove primer sequence");
  });

  it("routes chip clicks to focus and X clicks to removal", () => {
    const focused: number[] = [];
    const removed: number[] = [];
    const container = render(stateFor(), {
      onFocus: (id) => focused.push(id),
      onRemove: (id) => removed.push(id),
    });
    (container.querySelectorAll(".chip")[1] as HTMLElement).click();
    (container.querySelector(".remove") as HTMLElement).click();
    expect(focused).toEqual([1]);
    expect(removed).toEqual([2]);
  });

  it("highlights the focused chip", () => {
    const state = stateFor();
    state.focusedNodeId = 1;
    const container = render(state);
    const focused = container.querySelector(".chip.focused")!;
    expect(focused.querySelector(".chip-label")?.textContent).toBe("primer");
  });

  it("renders a validation error under the chip it belongs to", () => {
    const state = stateFor();
    state.chipErrors.set(1, "inapplicable-property: primer takes no such relation");
    const container = render(state);
    const slot = container.querySelectorAll(".chip-slot")[1];
    expect(slot.querySelector(".chip-error")?.textContent).toContain("inapplicable-property");
    expect(container.querySelectorAll(".chip-error")).toHaveLength(1);
  });
});
