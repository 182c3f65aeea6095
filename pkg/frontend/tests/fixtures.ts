/**
 * Hand-built wire payloads for unit tests, shaped exactly like the
 * service's responses. The IRIs echo the shipped fixture ontology so
 * the tests read like real sessions.
 */

import {
  ConceptSuggestion,
  ExecuteResult,
  NodeView,
  QueryView,
  RelationInfo,
  ResultRow,
} from "../src/api.js";

export const NS = "http://example.org/parasite#";

export function classNode(
  id: number,
  iri: string,
  label: string,
  variable: string,
  edge: NodeView["edge"] = null,
): NodeView {
  return { id, kind: "class", class: NS + iri, label, variable, edge, selection: null };
}

export function literalNode(
  id: number,
  property: string,
  label: string,
  variable: string,
  edge: NodeView["edge"],
  datatype: string,
): NodeView {
  return { id, kind: "literal", property: NS + property, label, variable, edge, datatype, filters: [] };
}

export function view(historyDepth: number, nodes: NodeView[]): QueryView {
  return { historyDepth, nodes };
}

export const ROOT_VIEW: QueryView = view(0, [
  classNode(0, "CellCloning", "cell cloning", "?any_cell_cloning1"),
]);

export const TWO_NODE_VIEW: QueryView = view(1, [
  classNode(0, "CellCloning", "cell cloning", "?any_cell_cloning1"),
  classNode(1, "TcruziSample", "T.cruzi sample", "?any_t_cruzi_sample2", {
    parentId: 0,
    property: NS + "has_output_value",
    propertyLabel: "has output value",
    direction: "forward",
  }),
]);

export const SUGGESTIONS: ConceptSuggestion[] = [
  {
    class: NS + "CellCloning",
    label: "cell cloning",
    matchKind: "label",
    annotation: {
      description: "isolation of a single-cell derived population",
      altLabels: [],
      properties: ["has output value", "preceded by"],
    },
  },
  {
    class: NS + "ClonedSample",
    label: "cloned sample",
    matchKind: "label",
    annotation: { description: null, altLabels: [], properties: ["clone number"] },
  },
];

export const PRIMER_RELATIONS: RelationInfo[] = [
  {
    property: NS + "has_region",
    label: "has region",
    kind: "object",
    datatype: null,
    valueKind: null,
    domains: [NS + "Primer"],
    ranges: [NS + "Region"],
  },
  {
    property: NS + "primer_sequence",
    label: "primer sequence",
    kind: "data",
    datatype: "string",
    valueKind: "nucleotide-sequence",
    domains: [NS + "Primer"],
    ranges: [],
  },
];

export function resultRow(
  displays: string[],
  provenance: string,
  witness: ResultRow["witness"] = {},
): ResultRow {
  return {
    values: displays.map((display) => ({
      kind: "iri" as const,
      value: NS + display.replace(/\s+/g, "_"),
      display,
    })),
    provenance,
    witness,
  };
}

export function executeResult(overrides: Partial<ExecuteResult> = {}): ExecuteResult {
  return {
    dataset: "strains",
    cacheHit: false,
    specific: { columns: [{ nodeId: 0, label: "cell cloning" }], rows: [] },
    general: {
      columns: [{ nodeId: 0, label: "cell cloning" }],
      rows: [
        resultRow(["cell cloning 10 process"], "strains", {
          "1": { iri: NS + "ClonedSample", label: "cloned sample" },
        }),
      ],
    },
    enrichableColumns: [],
    ...overrides,
  };
}
