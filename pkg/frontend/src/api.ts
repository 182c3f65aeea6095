/**
 * Typed client for the ontoquery HTTP service.
 *
 * Mirrors the wire contract in docs/api.md exactly; every shape here is
 * something the server actually sends. The client adds nothing of its
 * own beyond percent-encoding concept IRIs on /concepts/... routes.
 */

export interface DatasetInfo {
  id: string;
  label: string;
  tripleCount: number;
}

export interface ConceptAnnotation {
  description: string | null;
  altLabels: string[];
  properties: string[];
}

export interface ConceptSuggestion {
  class: string;
  label: string;
  matchKind: "label" | "altLabel";
  annotation: ConceptAnnotation;
}

export interface RelationInfo {
  property: string;
  label: string;
  kind: "object" | "data";
  datatype: string | null;
  valueKind: string | null;
  domains: string[];
  ranges: string[];
}

export interface InstanceRef {
  iri: string;
  label: string;
}

export interface InstanceListing {
  direct: InstanceRef[];
  viaSubclass: Array<InstanceRef & { admittedBy: InstanceRef }>;
}

export interface PathStep {
  subject: string;
  property: string;
  propertyLabel: string;
  object: string;
  direction: "forward" | "inverse";
}

export interface SchemaPath {
  length: number;
  steps: PathStep[];
}

export interface EdgeView {
  parentId: number;
  property: string;
  propertyLabel: string;
  direction: "forward" | "inverse";
}

export interface SelectionView {
  mode: "any-of" | "none-of";
  instances: InstanceRef[];
}

export interface FilterView {
  comparator: string;
  value: string;
  datatype: string;
}

export interface NodeView {
  id: number;
  kind: "class" | "literal";
  label: string;
  variable: string;
  edge: EdgeView | null;
  class?: string;
  selection?: SelectionView | null;
  property?: string;
  datatype?: string;
  filters?: FilterView[];
}

export interface QueryView {
  historyDepth: number;
  nodes: NodeView[];
}

export interface SessionCreated {
  sessionId: string;
  query: QueryView;
}

export interface StepAdded {
  nodeId: number;
  query: QueryView;
}

export interface SparqlView {
  text: string;
  variables: Record<string, string>;
}

export interface CellValue {
  kind: "iri" | "literal";
  value: string;
  display: string;
  datatype?: string;
}

export interface ResultRow {
  values: CellValue[];
  provenance: string;
  witness: Record<string, InstanceRef>;
}

export interface ResultColumn {
  nodeId: number;
  label: string;
}

export interface ResultTable {
  columns: ResultColumn[];
  rows: ResultRow[];
}

export interface EnrichableColumn {
  columnIndex: number;
  reason: string;
}

export interface ExecuteResult {
  dataset: string;
  cacheHit: boolean;
  specific: ResultTable;
  general: ResultTable;
  enrichableColumns: EnrichableColumn[];
}

export interface ReportLine {
  row: number;
  summary: string;
  score: string;
}

export interface JobView {
  jobId: string;
  status: "pending" | "running" | "done" | "failed";
  columnIndex: number;
  rowOrdinals: number[];
  report: ReportLine[] | null;
  diagnostic: string | null;
}

export interface StepRequest {
  parentId: number;
  property: string;
  targetClass?: string;
  direction?: "forward" | "inverse";
}

export interface FilterValue {
  datatype: string;
  value: string;
}

/** A failure response decoded from the server's error envelope. */
export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function encodeConcept(iri: string): string {
  // IRIs carry a #fragment; left raw it would be stripped from the path.
  return encodeURIComponent(iri);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ApiError("network-error", `cannot reach ${this.baseUrl}: ${cause}`, 0);
    }
    if (!response.ok) {
      let code = "http-error";
      let message = `${response.status} ${response.statusText}`;
      try {
        const envelope = await response.json();
        if (envelope && envelope.error) {
          code = envelope.error.code;
          message = envelope.error.message;
        }
      } catch {
        // non-JSON failure body; keep the status line
      }
      throw new ApiError(code, message, response.status);
    }
    return (await response.json()) as T;
  }

  async datasets(): Promise<DatasetInfo[]> {
    const payload = await this.request<{ datasets: DatasetInfo[] }>("GET", "/datasets");
    return payload.datasets;
  }

  async suggest(prefix: string, limit?: number): Promise<ConceptSuggestion[]> {
    const params = new URLSearchParams({ q: prefix });
    if (limit !== undefined) params.set("limit", String(limit));
    const payload = await this.request<{ suggestions: ConceptSuggestion[] }>(
      "GET",
      `/suggest?${params}`,
    );
    return payload.suggestions;
  }

  async annotation(classIri: string): Promise<ConceptAnnotation> {
    return this.request("GET", `/concepts/${encodeConcept(classIri)}/annotation`);
  }

  async relations(classIri: string, direction: "outgoing" | "incoming"): Promise<RelationInfo[]> {
    const payload = await this.request<{ relations: RelationInfo[] }>(
      "GET",
      `/concepts/${encodeConcept(classIri)}/relations?direction=${direction}`,
    );
    return payload.relations;
  }

  async instances(classIri: string, dataset?: string): Promise<InstanceListing> {
    const suffix = dataset === undefined ? "" : `?dataset=${encodeURIComponent(dataset)}`;
    return this.request("GET", `/concepts/${encodeConcept(classIri)}/instances${suffix}`);
  }

  async paths(fromIri: string, toIri: string, max?: number): Promise<SchemaPath[]> {
    const params = new URLSearchParams({ from: fromIri, to: toIri });
    if (max !== undefined) params.set("max", String(max));
    const payload = await this.request<{ paths: SchemaPath[] }>("GET", `/paths?${params}`);
    return payload.paths;
  }

  async createSession(rootConcept: string): Promise<SessionCreated> {
    return this.request("POST", "/sessions", { rootConcept });
  }

  async addStep(sessionId: string, step: StepRequest): Promise<StepAdded> {
    return this.request("POST", `/sessions/${sessionId}/steps`, step);
  }

  async setSelection(
    sessionId: string,
    nodeId: number,
    mode: "any-of" | "none-of",
    instances: string[],
  ): Promise<{ query: QueryView }> {
    return this.request("POST", `/sessions/${sessionId}/selection`, { nodeId, mode, instances });
  }

  async addFilter(
    sessionId: string,
    nodeId: number,
    comparator: string,
    value: FilterValue,
  ): Promise<{ query: QueryView }> {
    return this.request("POST", `/sessions/${sessionId}/filter`, { nodeId, comparator, value });
  }

  async undo(sessionId: string): Promise<{ query: QueryView }> {
    return this.request("POST", `/sessions/${sessionId}/undo`);
  }

  async removeNode(sessionId: string, nodeId: number): Promise<{ query: QueryView }> {
    return this.request("DELETE", `/sessions/${sessionId}/nodes/${nodeId}`);
  }

  async sparql(sessionId: string): Promise<SparqlView> {
    return this.request("GET", `/sessions/${sessionId}/sparql`);
  }

  async execute(sessionId: string, dataset?: string): Promise<ExecuteResult> {
    const suffix = dataset === undefined ? "" : `?dataset=${encodeURIComponent(dataset)}`;
    return this.request("POST", `/sessions/${sessionId}/execute${suffix}`);
  }

  async submitEnrichment(sessionId: string, columnIndex: number): Promise<JobView> {
    return this.request("POST", "/enrichments", { sessionId, columnIndex });
  }

  async enrichmentStatus(jobId: string): Promise<JobView> {
    return this.request("GET", `/enrichments/${jobId}`);
  }
}
