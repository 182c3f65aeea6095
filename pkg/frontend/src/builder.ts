/**
 * Client-side session state.
 *
 * The server owns the query; this module just mirrors it. Every
 * mutation round-trips through the API and replaces the local view with
 * the one the server returns, so the chip row can never drift from the
 * session. Mutations are serialized per session: a second edit waits
 * for the first to be acknowledged.
 */

import {
  ApiClient,
  ApiError,
  ConceptSuggestion,
  ExecuteResult,
  FilterValue,
  JobView,
  NodeView,
  QueryView,
  SparqlView,
  StepRequest,
} from "./api.js";

export interface Chip {
  node: NodeView;
  /** Leaves may be removed; inner chips and the root may not. */
  removable: boolean;
}

export type ResultTab = "specific" | "general";

export interface BuilderState {
  sessionId: string | null;
  view: QueryView | null;
  chips: Chip[];
  focusedNodeId: number | null;
  activeSuggestions: ConceptSuggestion[];
  resultTab: ResultTab;
  lastResult: ExecuteResult | null;
  pendingJobs: string[];
  finishedJobs: JobView[];
  sparql: SparqlView | null;
  /** Per-chip validation errors, keyed by node id. */
  chipErrors: Map<number, string>;
  /** Session-level notice (undo floor, expiry, ...). */
  notice: string | null;
  /** Retriable connectivity banner; chips are kept as they were. */
  banner: string | null;
}

export function initialState(): BuilderState {
  return {
    sessionId: null,
    view: null,
    chips: [],
    focusedNodeId: null,
    activeSuggestions: [],
    resultTab: "general",
    lastResult: null,
    pendingJobs: [],
    finishedJobs: [],
    sparql: null,
    chipErrors: new Map(),
    notice: null,
    banner: null,
  };
}

/** Derive the chip row from a server query view. */
export function chipsOf(view: QueryView): Chip[] {
  const parents = new Set<number>();
  for (const node of view.nodes) {
    if (node.edge) parents.add(node.edge.parentId);
  }
  return view.nodes.map((node) => ({
    node,
    removable: node.edge !== null && !parents.has(node.id),
  }));
}

/**
 * Display labels learned from server payloads, with the IRI local name
 * as a last resort. Used only for captions; never for reasoning.
 */
export class LabelCache {
  private labels = new Map<string, string>();

  learn(iri: string, label: string): void {
    this.labels.set(iri, label);
  }

  get(iri: string): string {
    const known = this.labels.get(iri);
    if (known !== undefined) return known;
    const cut = Math.max(iri.lastIndexOf("#"), iri.lastIndexOf("/"));
    return cut >= 0 ? iri.slice(cut + 1) : iri;
  }
}

type Listener = (state: BuilderState) => void;

export class SessionController {
  readonly state: BuilderState = initialState();
  readonly labels = new LabelCache();
  private listeners: Listener[] = [];
  private queue: Promise<unknown> = Promise.resolve();

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private publish(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Run mutations one at a time, in submission order. */
  private enqueue<T>(work: () => Promise<T>): Promise<T> {
    const next = this.queue.then(work, work);
    this.queue = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  private learnFromView(view: QueryView): void {
    for (const node of view.nodes) {
      if (node.kind === "class" && node.class) this.labels.learn(node.class, node.label);
      for (const ref of node.selection?.instances ?? []) this.labels.learn(ref.iri, ref.label);
    }
  }

  private applyView(view: QueryView): void {
    this.state.view = view;
    this.state.chips = chipsOf(view);
    this.state.banner = null;
    this.state.notice = null;
    if (
      this.state.focusedNodeId !== null &&
      !view.nodes.some((n) => n.id === this.state.focusedNodeId)
    ) {
      this.state.focusedNodeId = null;
    }
    this.learnFromView(view);
  }

  /**
   * Classify a failure per the revision contract: connectivity problems
   * raise the retriable banner, validation problems attach to the chip
   * they came from. Built chips are never cleared either way.
   */
  private reportFailure(error: unknown, nodeId: number | null): void {
    if (error instanceof ApiError && error.status > 0) {
      if (nodeId !== null) {
        this.state.chipErrors.set(nodeId, `${error.code}: ${error.message}`);
      } else {
        this.state.notice = `${error.code}: ${error.message}`;
      }
    } else {
      const message = error instanceof Error ? error.message : String(error);
      this.state.banner = `server unreachable, nothing was changed (${message})`;
    }
  }

  setSuggestions(suggestions: ConceptSuggestion[]): void {
    this.state.activeSuggestions = suggestions;
    for (const s of suggestions) this.labels.learn(s.class, s.label);
    this.publish();
  }

  focusChip(nodeId: number | null): void {
    this.state.focusedNodeId = nodeId;
    this.publish();
  }

  selectTab(tab: ResultTab): void {
    this.state.resultTab = tab;
    this.publish();
  }

  clearBanner(): void {
    this.state.banner = null;
    this.publish();
  }

  /** Raise the retriable connectivity banner without touching chips. */
  networkTrouble(message: string): void {
    this.state.banner = message;
    this.publish();
  }

  /** Drop the session and every dependent piece of state. */
  reset(): void {
    Object.assign(this.state, initialState());
    this.publish();
  }

  async start(rootConcept: string): Promise<boolean> {
    return this.enqueue(async () => {
      try {
        const created = await this.api.createSession(rootConcept);
        this.reset();
        this.state.sessionId = created.sessionId;
        this.applyView(created.query);
        this.state.focusedNodeId = created.query.nodes[0]?.id ?? null;
        return true;
      } catch (error) {
        this.reportFailure(error, null);
        return false;
      } finally {
        this.publish();
      }
    });
  }

  private mutate(
    nodeId: number | null,
    work: () => Promise<{ query: QueryView }>,
  ): Promise<boolean> {
    return this.enqueue(async () => {
      try {
        const payload = await work();
        if (nodeId !== null) this.state.chipErrors.delete(nodeId);
        this.applyView(payload.query);
        await this.refreshSparqlIfOpen();
        return true;
      } catch (error) {
        this.reportFailure(error, nodeId);
        return false;
      } finally {
        this.publish();
      }
    });
  }

  private sessionOrThrow(): string {
    if (this.state.sessionId === null) throw new Error("no active session");
    return this.state.sessionId;
  }

  addStep(step: StepRequest): Promise<boolean> {
    return this.mutate(step.parentId, async () => {
      const added = await this.api.addStep(this.sessionOrThrow(), step);
      this.state.focusedNodeId = added.nodeId;
      return added;
    });
  }

  setSelection(nodeId: number, mode: "any-of" | "none-of", instances: string[]): Promise<boolean> {
    return this.mutate(nodeId, () =>
      this.api.setSelection(this.sessionOrThrow(), nodeId, mode, instances),
    );
  }

  addFilter(nodeId: number, comparator: string, value: FilterValue): Promise<boolean> {
    return this.mutate(nodeId, () =>
      this.api.addFilter(this.sessionOrThrow(), nodeId, comparator, value),
    );
  }

  undo(): Promise<boolean> {
    return this.mutate(null, () => this.api.undo(this.sessionOrThrow()));
  }

  removeChip(nodeId: number): Promise<boolean> {
    return this.mutate(nodeId, () => this.api.removeNode(this.sessionOrThrow(), nodeId));
  }

  /** Kept in sync opportunistically; only fetched once first requested. */
  private sparqlWanted = false;

  async refreshSparql(): Promise<void> {
    this.sparqlWanted = true;
    await this.refreshSparqlIfOpen();
    this.publish();
  }

  private async refreshSparqlIfOpen(): Promise<void> {
    if (!this.sparqlWanted || this.state.sessionId === null) return;
    try {
      this.state.sparql = await this.api.sparql(this.state.sessionId);
    } catch {
      this.state.sparql = null;
    }
  }

  execute(dataset?: string): Promise<boolean> {
    return this.enqueue(async () => {
      try {
        const result = await this.api.execute(this.sessionOrThrow(), dataset);
        this.state.lastResult = result;
        this.state.resultTab = result.specific.rows.length > 0 ? "specific" : "general";
        for (const table of [result.specific, result.general]) {
          for (const row of table.rows) {
            for (const ref of Object.values(row.witness)) this.labels.learn(ref.iri, ref.label);
          }
        }
        return true;
      } catch (error) {
        this.reportFailure(error, null);
        return false;
      } finally {
        this.publish();
      }
    });
  }

  async submitEnrichment(columnIndex: number): Promise<JobView | null> {
    try {
      const job = await this.api.submitEnrichment(this.sessionOrThrow(), columnIndex);
      this.state.pendingJobs.push(job.jobId);
      this.publish();
      return job;
    } catch (error) {
      this.reportFailure(error, null);
      this.publish();
      return null;
    }
  }

  finishJob(job: JobView): void {
    this.state.pendingJobs = this.state.pendingJobs.filter((id) => id !== job.jobId);
    this.state.finishedJobs.push(job);
    this.publish();
  }
}
