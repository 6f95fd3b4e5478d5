// Explorer state and the single-flight query runner.  A newer submission
// invalidates any in-flight one: stale responses never land in the state.

import { ApiError, Client } from "./api.js";
import { SchemaIndex } from "./schema.js";
import { QueryDoc, ResultTableDoc } from "./types.js";

export interface ExplorerState {
  schema: SchemaIndex | null;
  query: QueryDoc | null;
  result: ResultTableDoc | null;
  sparql: string;
  error: string | null;
  running: boolean;
}

export function initialState(): ExplorerState {
  return { schema: null, query: null, result: null, sparql: "", error: null, running: false };
}

export class Runner {
  private generation = 0;

  constructor(
    private readonly client: Client,
    private readonly onChange: (state: ExplorerState) => void,
    public state: ExplorerState = initialState(),
  ) {}

  private emit(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  async loadSchema(): Promise<void> {
    try {
      const doc = await this.client.schema();
      this.emit({ schema: new SchemaIndex(doc), error: null });
    } catch (err) {
      this.emit({ error: `schema fetch failed: ${(err as Error).message}` });
    }
  }

  /** Validate, run, and render; stale responses are dropped. */
  async submit(query: QueryDoc): Promise<void> {
    const schema = this.state.schema;
    if (schema) {
      const problems = schema.validate(query);
      if (problems.length > 0) {
        this.emit({ query, error: problems.join("; ") });
        return;
      }
    }
    const ticket = ++this.generation;
    this.emit({ query, running: true, error: null });
    try {
      const [result, sparql] = await Promise.all([
        this.client.runQuery(query),
        this.client.emitSparql(query),
      ]);
      if (ticket !== this.generation) return; // superseded by a newer submit
      this.emit({ result, sparql, running: false, error: null });
    } catch (err) {
      if (ticket !== this.generation) return;
      const message = err instanceof ApiError ? `${err.code}: ${err.message}`
                                              : (err as Error).message;
      // keep the previous result and SPARQL text visible
      this.emit({ running: false, error: message });
    }
  }
}
