// Typed client for the cubekg HTTP API.  All explorer traffic goes through
// here; no SPARQL is ever synthesized client-side.

import { ApiErrorDoc, ExampleDoc, QueryDoc, ResultTableDoc, SchemaDoc } from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly detail: unknown;

  constructor(doc: ApiErrorDoc, status: number) {
    super(doc.message || `request failed (${status})`);
    this.code = doc.code || `http-${status}`;
    this.detail = doc.detail;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let doc: ApiErrorDoc;
      try {
        doc = (await response.json()) as ApiErrorDoc;
      } catch {
        doc = { code: `http-${response.status}`, message: response.statusText };
      }
      throw new ApiError(doc, response.status);
    }
    return response;
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async schema(): Promise<SchemaDoc> {
    return (await this.request("/schema")).json();
  }

  async examples(): Promise<ExampleDoc[]> {
    return (await this.request("/examples")).json();
  }

  async runQuery(query: QueryDoc): Promise<ResultTableDoc> {
    return (await this.post("/query", query)).json();
  }

  async emitSparql(query: QueryDoc): Promise<string> {
    return (await this.post("/query/sparql", query)).text();
  }

  async stats(): Promise<unknown> {
    return (await this.request("/stats")).json();
  }
}
