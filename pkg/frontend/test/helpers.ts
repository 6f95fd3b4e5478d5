// Shared test plumbing: captured server fixtures and a canned-fetch client.

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { Client, FetchLike } from "../src/api.js";
import { SchemaIndex } from "../src/schema.js";
import { QueryDoc, ResultTableDoc, SchemaDoc } from "../src/types.js";

const FIXTURES = join(__dirname, "fixtures");

export function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export function jsonFixture<T>(name: string): T {
  return JSON.parse(fixture(name)) as T;
}

export const schemaDoc = (): SchemaDoc => jsonFixture<SchemaDoc>("schema.json");
export const schemaIndex = (): SchemaIndex => new SchemaIndex(schemaDoc());

export const rollupQuery = (): QueryDoc => jsonFixture<QueryDoc>("banana-rollup-query.json");
export const rollupResult = (): ResultTableDoc =>
  jsonFixture<ResultTableDoc>("banana-rollup-result.json");
export const rollupSparql = (): string => fixture("banana-rollup-sparql.txt");
export const drilldownQuery = (): QueryDoc => jsonFixture<QueryDoc>("drilldown-query.json");
export const drilldownResult = (): ResultTableDoc =>
  jsonFixture<ResultTableDoc>("drilldown-result.json");
export const drilldownSparql = (): string => fixture("drilldown-sparql.txt");

export interface Recorded {
  path: string;
  body?: unknown;
}

export interface CannedRoute {
  match: (path: string, body?: unknown) => boolean;
  status?: number;
  /** JSON value or raw text to return */
  reply: unknown | ((body: unknown) => unknown);
  text?: boolean;
  delayMs?: number;
}

/** A Client whose transport replays canned responses and records requests. */
export function cannedClient(routes: CannedRoute[]): { client: Client; log: Recorded[] } {
  const log: Recorded[] = [];
  const transport: FetchLike = async (input, init) => {
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    log.push({ path: input, body });
    for (const route of routes) {
      if (!route.match(input, body)) continue;
      if (route.delayMs) await new Promise((r) => setTimeout(r, route.delayMs));
      const payload = typeof route.reply === "function"
        ? (route.reply as (b: unknown) => unknown)(body)
        : route.reply;
      const text = route.text ? String(payload) : JSON.stringify(payload);
      return new Response(text, {
        status: route.status ?? 200,
        headers: { "content-type": route.text ? "text/plain" : "application/json" },
      });
    }
    return new Response(JSON.stringify({ code: "not-found", message: `no route ${input}` }),
      { status: 404, headers: { "content-type": "application/json" } });
  };
  return { client: new Client("", transport), log };
}

/** Routes for a server that accepts exactly the captured query pairs. */
export function capturedServer(): { client: Client; log: Recorded[] } {
  const same = (a: unknown, b: unknown) => JSON.stringify(a) === JSON.stringify(b);
  return cannedClient([
    { match: (p) => p === "/schema", reply: schemaDoc() },
    {
      match: (p, body) => p === "/query" && same(body, rollupQuery()),
      reply: rollupResult(),
    },
    {
      match: (p, body) => p === "/query/sparql" && same(body, rollupQuery()),
      reply: rollupSparql(),
      text: true,
    },
    {
      match: (p, body) => p === "/query" && same(body, drilldownQuery()),
      reply: drilldownResult(),
    },
    {
      match: (p, body) => p === "/query/sparql" && same(body, drilldownQuery()),
      reply: drilldownSparql(),
      text: true,
    },
    {
      match: (p) => p === "/query" || p === "/query/sparql",
      status: 422,
      reply: { code: "invalid-query", message: "query not in the captured contract" },
    },
  ]);
}
