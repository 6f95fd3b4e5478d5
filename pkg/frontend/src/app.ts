// Wiring of the explorer surface: form, result grid, chart, SPARQL panel.

import { Client } from "./api.js";
import { defaultQuery, dice, drillDownFromRow, rollUp, sliceQuery } from "./query.js";
import { renderBarChart, renderForm, renderGrid } from "./render.js";
import { ExplorerState, Runner } from "./state.js";
import { decodeFragment, encodeFragment } from "./urlstate.js";
import { Comparator, FilterDoc, QueryDoc } from "./types.js";

interface Panels {
  form: HTMLElement;
  grid: HTMLElement;
  chart: HTMLElement;
  sparql: HTMLElement;
  banner: HTMLElement;
}

export class ExplorerApp {
  private runner: Runner;
  private panels: Panels;
  private draft: QueryDoc | null = null;

  constructor(private readonly root: HTMLElement, client: Client) {
    this.panels = {
      form: this.section("query-form"),
      banner: this.section("banner"),
      grid: this.section("result-grid"),
      chart: this.section("result-chart"),
      sparql: this.section("sparql-panel"),
    };
    this.runner = new Runner(client, (state) => this.render(state));
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  private section(id: string): HTMLElement {
    const el = this.root.ownerDocument.createElement("section");
    el.id = id;
    this.root.appendChild(el);
    return el;
  }

  async start(): Promise<void> {
    await this.runner.loadSchema();
    const schema = this.runner.state.schema;
    if (!schema) {
      this.panels.banner.innerHTML =
        `<div class="error">schema unavailable ` +
        `<button data-role="retry">retry</button></div>`;
      return;
    }
    const fromUrl = decodeFragment(this.root.ownerDocument.location?.hash ?? "");
    this.draft = fromUrl ?? defaultQuery(schema, schema.datasets()[0].iri);
    this.panels.form.innerHTML = renderForm(schema, this.draft);
    if (fromUrl) await this.submit(fromUrl);
  }

  private async submit(query: QueryDoc): Promise<void> {
    this.draft = query;
    await this.runner.submit(query);
  }

  private render(state: ExplorerState): void {
    const doc = this.root.ownerDocument;
    this.panels.banner.innerHTML = state.error
      ? `<div class="error">${state.error}</div>`
      : state.running ? `<div class="running">running…</div>` : "";
    if (state.schema && this.draft) {
      this.panels.form.innerHTML = renderForm(state.schema, this.draft);
    }
    if (state.result && state.query) {
      this.panels.grid.innerHTML = renderGrid(state.result, state.query);
      this.panels.chart.innerHTML = renderBarChart(state.result);
      // the panel shows exactly the server-emitted text
      const pre = doc.createElement("pre");
      pre.textContent = state.sparql;
      this.panels.sparql.replaceChildren(pre);
      if (doc.location) doc.location.hash = encodeFragment(state.query);
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const role = target.getAttribute?.("data-role");
    if (!role) return;
    const schema = this.runner.state.schema;
    if (role === "retry") {
      void this.start();
      return;
    }
    if (!schema || !this.draft) return;
    if (role === "run") {
      void this.submit(this.draft);
    } else if (role === "drill-down") {
      const dimension = target.getAttribute("data-dimension")!;
      const value = target.getAttribute("data-value")!;
      const base = this.runner.state.query ?? this.draft;
      try {
        void this.submit(drillDownFromRow(schema, base, dimension, value));
      } catch (err) {
        this.panels.banner.innerHTML = `<div class="error">${(err as Error).message}</div>`;
      }
    } else if (role === "add-filter") {
      const predicate = this.readFilterRow();
      if (predicate) void this.submit(dice(this.draft, predicate));
    } else if (role === "clear-filters") {
      const { filters: _dropped, ...rest } = this.draft;
      void this.submit(rest);
    }
  }

  private readFilterRow(): FilterDoc | null {
    const pick = (role: string) =>
      this.panels.form.querySelector<HTMLSelectElement | HTMLInputElement>(
        `[data-role="${role}"]`);
    const attribute = pick("filter-attribute")?.value ?? "";
    const comparator = (pick("filter-comparator")?.value ?? "regex") as Comparator;
    const value = pick("filter-value")?.value ?? "";
    const [level, attr] = attribute.split("|");
    if (!level || !attr || value === "") return null;
    return { level, attribute: attr, comparator, value };
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLSelectElement | HTMLInputElement;
    const role = target.getAttribute?.("data-role");
    const schema = this.runner.state.schema;
    if (!role || !schema || !this.draft) return;

    if (role === "dataset") {
      this.draft = defaultQuery(schema, target.value);
    } else if (role === "level") {
      const dimension = target.getAttribute("data-dimension")!;
      const level = target.value;
      const groupBy = this.draft.groupBy.filter((g) => g.dimension !== dimension);
      if (level !== "") {
        groupBy.push({ dimension, level, attribute: schema.displayAttribute(level) });
      }
      this.draft = { ...this.draft, groupBy };
    } else if (role === "attribute") {
      const dimension = target.getAttribute("data-dimension")!;
      this.draft = {
        ...this.draft,
        groupBy: this.draft.groupBy.map((g) =>
          g.dimension === dimension ? { ...g, attribute: target.value } : g),
      };
    } else if (role === "measure" || role === "function") {
      this.draft = this.readAggregates(this.draft);
    }
    this.panels.form.innerHTML = renderForm(schema, this.draft);
  }

  private readAggregates(query: QueryDoc): QueryDoc {
    const aggregates: QueryDoc["aggregates"] = [];
    const boxes = this.panels.form.querySelectorAll<HTMLInputElement>(
      `[data-role="measure"]`);
    boxes.forEach((box) => {
      if (!box.checked) return;
      const measure = box.getAttribute("data-measure")!;
      const fn = this.panels.form.querySelector<HTMLSelectElement>(
        `[data-role="function"][data-measure="${measure}"]`);
      aggregates.push({
        measure,
        function: (fn?.value ?? "SUM") as QueryDoc["aggregates"][0]["function"],
      });
    });
    return { ...query, aggregates };
  }

  // exposed for tests
  get state(): ExplorerState {
    return this.runner.state;
  }

  get currentDraft(): QueryDoc | null {
    return this.draft;
  }
}

export { rollUp, sliceQuery };
