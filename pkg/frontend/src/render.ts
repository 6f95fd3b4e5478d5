// HTML renderers for the form, the result grid, and the bar chart.  Pure
// string builders so they are testable without a browser; app.ts mounts the
// strings and wires events by delegation.

import { SchemaIndex } from "./schema.js";
import { keyColumn } from "./query.js";
import {
  AggregateFunction,
  Cell,
  QueryDoc,
  ResultTableDoc,
  localName,
} from "./types.js";

const FUNCTIONS: AggregateFunction[] = ["SUM", "AVG", "MIN", "MAX", "COUNT"];

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function option(value: string, label: string, selected: boolean): string {
  return `<option value="${escapeHtml(value)}"${selected ? " selected" : ""}>` +
    `${escapeHtml(label)}</option>`;
}

export function renderForm(schema: SchemaIndex, query: QueryDoc): string {
  const parts: string[] = [];

  const known = schema.datasets().some((ds) => ds.iri === query.dataset);
  if (!known) {
    return `<p class="empty-state">no cuboids available</p>` +
      `<button data-role="run" disabled>Run query</button>`;
  }

  const datasets = schema.datasets()
    .map((ds) => option(ds.iri, localName(ds.iri), ds.iri === query.dataset))
    .join("");
  parts.push(`<label class="field">cuboid <select data-role="dataset">${datasets}</select></label>`);

  for (const dimension of schema.dimensionsOf(query.dataset)) {
    const entry = query.groupBy.find((g) => g.dimension === dimension);
    const levels = schema.selectableLevels(query.dataset, dimension);
    const levelOptions =
      option("", "(aggregate across)", entry === undefined) +
      levels.map((lv) => option(lv, localName(lv), entry?.level === lv)).join("");
    parts.push(
      `<fieldset class="dimension" data-dimension="${escapeHtml(dimension)}">` +
      `<legend>${escapeHtml(localName(dimension))}</legend>` +
      `<select data-role="level" data-dimension="${escapeHtml(dimension)}">${levelOptions}</select>` +
      renderAttributePicker(schema, dimension, entry?.level, entry?.attribute) +
      `</fieldset>`,
    );
  }

  const measureRows = schema.measuresOf(query.dataset).map((measure) => {
    const active = query.aggregates.find((a) => a.measure === measure.iri);
    const fns = FUNCTIONS.map((fn) => option(fn, fn, active?.function === fn)).join("");
    return `<label class="measure">` +
      `<input type="checkbox" data-role="measure" data-measure="${escapeHtml(measure.iri)}"` +
      `${active ? " checked" : ""}/> ${escapeHtml(localName(measure.iri))} ` +
      `<select data-role="function" data-measure="${escapeHtml(measure.iri)}">${fns}</select>` +
      `</label>`;
  });
  parts.push(`<div class="measures">${measureRows.join("")}</div>`);

  parts.push(renderFilterBuilder(schema, query));
  const disabled = query.groupBy.length === 0 && query.aggregates.length === 0;
  parts.push(`<button data-role="run"${disabled ? " disabled" : ""}>Run query</button>`);
  return parts.join("\n");
}

function renderAttributePicker(schema: SchemaIndex, dimension: string,
                               level: string | undefined,
                               selected: string | undefined): string {
  if (!level) return "";
  const options = schema.level(level).attributes
    .filter((a) => a.kind === "datatype")
    .map((a) => option(a.iri, localName(a.iri), a.iri === selected))
    .join("");
  return `<select data-role="attribute" data-dimension="${escapeHtml(dimension)}">` +
    options + `</select>`;
}

export function renderFilterBuilder(schema: SchemaIndex, query: QueryDoc): string {
  // one builder row: level-scoped attribute picker + comparator + value;
  // grouped levels and their chains drive the attribute choices
  const levels = new Set<string>();
  for (const g of query.groupBy) {
    levels.add(g.level);
    for (const above of schema.levelsAbove(query.dataset, g.dimension, g.level)) {
      levels.add(above);
    }
    const base = schema.baseLevelOf(query.dataset, g.dimension);
    if (base) levels.add(base);
  }
  const attrOptions: string[] = [];
  for (const level of levels) {
    for (const attr of schema.attributesOf(level)) {
      attrOptions.push(option(`${level}|${attr.iri}`,
        `${localName(level)}.${localName(attr.iri)}`, false));
    }
  }
  const comparators = ["regex", "=", "!=", "<", "<=", ">", ">="]
    .map((c) => option(c, c, c === "regex")).join("");
  return `<div class="filter-builder">` +
    `<select data-role="filter-attribute">${attrOptions.join("")}</select>` +
    `<select data-role="filter-comparator">${comparators}</select>` +
    `<input data-role="filter-value" placeholder="value"/>` +
    `<button data-role="add-filter">Dice</button>` +
    `<span data-role="active-filters">${renderActiveFilters(query)}</span>` +
    `</div>`;
}

export function renderActiveFilters(query: QueryDoc): string {
  if (!query.filters) return "";
  const render = (node: any): string => {
    if (node.op) return "(" + node.args.map(render).join(` ${node.op.toUpperCase()} `) + ")";
    if (node.measure !== undefined) {
      return `${localName(node.measure)} ${node.comparator} ${node.value}`;
    }
    return `${localName(node.attribute)} ${node.comparator} "${escapeHtml(String(node.value))}"`;
  };
  return `<code>${render(query.filters)}</code> ` +
    `<button data-role="clear-filters">clear</button>`;
}

export function renderGrid(result: ResultTableDoc, query: QueryDoc): string {
  const header = result.columns
    .map((c) => `<th class="${c.kind}">${escapeHtml(c.name)}</th>`)
    .join("");
  const keyWidth = result.columns.filter((c) => c.kind === "key").length;

  const body = result.rows.map((row, rowIndex) => {
    const cells = row.map((cell, i) => {
      const drill = i < keyWidth ? drillControl(query, result, i, cell) : "";
      return `<td>${cell === null ? "" : escapeHtml(String(cell))}${drill}</td>`;
    });
    return `<tr data-row="${rowIndex}">${cells.join("")}</tr>`;
  });

  if (result.rows.length === 0) {
    return `<p class="empty-state">no cells match</p>`;
  }
  const note = result.excludedRows > 0
    ? `<p class="excluded">${result.excludedRows} row(s) excluded: unparseable measures</p>`
    : "";
  return `<table class="grid"><thead><tr>${header}</tr></thead>` +
    `<tbody>${body.join("")}</tbody></table>${note}`;

  function drillControl(q: QueryDoc, table: ResultTableDoc, column: number,
                        cell: Cell): string {
    const name = table.columns[column].name;
    const entry = q.groupBy.find((g) => keyColumn(g) === name);
    if (!entry || cell === null) return "";
    return ` <button class="drill" data-role="drill-down"` +
      ` data-dimension="${escapeHtml(entry.dimension)}"` +
      ` data-value="${escapeHtml(String(cell))}" title="drill down">&#8595;</button>`;
  }
}

/** Grouped bars of the first aggregate column, one bar per group key. */
export function renderBarChart(result: ResultTableDoc): string {
  const keyWidth = result.columns.filter((c) => c.kind === "key").length;
  const aggregate = result.columns.findIndex((c) => c.kind === "aggregate");
  if (aggregate < 0 || result.rows.length === 0) return "";

  const entries = result.rows
    .map((row) => ({
      label: row.slice(0, keyWidth).map((v) => (v === null ? "" : String(v))).join(" / "),
      value: typeof row[aggregate] === "number" ? (row[aggregate] as number) : null,
    }))
    .filter((e): e is { label: string; value: number } => e.value !== null)
    .slice(0, 40);
  if (entries.length === 0) return "";

  const max = Math.max(...entries.map((e) => e.value), 0);
  const barHeight = 18;
  const gap = 6;
  const labelWidth = 260;
  const plotWidth = 420;
  const height = entries.length * (barHeight + gap);
  const bars = entries.map((e, i) => {
    const y = i * (barHeight + gap);
    const width = max > 0 ? Math.max(1, Math.round((e.value / max) * plotWidth)) : 1;
    return `<text x="${labelWidth - 8}" y="${y + 13}" text-anchor="end">` +
      `${escapeHtml(e.label)}</text>` +
      `<rect x="${labelWidth}" y="${y}" width="${width}" height="${barHeight}"></rect>` +
      `<text x="${labelWidth + width + 6}" y="${y + 13}">${e.value}</text>`;
  });
  const name = escapeHtml(result.columns[aggregate].name);
  return `<svg class="chart" viewBox="0 0 ${labelWidth + plotWidth + 90} ${height}"` +
    ` role="img" aria-label="${name} per group">${bars.join("")}</svg>`;
}
