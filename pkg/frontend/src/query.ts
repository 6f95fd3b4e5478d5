// Pure query construction and the four pivot transforms.  Every function
// returns a fresh document; nothing here talks to the network.

import { SchemaIndex } from "./schema.js";
import {
  AggregateFunction,
  AttributeFilterDoc,
  FilterDoc,
  GroupByDoc,
  QueryDoc,
  localName,
} from "./types.js";

export function defaultQuery(schema: SchemaIndex, dataset: string): QueryDoc {
  const groupBy: GroupByDoc[] = schema.dimensionsOf(dataset).map((dimension) => {
    const level = schema.baseLevelOf(dataset, dimension)!;
    return { dimension, level, attribute: schema.displayAttribute(level) };
  });
  const aggregates = schema.measuresOf(dataset).map((m) => ({
    measure: m.iri,
    function: (m.defaultAggregate || "SUM") as AggregateFunction,
  }));
  return { dataset, groupBy, aggregates };
}

export function keyColumn(entry: GroupByDoc): string {
  return `${localName(entry.dimension)}_${localName(entry.attribute)}`;
}

export function andFilters(a: FilterDoc | undefined, b: FilterDoc): FilterDoc {
  return a === undefined ? b : { op: "and", args: [a, b] };
}

function replaceEntry(q: QueryDoc, dimension: string, entry: GroupByDoc): QueryDoc {
  return {
    ...q,
    groupBy: q.groupBy.map((g) => (g.dimension === dimension ? entry : g)),
  };
}

export function rollUp(schema: SchemaIndex, q: QueryDoc, dimension: string,
                       toLevel: string): QueryDoc {
  const entry = q.groupBy.find((g) => g.dimension === dimension);
  if (!entry) throw new Error(`${localName(dimension)} is not in the group-by`);
  const above = schema.levelsAbove(q.dataset, dimension, entry.level);
  if (!above.includes(toLevel)) {
    throw new Error(`${localName(toLevel)} is not above ${localName(entry.level)}`);
  }
  return replaceEntry(q, dimension, {
    dimension, level: toLevel, attribute: schema.displayAttribute(toLevel),
  });
}

export function drillDown(schema: SchemaIndex, q: QueryDoc, dimension: string,
                          toLevel: string): QueryDoc {
  const entry = q.groupBy.find((g) => g.dimension === dimension);
  if (!entry) throw new Error(`${localName(dimension)} is not in the group-by`);
  const below = schema.levelsBelow(q.dataset, dimension, entry.level);
  if (!below.includes(toLevel)) {
    throw new Error(`${localName(toLevel)} is not below ${localName(entry.level)}`);
  }
  return replaceEntry(q, dimension, {
    dimension, level: toLevel, attribute: schema.displayAttribute(toLevel),
  });
}

export function sliceQuery(schema: SchemaIndex, q: QueryDoc, dimension: string,
                           level: string, attribute: string, value: string): QueryDoc {
  if (!q.groupBy.some((g) => g.dimension === dimension)) {
    throw new Error(`${localName(dimension)} is not in the group-by`);
  }
  const predicate: AttributeFilterDoc = { level, attribute, comparator: "=", value };
  return {
    ...q,
    groupBy: q.groupBy.filter((g) => g.dimension !== dimension),
    filters: andFilters(q.filters, predicate),
  };
}

export function dice(q: QueryDoc, predicate: FilterDoc): QueryDoc {
  return { ...q, filters: andFilters(q.filters, predicate) };
}

/**
 * The row-level drill-down interaction: step one level down in `dimension`
 * and keep only the clicked row's slice of the old level (drill + dice on
 * the row's display value).
 */
export function drillDownFromRow(schema: SchemaIndex, q: QueryDoc, dimension: string,
                                 rowValue: string): QueryDoc {
  const entry = q.groupBy.find((g) => g.dimension === dimension);
  if (!entry) throw new Error(`${localName(dimension)} is not in the group-by`);
  const below = schema.levelsBelow(q.dataset, dimension, entry.level);
  if (below.length === 0) {
    throw new Error(`${localName(entry.level)} is already the finest level`);
  }
  const drilled = drillDown(schema, q, dimension, below[0]);
  return dice(drilled, {
    level: entry.level,
    attribute: entry.attribute,
    comparator: "=",
    value: rowValue,
  });
}
