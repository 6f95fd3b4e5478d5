// Wire types of the cubekg HTTP API.

export interface AttributeDoc {
  iri: string;
  range: string;
  kind: "datatype" | "rollup";
}

export interface LevelDoc {
  iri: string;
  identifier: string;
  attributes: AttributeDoc[];
}

export interface StepDoc {
  child: string;
  parent: string;
  rollup: string;
  cardinality: string;
}

export interface HierarchyDoc {
  iri: string;
  dimension: string;
  levels: string[];
  steps: StepDoc[];
}

export interface DimensionDoc {
  iri: string;
  hierarchies: string[];
}

export interface MeasureDoc {
  iri: string;
  datatype: string;
  defaultAggregate: string;
}

export interface StructureDoc {
  iri: string;
  baseLevels: { dimension: string; level: string }[];
  measures: string[];
}

export interface DatasetDoc {
  iri: string;
  structure: string;
}

export interface SchemaDoc {
  dimensions: DimensionDoc[];
  hierarchies: HierarchyDoc[];
  levels: LevelDoc[];
  measures: MeasureDoc[];
  structures: StructureDoc[];
  datasets: DatasetDoc[];
}

export type AggregateFunction = "SUM" | "AVG" | "MIN" | "MAX" | "COUNT";

export interface GroupByDoc {
  dimension: string;
  level: string;
  attribute: string;
}

export interface AggregateDoc {
  measure: string;
  function: AggregateFunction;
}

export type Comparator = "regex" | "=" | "!=" | "<" | "<=" | ">" | ">=";

export interface AttributeFilterDoc {
  level: string;
  attribute: string;
  comparator: Comparator;
  value: string;
}

export interface MeasureFilterDoc {
  measure: string;
  comparator: Exclude<Comparator, "regex">;
  value: number;
}

export interface BooleanFilterDoc {
  op: "and" | "or";
  args: FilterDoc[];
}

export type FilterDoc = AttributeFilterDoc | MeasureFilterDoc | BooleanFilterDoc;

export interface QueryDoc {
  dataset: string;
  groupBy: GroupByDoc[];
  aggregates: AggregateDoc[];
  filters?: FilterDoc;
  orderBy?: string[];
}

export interface ColumnDoc {
  name: string;
  kind: "key" | "aggregate";
}

export type Cell = string | number | null;

export interface ResultTableDoc {
  columns: ColumnDoc[];
  rows: Cell[][];
  excludedRows: number;
}

export interface ApiErrorDoc {
  code: string;
  message: string;
  detail?: unknown;
}

export interface ExampleDoc {
  name: string;
  description: string;
  query: QueryDoc | { drillAcross: unknown };
}

export function isBoolean(node: FilterDoc): node is BooleanFilterDoc {
  return (node as BooleanFilterDoc).op !== undefined;
}

export function isMeasureFilter(node: FilterDoc): node is MeasureFilterDoc {
  return (node as MeasureFilterDoc).measure !== undefined;
}

export function localName(iri: string): string {
  for (const sep of ["#", "/", ":"]) {
    const at = iri.lastIndexOf(sep);
    if (at >= 0 && at < iri.length - 1) return iri.slice(at + 1);
  }
  return iri;
}
