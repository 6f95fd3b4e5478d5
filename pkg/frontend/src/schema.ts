// Index over the schema document: which levels a dimension can group by for
// a given dataset, which attributes a level carries, and sensible defaults.
// These mirror the server's rules but stay advisory; the server is the
// authority on query legality.

import {
  AttributeDoc,
  DatasetDoc,
  HierarchyDoc,
  LevelDoc,
  localName,
  MeasureDoc,
  QueryDoc,
  SchemaDoc,
  StructureDoc,
} from "./types.js";

export class SchemaIndex {
  readonly doc: SchemaDoc;
  private levelsByIri = new Map<string, LevelDoc>();
  private structuresByIri = new Map<string, StructureDoc>();
  private datasetsByIri = new Map<string, DatasetDoc>();
  private hierarchiesByDimension = new Map<string, HierarchyDoc[]>();

  constructor(doc: SchemaDoc) {
    this.doc = doc;
    for (const level of doc.levels) this.levelsByIri.set(level.iri, level);
    for (const st of doc.structures) this.structuresByIri.set(st.iri, st);
    for (const ds of doc.datasets) this.datasetsByIri.set(ds.iri, ds);
    for (const h of doc.hierarchies) {
      const bucket = this.hierarchiesByDimension.get(h.dimension) ?? [];
      bucket.push(h);
      this.hierarchiesByDimension.set(h.dimension, bucket);
    }
  }

  level(iri: string): LevelDoc {
    const level = this.levelsByIri.get(iri);
    if (!level) throw new Error(`unknown level ${iri}`);
    return level;
  }

  datasets(): DatasetDoc[] {
    return this.doc.datasets;
  }

  structureOf(dataset: string): StructureDoc {
    const ds = this.datasetsByIri.get(dataset);
    if (!ds) throw new Error(`unknown dataset ${dataset}`);
    const st = this.structuresByIri.get(ds.structure);
    if (!st) throw new Error(`dataset ${dataset} has no structure`);
    return st;
  }

  measuresOf(dataset: string): MeasureDoc[] {
    const st = this.structureOf(dataset);
    return this.doc.measures.filter((m) => st.measures.includes(m.iri));
  }

  baseLevelOf(dataset: string, dimension: string): string | null {
    const st = this.structureOf(dataset);
    for (const b of st.baseLevels) if (b.dimension === dimension) return b.level;
    return null;
  }

  dimensionsOf(dataset: string): string[] {
    return this.structureOf(dataset).baseLevels.map((b) => b.dimension);
  }

  /** Levels reachable from the dataset's base level, bottom-up (base first). */
  selectableLevels(dataset: string, dimension: string): string[] {
    const base = this.baseLevelOf(dataset, dimension);
    if (base === null) return [];
    const out = [base];
    const seen = new Set(out);
    for (const h of this.hierarchiesByDimension.get(dimension) ?? []) {
      const up = new Map(h.steps.map((s) => [s.child, s.parent]));
      let cursor = base;
      while (up.has(cursor)) {
        cursor = up.get(cursor)!;
        if (!seen.has(cursor)) {
          seen.add(cursor);
          out.push(cursor);
        }
      }
    }
    return out;
  }

  /** Hops strictly above `level` along the dataset chain. */
  levelsAbove(dataset: string, dimension: string, level: string): string[] {
    const chain = this.selectableLevels(dataset, dimension);
    const at = chain.indexOf(level);
    return at < 0 ? [] : chain.slice(at + 1);
  }

  /** Hops strictly below `level`, nearest first, down to the base level. */
  levelsBelow(dataset: string, dimension: string, level: string): string[] {
    const chain = this.selectableLevels(dataset, dimension);
    const at = chain.indexOf(level);
    return at < 0 ? [] : chain.slice(0, at).reverse();
  }

  attributesOf(level: string): AttributeDoc[] {
    return this.level(level).attributes.filter((a) => a.kind === "datatype");
  }

  /** The display default: a *Name attribute when present, else the identifier. */
  displayAttribute(level: string): string {
    const doc = this.level(level);
    for (const attr of doc.attributes) {
      if (localName(attr.iri).toLowerCase().endsWith("name")) return attr.iri;
    }
    return doc.identifier || doc.attributes[0]?.iri || "";
  }

  /** Advisory pre-flight check; the server remains authoritative. */
  validate(query: QueryDoc): string[] {
    const problems: string[] = [];
    if (!this.datasetsByIri.has(query.dataset)) {
      return [`unknown dataset ${query.dataset}`];
    }
    const seen = new Set<string>();
    for (const g of query.groupBy) {
      if (seen.has(g.dimension)) problems.push(`${localName(g.dimension)} grouped twice`);
      seen.add(g.dimension);
      if (!this.selectableLevels(query.dataset, g.dimension).includes(g.level)) {
        problems.push(`${localName(g.level)} is not reachable in ${localName(g.dimension)}`);
      }
      const level = this.levelsByIri.get(g.level);
      if (level && !level.attributes.some((a) => a.iri === g.attribute)) {
        problems.push(`${localName(g.attribute)} is not on ${localName(g.level)}`);
      }
    }
    if (query.aggregates.length === 0) problems.push("pick at least one aggregate");
    const st = this.structureOf(query.dataset);
    for (const a of query.aggregates) {
      if (!st.measures.includes(a.measure)) {
        problems.push(`${localName(a.measure)} is not a measure of this cuboid`);
      }
    }
    return problems;
  }
}
