"""Pipeline from cleansed tabular sources to the multidimensional ABox.

Extraction keeps the micro rows only (aggregate rows dropped, code
substitutions applied), member and observation generation follow the
source-to-target mappings, external same-as links come from 2-column CSV
files, and the load phase writes one deterministic Turtle dump.  Interim
results land in a staging directory so a failed run keeps its partial
output.
"""

from __future__ import annotations

import csv
import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote

from .mapping import (
    ConceptMapping,
    MappingError,
    MappingSet,
    SourceColumn,
    SourceTable,
    SourceTBox,
    evaluate_expression,
    infer_source_tbox,
    parse_mappings,
    sniff_type,
)
from .rdf import (
    OWL,
    QB,
    QB4O,
    RDF,
    RDFS,
    XSD_STRING,
    Graph,
    Iri,
    Literal,
    parse_turtle,
    serialize_turtle,
)
from .schema import CubeDataset, CubeSchema, Level, load_tbox, local_name, validate_tbox


class EtlError(RuntimeError):
    pass


class PipelineError(EtlError):
    def __init__(self, phase: str, cause: Exception | str):
        super().__init__(f"phase {phase!r} failed: {cause}")
        self.phase = phase
        self.cause = cause


# -- extraction ----------------------------------------------------------------


@dataclass(frozen=True)
class CleansingSpec:
    drop_column: str | None = None     # rows matching (column, pattern) are aggregates
    drop_pattern: str | None = None
    substitutions: dict[str, dict[str, str]] = field(default_factory=dict)
    trim: bool = True

    @classmethod
    def from_json(cls, doc: dict | None) -> "CleansingSpec":
        doc = doc or {}
        drop = doc.get("dropRow") or {}
        return cls(
            drop_column=drop.get("column"),
            drop_pattern=drop.get("pattern"),
            substitutions={c: dict(t) for c, t in (doc.get("substitutions") or {}).items()},
            trim=bool(doc.get("trim", True)),
        )

    def drops(self, row: dict[str, str]) -> bool:
        if self.drop_column is None or self.drop_pattern is None:
            return False
        return re.search(self.drop_pattern, row.get(self.drop_column, "")) is not None


@dataclass(frozen=True)
class TabularDataset:
    table: SourceTable
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        width = len(self.table.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise EtlError(f"table {self.table.name}: row {i + 1} has {len(row)} "
                               f"cells, expected {width}")

    def row_dicts(self) -> list[dict[str, str]]:
        names = self.table.column_names()
        return [dict(zip(names, row)) for row in self.rows]


def extract_csv(path: str | Path, spec: CleansingSpec | None = None,
                table_name: str | None = None) -> TabularDataset:
    """Read an RFC-4180 CSV (header row mandatory) and cleanse it."""
    spec = spec or CleansingSpec()
    path = Path(path)
    name = table_name or path.stem
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise EtlError(f"{path}: empty file, header row required") from None
            header = [h.strip() for h in header]
            rows: list[tuple[str, ...]] = []
            for lineno, raw in enumerate(reader, start=2):
                if not raw:
                    continue
                if len(raw) != len(header):
                    raise EtlError(f"{path}: ragged row at line {lineno}: "
                                   f"{len(raw)} cells, expected {len(header)}")
                cells = [c.strip() if spec.trim else c for c in raw]
                row = dict(zip(header, cells))
                if spec.drops(row):
                    continue
                for column, table in spec.substitutions.items():
                    if column in row and row[column] in table:
                        row[column] = table[row[column]]
                rows.append(tuple(row[h] for h in header))
    except OSError as exc:
        raise EtlError(f"cannot read {path}: {exc}") from exc

    columns = tuple(
        SourceColumn(h, sniff_type([r[i] for r in rows])) for i, h in enumerate(header)
    )
    return TabularDataset(SourceTable(name, columns), tuple(rows))


# -- IRI minting ----------------------------------------------------------------


def member_iri(base: str, level_local: str, key: str) -> str:
    return f"{base}{level_local}/{quote(key, safe='')}"


def observation_iri(base: str, key: str) -> str:
    return f"{base}observation/{quote(key, safe='')}"


def _as_key(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


# -- ABox generation --------------------------------------------------------------


def _mapping_for_table(mappings: MappingSet, table_name: str) -> ConceptMapping:
    for cm in mappings.concept_mappings:
        if local_name(cm.source_concept) == table_name:
            return cm
    raise MappingError(f"no concept mapping for source table {table_name!r}")


def generate_level_members(
    schema: CubeSchema,
    mappings: MappingSet,
    data: TabularDataset,
    base: str,
    context: Graph | None = None,
    strict: bool = False,
    warnings: list[str] | None = None,
) -> Graph:
    """Create one level member per accepted source row.

    Each member gets a minted IRI, a type and memberOf triple, and one triple
    per mapped attribute; roll-up attributes point at the parent member IRI
    minted by the same rule.  With *strict* set, roll-up targets missing from
    *context* (previously generated members) raise; otherwise they are noted
    in *warnings*.
    """
    cm = _mapping_for_table(mappings, data.table.name)
    level = schema.levels.get(cm.target_concept)
    if level is None:
        raise MappingError(f"concept mapping {cm.iri} does not target a level")

    g = Graph()
    a, member_of = Iri(RDF.type), Iri(QB4O.memberOf)
    seen_keys: set[str] = set()
    for row in data.row_dicts():
        if not cm.accepts(row):
            continue
        key = _as_key(evaluate_expression(cm.iri_value, row))
        if key in seen_keys:
            raise EtlError(f"level {level.local}: duplicate identifier value {key!r}")
        seen_keys.add(key)
        m = Iri(member_iri(base, level.local, key))
        g.add(m, a, Iri(QB4O.LevelMember))
        g.add(m, member_of, Iri(level.iri))
        for pm in cm.properties:
            attr = level.attribute(pm.target_property)
            value = _as_key(evaluate_expression(pm.source, row))
            if value == "":
                continue  # absent attribute stays absent, completeness will see it
            if attr.is_rollup:
                parent = schema.levels[attr.range]
                target = Iri(member_iri(base, parent.local, value))
                if context is not None and context.value(target, member_of) is None:
                    message = (f"level {level.local}: member {key} rolls up to missing "
                               f"{parent.local} member {value!r}")
                    if strict:
                        raise EtlError(message)
                    if warnings is not None:
                        warnings.append(message)
                g.add(m, Iri(attr.iri), target)
            else:
                datatype = attr.range or XSD_STRING
                g.add(m, Iri(attr.iri), Literal(value, datatype))
    return g


def generate_observations(
    schema: CubeSchema,
    mappings: MappingSet,
    data: TabularDataset,
    dataset: CubeDataset,
    base: str,
    optional_measures: set[str] | frozenset[str] = frozenset(),
) -> Graph:
    """Create one observation per accepted source row of a fact table."""
    cm = _mapping_for_table(mappings, data.table.name)
    structure = schema.structures.get(cm.target_concept)
    if structure is None or structure.iri != dataset.structure:
        raise MappingError(f"concept mapping {cm.iri} does not target the structure "
                           f"of dataset {dataset.iri}")

    by_target = {pm.target_property: pm for pm in cm.properties}
    for _, level_iri in structure.base_levels:
        if level_iri not in by_target:
            raise MappingError(f"structure {structure.iri}: base level {level_iri} "
                               f"has no property mapping")
    for m in structure.measures:
        if m not in by_target and m not in optional_measures:
            raise MappingError(f"structure {structure.iri}: measure {m} is neither "
                               f"mapped nor declared optional")

    g = Graph()
    a, ds_pred = Iri(RDF.type), Iri(QB.dataSet)
    seen_keys: set[str] = set()
    for i, row in enumerate(data.row_dicts(), start=1):
        if not cm.accepts(row):
            continue
        key = _as_key(evaluate_expression(cm.iri_value, row))
        if key in seen_keys:
            raise EtlError(f"dataset {dataset.local}: duplicate observation id {key!r}")
        seen_keys.add(key)
        o = Iri(observation_iri(base, key))
        g.add(o, a, Iri(QB.Observation))
        g.add(o, ds_pred, Iri(dataset.iri))
        for _, level_iri in structure.base_levels:
            level = schema.levels[level_iri]
            value = _as_key(evaluate_expression(by_target[level_iri].source, row))
            if value == "":
                raise EtlError(f"dataset {dataset.local}: row {i} misses the "
                               f"{level.local} key")
            g.add(o, Iri(level_iri), Iri(member_iri(base, level.local, value)))
        for measure_iri in structure.measures:
            pm = by_target.get(measure_iri)
            if pm is None:
                continue
            cell = _as_key(evaluate_expression(pm.source, row))
            if cell == "":
                continue  # absent measure stays absent
            try:
                float(cell)
            except ValueError:
                raise EtlError(f"dataset {dataset.local}: row {i} has non-numeric "
                               f"{local_name(measure_iri)} value {cell!r}") from None
            g.add(o, Iri(measure_iri), Literal(cell, schema.measures[measure_iri].datatype))
    return g


# -- external links ---------------------------------------------------------------


@dataclass(frozen=True)
class LinkSet:
    entries: tuple[tuple[str, str], ...]

    @classmethod
    def from_csv(cls, path: str | Path) -> "LinkSet":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2:
                raise EtlError(f"{path}: link file needs a two-column header")
            entries = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) < 2:
                    raise EtlError(f"{path}: ragged row at line {lineno}")
                entries.append((row[0].strip(), row[1].strip()))
        return cls(tuple(entries))


def apply_links(graph: Graph, links: LinkSet, strict: bool = False) -> Graph:
    """Insert one (local, owl:sameAs, external) triple per entry; in strict
    mode every local IRI must already occur in the graph."""
    same_as = Iri(OWL.sameAs)
    for local, external in links.entries:
        subject = Iri(local)
        if strict and not graph.contains_resource(subject):
            raise EtlError(f"link target {local} is not a resource in the graph")
        graph.add(subject, same_as, Iri(external))
    return graph


# -- pipeline -----------------------------------------------------------------------

PHASES = (
    "Extraction",
    "Target TBox Generation",
    "Source TBox Generation",
    "Mapping Generation",
    "ABox Generation",
    "External Linking",
    "Load",
)


@dataclass
class PhaseResult:
    name: str
    seconds: float
    records: int


@dataclass
class PhaseReport:
    phases: list[PhaseResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "phases": [
                {"name": p.name, "seconds": round(p.seconds, 6), "records": p.records}
                for p in self.phases
            ],
            "totalSeconds": round(sum(p.seconds for p in self.phases), 6),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class SourceConfig:
    table: str
    path: Path
    cleansing: CleansingSpec = CleansingSpec()
    optional_measures: frozenset[str] = frozenset()


@dataclass(frozen=True)
class PipelineConfig:
    base_iri: str
    tbox_path: Path
    mapping_path: Path
    output_path: Path
    staging_dir: Path
    sources: tuple[SourceConfig, ...]
    link_paths: tuple[Path, ...] = ()
    strict: bool = True

    def __post_init__(self):
        if "://" not in self.base_iri:
            raise EtlError(f"base IRI must be absolute: {self.base_iri!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        root = path.parent

        def resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else root / candidate

        sources = tuple(
            SourceConfig(
                table=s["table"],
                path=resolve(s["path"]),
                cleansing=CleansingSpec.from_json(s.get("cleansing")),
                optional_measures=frozenset(s.get("optionalMeasures", ())),
            )
            for s in doc.get("sources", ())
        )
        return cls(
            base_iri=doc["baseIri"],
            tbox_path=resolve(doc["tbox"]),
            mapping_path=resolve(doc["mappings"]),
            output_path=resolve(doc.get("output", "dump.ttl")),
            staging_dir=resolve(doc.get("staging", "staging")),
            sources=sources,
            link_paths=tuple(resolve(p) for p in doc.get("links", ())),
            strict=bool(doc.get("strict", True)),
        )


def _level_rank(schema: CubeSchema) -> dict[str, int]:
    """Distance from the top of the tallest hierarchy; parents rank lower."""
    rank = {iri: 0 for iri in schema.levels}
    changed = True
    while changed:
        changed = False
        for hier in schema.hierarchies.values():
            for step in hier.steps:
                if rank[step.child] < rank[step.parent] + 1:
                    rank[step.child] = rank[step.parent] + 1
                    changed = True
    return rank


def run_pipeline(config: PipelineConfig) -> tuple[Graph, PhaseReport]:
    """Execute all seven phases and write the Turtle dump.

    Any phase error aborts with the phase name attached; whatever staging
    output the earlier phases produced is kept.
    """
    report = PhaseReport()
    staging = config.staging_dir
    (staging / "extraction").mkdir(parents=True, exist_ok=True)

    def run_phase(name, fn):
        start = time.perf_counter()
        try:
            records = fn()
        except Exception as exc:
            raise PipelineError(name, exc) from exc
        report.phases.append(PhaseResult(name, time.perf_counter() - start, records))

    state: dict = {}

    def extraction():
        datasets: dict[str, TabularDataset] = {}
        for src in config.sources:
            data = extract_csv(src.path, src.cleansing, table_name=src.table)
            datasets[src.table] = data
            with open(staging / "extraction" / f"{src.table}.csv", "w", newline="",
                      encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(data.table.column_names())
                writer.writerows(data.rows)
        state["datasets"] = datasets
        return sum(len(d.rows) for d in datasets.values())

    def target_tbox():
        with open(config.tbox_path, encoding="utf-8") as fh:
            tbox_graph = parse_turtle(fh.read())
        schema = load_tbox(tbox_graph)
        violations = validate_tbox(schema)
        if violations:
            raise EtlError("invalid target TBox:\n" + "\n".join(violations))
        state["tbox_graph"] = tbox_graph
        state["schema"] = schema
        return len(tbox_graph)

    def source_tboxes():
        boxes: dict[str, SourceTBox] = {}
        tbox_dir = staging / "source_tbox"
        tbox_dir.mkdir(exist_ok=True)
        for name, data in state["datasets"].items():
            box = infer_source_tbox(data.table)
            boxes[box.class_iri] = box
            g = Graph(prefixes={"onto": box.class_iri.rsplit("#", 1)[0] + "#"})
            g.add(Iri(box.class_iri), Iri(RDF.type), Iri(OWL.Class))
            for prop in box.properties:
                g.add(Iri(prop.iri), Iri(RDF.type), Iri(OWL.DatatypeProperty))
                g.add(Iri(prop.iri), Iri(RDFS.range), Iri(prop.range))
            with open(tbox_dir / f"{name}.ttl", "w", encoding="utf-8") as fh:
                fh.write(serialize_turtle(g))
        state["source_tboxes"] = boxes
        return sum(1 + len(b.properties) for b in boxes.values())

    def mapping_generation():
        with open(config.mapping_path, encoding="utf-8") as fh:
            mapping_graph = parse_turtle(fh.read())
        mappings = parse_mappings(mapping_graph, state["source_tboxes"], state["schema"])
        state["mappings"] = mappings
        return sum(1 + len(cm.properties) for cm in mappings.concept_mappings)

    def abox_generation():
        schema: CubeSchema = state["schema"]
        mappings: MappingSet = state["mappings"]
        abox_dir = staging / "abox"
        abox_dir.mkdir(exist_ok=True)

        level_sources: list[tuple[SourceConfig, Level]] = []
        fact_sources: list[tuple[SourceConfig, CubeDataset]] = []
        for src in config.sources:
            cm = _mapping_for_table(mappings, src.table)
            if cm.target_concept in schema.levels:
                level_sources.append((src, schema.levels[cm.target_concept]))
            elif cm.target_concept in schema.structures:
                dataset = schema.dataset_for_structure(cm.target_concept)
                if dataset is None:
                    raise EtlError(f"structure {cm.target_concept} has no dataset")
                fact_sources.append((src, dataset))
            else:
                raise MappingError(f"mapping for table {src.table} targets unknown "
                                   f"concept {cm.target_concept}")

        rank = _level_rank(schema)
        level_sources.sort(key=lambda pair: (rank[pair[1].iri], pair[1].iri))

        abox = Graph()
        records = 0
        for src, level in level_sources:
            g = generate_level_members(
                schema, mappings, state["datasets"][src.table], config.base_iri,
                context=abox, strict=config.strict, warnings=report.warnings,
            )
            records += sum(1 for _ in g.triples(predicate=Iri(QB4O.memberOf)))
            with open(abox_dir / f"{level.local}.ttl", "w", encoding="utf-8") as fh:
                fh.write(serialize_turtle(g))
            abox.merge(g)
        for src, dataset in fact_sources:
            g = generate_observations(
                schema, mappings, state["datasets"][src.table], dataset,
                config.base_iri, optional_measures=src.optional_measures,
            )
            records += sum(1 for _ in g.triples(predicate=Iri(QB.dataSet)))
            with open(abox_dir / f"{dataset.local}.ttl", "w", encoding="utf-8") as fh:
                fh.write(serialize_turtle(g))
            abox.merge(g)

        if config.strict:
            _check_observation_members(schema, abox)
        state["abox"] = abox
        return records

    def external_linking():
        abox: Graph = state["abox"]
        added = 0
        for path in config.link_paths:
            links = LinkSet.from_csv(path)
            before = len(abox)
            apply_links(abox, links, strict=config.strict)
            added += len(abox) - before
        return added

    def load():
        graph = Graph(prefixes=dict(state["tbox_graph"].prefixes))
        graph.merge(state["tbox_graph"])
        graph.merge(state["abox"])
        config.output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(serialize_turtle(graph))
        state["graph"] = graph
        return len(graph)

    run_phase("Extraction", extraction)
    run_phase("Target TBox Generation", target_tbox)
    run_phase("Source TBox Generation", source_tboxes)
    run_phase("Mapping Generation", mapping_generation)
    run_phase("ABox Generation", abox_generation)
    run_phase("External Linking", external_linking)
    run_phase("Load", load)
    return state["graph"], report


def _check_observation_members(schema: CubeSchema, abox: Graph) -> None:
    """Every observation must reference an existing member of the declared level."""
    member_of = Iri(QB4O.memberOf)
    for ds in schema.datasets.values():
        structure = schema.structures[ds.structure]
        for obs in abox.subjects(Iri(QB.dataSet), Iri(ds.iri)):
            for _, level_iri in structure.base_levels:
                member = abox.value(obs, Iri(level_iri))
                if member is None:
                    raise EtlError(f"observation {obs} lacks a {local_name(level_iri)} member")
                declared = abox.value(member, member_of)
                if not (isinstance(declared, Iri) and declared.value == level_iri):
                    raise EtlError(f"observation {obs} references {member} which is not "
                                   f"a member of {local_name(level_iri)}")
