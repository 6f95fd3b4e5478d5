"""Multidimensional cube schema: dimensions, hierarchies, levels, measures,
cuboid structures and datasets, with QB4OLAP Turtle load/serialize, JSON
config load/dump, validation, and roll-up path resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .rdf import (
    MAP,
    NUMERIC_DATATYPES,
    QB,
    QB4O,
    RDF,
    RDFS,
    Graph,
    Iri,
    XSD_FLOAT,
)
from .rdf.terms import BlankNode


class SchemaError(ValueError):
    """Unresolvable schema content: dangling references, bad serialization input."""


class PathNotFoundError(SchemaError):
    def __init__(self, from_level: str, to_level: str):
        super().__init__(f"no roll-up path from {from_level} to {to_level}")
        self.from_level = from_level
        self.to_level = to_level


class AmbiguousPathError(SchemaError):
    def __init__(self, from_level: str, to_level: str, hierarchies: list[str]):
        super().__init__(
            f"multiple hierarchies connect {from_level} to {to_level}: "
            f"{', '.join(sorted(hierarchies))}; pass an explicit hierarchy"
        )
        self.hierarchies = hierarchies


class AggregateFunction(str, Enum):
    SUM = "SUM"
    AVG = "AVG"
    MIN = "MIN"
    MAX = "MAX"
    COUNT = "COUNT"


class Cardinality(str, Enum):
    ONE_TO_MANY = "one-to-many"
    ONE_TO_ONE = "one-to-one"
    MANY_TO_MANY = "many-to-many"


_CARDINALITY_IRI = {
    Cardinality.ONE_TO_MANY: QB4O.OneToMany,
    Cardinality.ONE_TO_ONE: QB4O.OneToOne,
    Cardinality.MANY_TO_MANY: QB4O.ManyToMany,
}
_CARDINALITY_BY_IRI = {v: k for k, v in _CARDINALITY_IRI.items()}

_AGGREGATE_IRI = {fn: QB4O[fn.value.lower()] for fn in AggregateFunction}


def _aggregate_from_iri(iri: str) -> AggregateFunction | None:
    local = iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1].upper()
    try:
        return AggregateFunction(local)
    except ValueError:
        return None


def local_name(iri: str) -> str:
    """Last path or fragment segment of an IRI."""
    for sep in ("#", "/", ":"):
        if sep in iri:
            tail = iri.rsplit(sep, 1)[1]
            if tail:
                return tail
    return iri


# -- model -----------------------------------------------------------------


@dataclass(frozen=True)
class LevelAttribute:
    iri: str
    range: str
    is_rollup: bool = False  # object-valued: range names a level

    @property
    def local(self) -> str:
        return local_name(self.iri)


@dataclass(frozen=True)
class Level:
    iri: str
    attributes: tuple[LevelAttribute, ...]
    identifier: str

    def __post_init__(self):
        # canonical attribute order keeps Turtle round-trips structural
        object.__setattr__(self, "attributes",
                           tuple(sorted(self.attributes, key=lambda a: a.iri)))

    @property
    def local(self) -> str:
        return local_name(self.iri)

    def attribute(self, iri: str) -> LevelAttribute:
        for a in self.attributes:
            if a.iri == iri:
                return a
        raise SchemaError(f"level {self.iri} has no attribute {iri}")

    def has_attribute(self, iri: str) -> bool:
        return any(a.iri == iri for a in self.attributes)


@dataclass(frozen=True)
class HierarchyStep:
    child: str
    parent: str
    rollup: str
    cardinality: Cardinality = Cardinality.ONE_TO_MANY

    def content(self) -> tuple:
        return (self.child, self.parent, self.rollup, self.cardinality)


@dataclass(frozen=True)
class Hierarchy:
    iri: str
    dimension: str
    levels: tuple[str, ...]  # bottom-up
    steps: tuple[HierarchyStep, ...]

    @property
    def local(self) -> str:
        return local_name(self.iri)


@dataclass(frozen=True)
class Dimension:
    iri: str
    hierarchies: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "hierarchies", tuple(sorted(self.hierarchies)))

    @property
    def local(self) -> str:
        return local_name(self.iri)


@dataclass(frozen=True)
class Measure:
    iri: str
    datatype: str = XSD_FLOAT
    default_aggregate: AggregateFunction = AggregateFunction.SUM

    @property
    def local(self) -> str:
        return local_name(self.iri)


@dataclass(frozen=True)
class CuboidStructure:
    iri: str
    base_levels: tuple[tuple[str, str], ...]  # (dimension, level)
    measures: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "base_levels", tuple(sorted(self.base_levels)))
        object.__setattr__(self, "measures", tuple(sorted(self.measures)))

    @property
    def local(self) -> str:
        return local_name(self.iri)

    def base_level_of(self, dimension: str) -> str | None:
        for dim, level in self.base_levels:
            if dim == dimension:
                return level
        return None


@dataclass(frozen=True)
class CubeDataset:
    iri: str
    structure: str

    @property
    def local(self) -> str:
        return local_name(self.iri)


@dataclass
class CubeSchema:
    dimensions: dict[str, Dimension] = field(default_factory=dict)
    hierarchies: dict[str, Hierarchy] = field(default_factory=dict)
    levels: dict[str, Level] = field(default_factory=dict)
    measures: dict[str, Measure] = field(default_factory=dict)
    structures: dict[str, CuboidStructure] = field(default_factory=dict)
    datasets: dict[str, CubeDataset] = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubeSchema):
            return NotImplemented
        return (self.dimensions == other.dimensions
                and self.hierarchies == other.hierarchies
                and self.levels == other.levels
                and self.measures == other.measures
                and self.structures == other.structures
                and self.datasets == other.datasets)

    def is_empty(self) -> bool:
        return not (self.dimensions or self.hierarchies or self.levels
                    or self.measures or self.structures or self.datasets)

    def hierarchies_of(self, dimension: str) -> list[Hierarchy]:
        dim = self.dimensions[dimension]
        return [self.hierarchies[h] for h in dim.hierarchies if h in self.hierarchies]

    def dimension_of_level(self, level: str) -> str | None:
        """The unique dimension whose hierarchies contain *level*, if unique."""
        dims = {h.dimension for h in self.hierarchies.values() if level in h.levels}
        if len(dims) == 1:
            return next(iter(dims))
        return None

    def dataset_for_structure(self, structure: str) -> CubeDataset | None:
        for ds in self.datasets.values():
            if ds.structure == structure:
                return ds
        return None


# -- roll-up paths -----------------------------------------------------------


def rollup_path(
    schema: CubeSchema,
    from_level: str,
    to_level: str,
    hierarchy: str | None = None,
) -> list[HierarchyStep]:
    """The step chain from *from_level* up to *to_level* within one hierarchy.

    Identical endpoints yield an empty chain.  When several hierarchies
    connect the endpoints with materially different chains, the choice must
    be made explicit through *hierarchy*.
    """
    for iri in (from_level, to_level):
        if iri not in schema.levels:
            raise SchemaError(f"undeclared level {iri}")
    if from_level == to_level:
        return []

    candidates: dict[tuple, tuple[str, list[HierarchyStep]]] = {}
    pool = ([schema.hierarchies[hierarchy]] if hierarchy else list(schema.hierarchies.values()))
    if hierarchy and hierarchy not in schema.hierarchies:
        raise SchemaError(f"undeclared hierarchy {hierarchy}")
    for h in pool:
        if from_level not in h.levels:
            continue
        up = {s.child: s for s in h.steps}
        chain: list[HierarchyStep] = []
        cursor = from_level
        seen = {cursor}
        while cursor != to_level and cursor in up:
            step = up[cursor]
            chain.append(step)
            cursor = step.parent
            if cursor in seen:  # cyclic chain; validation reports it
                break
            seen.add(cursor)
        if cursor == to_level:
            candidates[tuple(s.content() for s in chain)] = (h.iri, chain)

    if not candidates:
        raise PathNotFoundError(from_level, to_level)
    if len(candidates) > 1:
        raise AmbiguousPathError(from_level, to_level, [h for h, _ in candidates.values()])
    return next(iter(candidates.values()))[1]


# -- validation --------------------------------------------------------------


def validate_tbox(schema: CubeSchema) -> list[str]:
    """Semantic validation; each violation is one human-readable line."""
    out: list[str] = []

    for dim in schema.dimensions.values():
        if not dim.hierarchies:
            out.append(f"dimension {dim.iri} declares no hierarchy")
        for h in dim.hierarchies:
            hier = schema.hierarchies.get(h)
            if hier is None:
                out.append(f"dimension {dim.iri} lists undeclared hierarchy {h}")
            elif hier.dimension != dim.iri:
                out.append(f"hierarchy {h} does not declare dimension {dim.iri} back")

    for hier in schema.hierarchies.values():
        dim = schema.dimensions.get(hier.dimension)
        if dim is None:
            out.append(f"hierarchy {hier.iri} is in undeclared dimension {hier.dimension}")
        elif hier.iri not in dim.hierarchies:
            out.append(f"dimension {hier.dimension} does not list hierarchy {hier.iri} back")
        for lv in hier.levels:
            if lv not in schema.levels:
                out.append(f"hierarchy {hier.iri} lists undeclared level {lv}")
        expected_pairs = list(zip(hier.levels, hier.levels[1:]))
        actual_pairs = [(s.child, s.parent) for s in hier.steps]
        if actual_pairs != expected_pairs:
            out.append(
                f"hierarchy {hier.iri} steps do not chain its level order "
                f"{' -> '.join(local_name(l) for l in hier.levels)}"
            )
        if len(set(hier.levels)) != len(hier.levels):
            out.append(f"hierarchy {hier.iri} repeats a level (cycle)")
        for step in hier.steps:
            child = schema.levels.get(step.child)
            parent = schema.levels.get(step.parent)
            if child is None or parent is None:
                continue  # reported above
            if not child.has_attribute(step.rollup):
                out.append(f"step {local_name(step.child)}->{local_name(step.parent)}: "
                           f"roll-up property {step.rollup} is not an attribute of the child level")
                continue
            attr = child.attribute(step.rollup)
            if not attr.is_rollup:
                out.append(f"step {local_name(step.child)}->{local_name(step.parent)}: "
                           f"roll-up property {step.rollup} is datatype-valued")
            elif attr.range != step.parent:
                out.append(f"step {local_name(step.child)}->{local_name(step.parent)}: "
                           f"roll-up property {step.rollup} ranges over {attr.range}, not the parent level")

    shared_attrs: dict[str, LevelAttribute] = {}
    for level in schema.levels.values():
        seen = set()
        for attr in level.attributes:
            if attr.iri in seen:
                out.append(f"level {level.iri} declares attribute {attr.iri} twice")
            seen.add(attr.iri)
            if attr.is_rollup and attr.range not in schema.levels:
                out.append(f"attribute {attr.iri} rolls up to undeclared level {attr.range}")
            prior = shared_attrs.setdefault(attr.iri, attr)
            if prior != attr:
                out.append(f"attribute {attr.iri} is declared with conflicting ranges "
                           f"across levels")
        if level.identifier not in seen:
            out.append(f"level {level.iri} identifier {level.identifier} is not one of its attributes")
        owners = {h.dimension for h in schema.hierarchies.values() if level.iri in h.levels}
        if not owners:
            out.append(f"level {level.iri} belongs to no hierarchy")
        elif len(owners) > 1:
            out.append(f"level {level.iri} is reachable from several dimensions: "
                       f"{', '.join(sorted(owners))}")

    for measure in schema.measures.values():
        if measure.datatype not in NUMERIC_DATATYPES:
            out.append(f"measure {measure.iri} has non-numeric datatype {measure.datatype}")

    for st in schema.structures.values():
        if not st.measures:
            out.append(f"structure {st.iri} declares no measure")
        dims_seen = set()
        for dim, level in st.base_levels:
            if dim in dims_seen:
                out.append(f"structure {st.iri} has two base levels in dimension {dim}")
            dims_seen.add(dim)
            if dim not in schema.dimensions:
                out.append(f"structure {st.iri} references undeclared dimension {dim}")
            if level not in schema.levels:
                out.append(f"structure {st.iri} references undeclared level {level}")
            elif schema.dimension_of_level(level) != dim:
                out.append(f"structure {st.iri}: level {level} is not in dimension {dim}")
        for m in st.measures:
            if m not in schema.measures:
                out.append(f"structure {st.iri} references undeclared measure {m}")

    for ds in schema.datasets.values():
        if ds.structure not in schema.structures:
            out.append(f"dataset {ds.iri} references undeclared structure {ds.structure}")

    return out


# -- Turtle load/serialize ----------------------------------------------------


def _subject_iris(graph: Graph, type_iri: str) -> list[str]:
    return sorted(
        s.value for s in graph.subjects(Iri(RDF.type), Iri(type_iri)) if isinstance(s, Iri)
    )


def load_tbox(graph: Graph) -> CubeSchema:
    """Materialize the QB4OLAP assertions of *graph* into a schema.

    Unknown vocabulary is ignored; dangling references raise SchemaError.
    """
    schema = CubeSchema()

    level_iris = set(_subject_iris(graph, QB4O.LevelProperty))
    attr_iris = set(_subject_iris(graph, QB4O.LevelAttribute))
    measure_iris = set(_subject_iris(graph, QB.MeasureProperty))

    # attributes grouped by owning level (qb4o:inLevel, inverse qb4o:hasAttribute)
    attrs_by_level: dict[str, list[LevelAttribute]] = {iri: [] for iri in level_iris}
    for a in sorted(attr_iris):
        owners = {o.value for o in graph.objects(Iri(a), Iri(QB4O.inLevel)) if isinstance(o, Iri)}
        owners |= {s.value for s in graph.subjects(Iri(QB4O.hasAttribute), Iri(a))
                   if isinstance(s, Iri)}
        rng = graph.value(Iri(a), Iri(RDFS.range))
        range_iri = rng.value if isinstance(rng, Iri) else ""
        for owner in sorted(owners):
            if owner not in level_iris:
                raise SchemaError(f"attribute {a} declared in undeclared level {owner}")
            attrs_by_level[owner].append(
                LevelAttribute(a, range_iri, is_rollup=range_iri in level_iris)
            )

    for iri in sorted(level_iris):
        attrs = tuple(attrs_by_level[iri])
        ident = graph.value(Iri(iri), Iri(MAP.hasIdentifier))
        identifier = ident.value if isinstance(ident, Iri) else (attrs[0].iri if attrs else "")
        schema.levels[iri] = Level(iri, attrs, identifier)

    # hierarchy steps, grouped by hierarchy
    steps_by_hier: dict[str, list[HierarchyStep]] = {}
    for node in graph.subjects(Iri(RDF.type), Iri(QB4O.HierarchyStep)):
        child = graph.value(node, Iri(QB4O.childLevel))
        parent = graph.value(node, Iri(QB4O.parentLevel))
        rollup = graph.value(node, Iri(QB4O.rollup))
        if not isinstance(child, Iri) or not isinstance(parent, Iri):
            raise SchemaError(f"hierarchy step {node} lacks child or parent level")
        for lv in (child.value, parent.value):
            if lv not in level_iris:
                raise SchemaError(f"hierarchy step references undeclared level {lv}")
        card = graph.value(node, Iri(QB4O.pcCardinality))
        cardinality = _CARDINALITY_BY_IRI.get(
            card.value if isinstance(card, Iri) else "", Cardinality.ONE_TO_MANY
        )
        step = HierarchyStep(
            child.value, parent.value,
            rollup.value if isinstance(rollup, Iri) else "",
            cardinality,
        )
        for h in graph.objects(node, Iri(QB4O.inHierarchy)):
            if isinstance(h, Iri):
                steps_by_hier.setdefault(h.value, []).append(step)

    dim_iris = set(_subject_iris(graph, QB.DimensionProperty))

    for iri in _subject_iris(graph, QB4O.Hierarchy):
        dim = graph.value(Iri(iri), Iri(QB4O.inDimension))
        if not isinstance(dim, Iri):
            raise SchemaError(f"hierarchy {iri} declares no dimension")
        if dim.value not in dim_iris:
            raise SchemaError(f"hierarchy {iri} is in undeclared dimension {dim.value}")
        declared = {o.value for o in graph.objects(Iri(iri), Iri(QB4O.hasLevel))
                    if isinstance(o, Iri)}
        for lv in declared:
            if lv not in level_iris:
                raise SchemaError(f"hierarchy {iri} lists undeclared level {lv}")
        steps = _order_steps(steps_by_hier.get(iri, []), declared, iri)
        levels = _level_order(declared, steps)
        schema.hierarchies[iri] = Hierarchy(iri, dim.value, tuple(levels), tuple(steps))

    for iri in sorted(dim_iris):
        hiers = sorted(h for h, hier in schema.hierarchies.items() if hier.dimension == iri)
        declared = {o.value for o in graph.objects(Iri(iri), Iri(QB4O.hasHierarchy))
                    if isinstance(o, Iri)}
        for h in declared:
            if h not in schema.hierarchies:
                raise SchemaError(f"dimension {iri} lists undeclared hierarchy {h}")
        schema.dimensions[iri] = Dimension(iri, tuple(hiers))

    for iri in sorted(measure_iris):
        rng = graph.value(Iri(iri), Iri(RDFS.range))
        agg = graph.value(Iri(iri), Iri(QB4O.aggregateFunction))
        default = (_aggregate_from_iri(agg.value) if isinstance(agg, Iri) else None) \
            or AggregateFunction.SUM
        schema.measures[iri] = Measure(
            iri, rng.value if isinstance(rng, Iri) else XSD_FLOAT, default
        )

    for iri in _subject_iris(graph, QB.DataStructureDefinition):
        base_levels: list[tuple[str, str]] = []
        measures: list[str] = []
        for comp in graph.objects(Iri(iri), Iri(QB.component)):
            if not isinstance(comp, (Iri, BlankNode)):
                continue
            lv = graph.value(comp, Iri(QB4O.level))
            m = graph.value(comp, Iri(QB.measure))
            if isinstance(lv, Iri):
                if lv.value not in level_iris:
                    raise SchemaError(f"structure {iri} references undeclared level {lv.value}")
                dim = schema.dimension_of_level(lv.value)
                if dim is None:
                    raise SchemaError(
                        f"structure {iri}: cannot resolve a unique dimension for level {lv.value}"
                    )
                base_levels.append((dim, lv.value))
            if isinstance(m, Iri):
                if m.value not in measure_iris:
                    raise SchemaError(f"structure {iri} references undeclared measure {m.value}")
                measures.append(m.value)
        base_levels.sort()
        measures.sort()
        schema.structures[iri] = CuboidStructure(iri, tuple(base_levels), tuple(measures))

    for iri in _subject_iris(graph, QB.DataSet):
        st = graph.value(Iri(iri), Iri(QB.structure))
        if not isinstance(st, Iri) or st.value not in schema.structures:
            raise SchemaError(f"dataset {iri} references undeclared structure "
                              f"{st.value if isinstance(st, Iri) else st}")
        schema.datasets[iri] = CubeDataset(iri, st.value)

    return schema


def _order_steps(steps: list[HierarchyStep], levels: set[str], hierarchy: str) -> list[HierarchyStep]:
    """Chain steps bottom-up; leaves malformed inputs as-is for validation to report."""
    if not steps:
        return []
    by_child = {s.child: s for s in steps}
    parents = {s.parent for s in steps}
    bottoms = [s.child for s in steps if s.child not in parents]
    if len(bottoms) != 1:
        return sorted(steps, key=lambda s: (s.child, s.parent))
    ordered = []
    cursor = bottoms[0]
    seen = set()
    while cursor in by_child and cursor not in seen:
        seen.add(cursor)
        step = by_child[cursor]
        ordered.append(step)
        cursor = step.parent
    if len(ordered) != len(steps):
        return sorted(steps, key=lambda s: (s.child, s.parent))
    return ordered


def _level_order(declared: set[str], steps: list[HierarchyStep]) -> list[str]:
    if not steps:
        return sorted(declared)
    ordered = [steps[0].child] + [s.parent for s in steps]
    ordered += sorted(declared - set(ordered))
    return ordered


def serialize_tbox(schema: CubeSchema, prefixes: dict[str, str] | None = None) -> Graph:
    """Render the schema as QB4OLAP triples; refuses schemas with violations."""
    violations = validate_tbox(schema)
    if violations:
        raise SchemaError("cannot serialize invalid schema:\n" + "\n".join(violations))

    g = Graph(prefixes=prefixes or {})
    g.bind("qb", QB.base)
    g.bind("qb4o", QB4O.base)
    g.bind("rdf", RDF.base)
    g.bind("rdfs", RDFS.base)
    g.bind("map", MAP.base)
    a = Iri(RDF.type)

    for dim in schema.dimensions.values():
        g.add(Iri(dim.iri), a, Iri(QB.DimensionProperty))
        for h in dim.hierarchies:
            g.add(Iri(dim.iri), Iri(QB4O.hasHierarchy), Iri(h))

    for hier in schema.hierarchies.values():
        g.add(Iri(hier.iri), a, Iri(QB4O.Hierarchy))
        g.add(Iri(hier.iri), Iri(QB4O.inDimension), Iri(hier.dimension))
        for lv in hier.levels:
            g.add(Iri(hier.iri), Iri(QB4O.hasLevel), Iri(lv))
        for step in hier.steps:
            node = g.fresh_bnode()
            g.add(node, a, Iri(QB4O.HierarchyStep))
            g.add(node, Iri(QB4O.inHierarchy), Iri(hier.iri))
            g.add(node, Iri(QB4O.childLevel), Iri(step.child))
            g.add(node, Iri(QB4O.parentLevel), Iri(step.parent))
            if step.rollup:
                g.add(node, Iri(QB4O.rollup), Iri(step.rollup))
            g.add(node, Iri(QB4O.pcCardinality), Iri(_CARDINALITY_IRI[step.cardinality]))

    for level in schema.levels.values():
        g.add(Iri(level.iri), a, Iri(QB4O.LevelProperty))
        for attr in level.attributes:
            g.add(Iri(level.iri), Iri(QB4O.hasAttribute), Iri(attr.iri))
            g.add(Iri(attr.iri), a, Iri(QB4O.LevelAttribute))
            g.add(Iri(attr.iri), Iri(QB4O.inLevel), Iri(level.iri))
            if attr.range:
                g.add(Iri(attr.iri), Iri(RDFS.range), Iri(attr.range))
        if level.identifier:
            g.add(Iri(level.iri), Iri(MAP.hasIdentifier), Iri(level.identifier))

    for measure in schema.measures.values():
        g.add(Iri(measure.iri), a, Iri(QB.MeasureProperty))
        g.add(Iri(measure.iri), Iri(RDFS.range), Iri(measure.datatype))
        g.add(Iri(measure.iri), Iri(QB4O.aggregateFunction),
              Iri(_AGGREGATE_IRI[measure.default_aggregate]))

    for st in schema.structures.values():
        g.add(Iri(st.iri), a, Iri(QB.DataStructureDefinition))
        for _, level in st.base_levels:
            comp = g.fresh_bnode()
            g.add(Iri(st.iri), Iri(QB.component), comp)
            g.add(comp, Iri(QB4O.level), Iri(level))
        for m in st.measures:
            comp = g.fresh_bnode()
            g.add(Iri(st.iri), Iri(QB.component), comp)
            g.add(comp, Iri(QB.measure), Iri(m))
            g.add(comp, Iri(QB4O.aggregateFunction),
                  Iri(_AGGREGATE_IRI[schema.measures[m].default_aggregate]))

    for ds in schema.datasets.values():
        g.add(Iri(ds.iri), a, Iri(QB.DataSet))
        g.add(Iri(ds.iri), Iri(QB.structure), Iri(ds.structure))

    return g


# -- JSON config ---------------------------------------------------------------


def schema_to_json(schema: CubeSchema) -> dict:
    return {
        "dimensions": [
            {"iri": d.iri, "hierarchies": list(d.hierarchies)}
            for d in sorted(schema.dimensions.values(), key=lambda d: d.iri)
        ],
        "hierarchies": [
            {
                "iri": h.iri,
                "dimension": h.dimension,
                "levels": list(h.levels),
                "steps": [
                    {"child": s.child, "parent": s.parent, "rollup": s.rollup,
                     "cardinality": s.cardinality.value}
                    for s in h.steps
                ],
            }
            for h in sorted(schema.hierarchies.values(), key=lambda h: h.iri)
        ],
        "levels": [
            {
                "iri": lv.iri,
                "identifier": lv.identifier,
                "attributes": [
                    {"iri": a.iri, "range": a.range,
                     "kind": "rollup" if a.is_rollup else "datatype"}
                    for a in lv.attributes
                ],
            }
            for lv in sorted(schema.levels.values(), key=lambda lv: lv.iri)
        ],
        "measures": [
            {"iri": m.iri, "datatype": m.datatype,
             "defaultAggregate": m.default_aggregate.value}
            for m in sorted(schema.measures.values(), key=lambda m: m.iri)
        ],
        "structures": [
            {
                "iri": st.iri,
                "baseLevels": [{"dimension": d, "level": lv} for d, lv in st.base_levels],
                "measures": list(st.measures),
            }
            for st in sorted(schema.structures.values(), key=lambda st: st.iri)
        ],
        "datasets": [
            {"iri": ds.iri, "structure": ds.structure}
            for ds in sorted(schema.datasets.values(), key=lambda ds: ds.iri)
        ],
    }


def schema_from_json(doc: dict) -> CubeSchema:
    schema = CubeSchema()
    for d in doc.get("dimensions", ()):
        schema.dimensions[d["iri"]] = Dimension(d["iri"], tuple(d.get("hierarchies", ())))
    for h in doc.get("hierarchies", ()):
        steps = tuple(
            HierarchyStep(s["child"], s["parent"], s.get("rollup", ""),
                          Cardinality(s.get("cardinality", "one-to-many")))
            for s in h.get("steps", ())
        )
        schema.hierarchies[h["iri"]] = Hierarchy(
            h["iri"], h["dimension"], tuple(h.get("levels", ())), steps
        )
    for lv in doc.get("levels", ()):
        attrs = tuple(
            LevelAttribute(a["iri"], a.get("range", ""), a.get("kind") == "rollup")
            for a in lv.get("attributes", ())
        )
        schema.levels[lv["iri"]] = Level(lv["iri"], attrs, lv.get("identifier", ""))
    for m in doc.get("measures", ()):
        schema.measures[m["iri"]] = Measure(
            m["iri"], m.get("datatype", XSD_FLOAT),
            AggregateFunction(m.get("defaultAggregate", "SUM")),
        )
    for st in doc.get("structures", ()):
        base = tuple((b["dimension"], b["level"]) for b in st.get("baseLevels", ()))
        schema.structures[st["iri"]] = CuboidStructure(
            st["iri"], base, tuple(st.get("measures", ()))
        )
    for ds in doc.get("datasets", ()):
        schema.datasets[ds["iri"]] = CubeDataset(ds["iri"], ds["structure"])
    return schema
