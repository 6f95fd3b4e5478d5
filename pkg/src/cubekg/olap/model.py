"""OLAP query model and the four pivot operations.

A query names a dataset, one group-by entry per dimension (target level plus
the attribute to display), aggregates over measures, an optional boolean
filter tree, and an output ordering.  Queries are immutable; the pivot
operations return transformed copies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from ..rdf import NUMERIC_DATATYPES
from ..schema import (
    AggregateFunction,
    AmbiguousPathError,
    CubeSchema,
    PathNotFoundError,
    SchemaError,
    local_name,
    rollup_path,
)

COMPARATORS = ("regex", "=", "!=", "<", "<=", ">", ">=")
_COMPARATOR_ALIASES = {"≠": "!=", "≤": "<=", "≥": ">="}
NUMERIC_COMPARATORS = ("<", "<=", ">", ">=")


class QueryError(ValueError):
    """A query that does not validate against the schema."""


def _normalize_comparator(comparator: str) -> str:
    comparator = _COMPARATOR_ALIASES.get(comparator, comparator)
    if comparator not in COMPARATORS:
        raise QueryError(f"unknown comparator {comparator!r}")
    return comparator


@dataclass(frozen=True)
class GroupBy:
    dimension: str
    level: str
    attribute: str

    @property
    def column(self) -> str:
        return f"{local_name(self.dimension)}_{local_name(self.attribute)}"


@dataclass(frozen=True)
class Aggregate:
    measure: str
    function: AggregateFunction

    @property
    def column(self) -> str:
        return f"{local_name(self.measure)}_{self.function.value.lower()}"


@dataclass(frozen=True)
class AttributeFilter:
    level: str
    attribute: str
    comparator: str
    value: str

    def __post_init__(self):
        object.__setattr__(self, "comparator", _normalize_comparator(self.comparator))


@dataclass(frozen=True)
class MeasureFilter:
    measure: str
    comparator: str
    value: float

    def __post_init__(self):
        comparator = _normalize_comparator(self.comparator)
        if comparator == "regex":
            raise QueryError("regex comparator does not apply to measures")
        object.__setattr__(self, "comparator", comparator)


@dataclass(frozen=True)
class BooleanFilter:
    op: str  # "and" | "or"
    args: tuple["FilterNode", ...]

    def __post_init__(self):
        if self.op not in ("and", "or"):
            raise QueryError(f"boolean filter op must be and/or, got {self.op!r}")
        if not self.args:
            raise QueryError("boolean filter needs at least one argument")


FilterNode = Union[AttributeFilter, MeasureFilter, BooleanFilter]


def filter_leaves(node: FilterNode | None):
    if node is None:
        return
    if isinstance(node, BooleanFilter):
        for arg in node.args:
            yield from filter_leaves(arg)
    else:
        yield node


@dataclass(frozen=True)
class OlapQuery:
    dataset: str
    group_by: tuple[GroupBy, ...]
    aggregates: tuple[Aggregate, ...]
    filters: FilterNode | None = None
    order_by: tuple[str, ...] = ()

    def group_entry(self, dimension: str) -> GroupBy | None:
        for g in self.group_by:
            if g.dimension == dimension:
                return g
        return None


# -- JSON wire format ----------------------------------------------------------


def filter_to_json(node: FilterNode | None):
    if node is None:
        return None
    if isinstance(node, BooleanFilter):
        return {"op": node.op, "args": [filter_to_json(a) for a in node.args]}
    if isinstance(node, AttributeFilter):
        return {"level": node.level, "attribute": node.attribute,
                "comparator": node.comparator, "value": node.value}
    return {"measure": node.measure, "comparator": node.comparator, "value": node.value}


def filter_from_json(doc) -> FilterNode | None:
    if doc is None:
        return None
    if not isinstance(doc, dict):
        raise QueryError(f"filter node must be an object, got {type(doc).__name__}")
    if "op" in doc:
        return BooleanFilter(doc["op"], tuple(filter_from_json(a) for a in doc.get("args", ())))
    if "measure" in doc:
        try:
            value = float(doc["value"])
        except (KeyError, TypeError, ValueError):
            raise QueryError("measure filter needs a numeric value") from None
        return MeasureFilter(doc["measure"], doc.get("comparator", "="), value)
    if "level" in doc and "attribute" in doc:
        return AttributeFilter(doc["level"], doc["attribute"],
                               doc.get("comparator", "="), str(doc.get("value", "")))
    raise QueryError(f"unintelligible filter node: {doc!r}")


def query_to_json(q: OlapQuery) -> dict:
    doc = {
        "dataset": q.dataset,
        "groupBy": [
            {"dimension": g.dimension, "level": g.level, "attribute": g.attribute}
            for g in q.group_by
        ],
        "aggregates": [
            {"measure": a.measure, "function": a.function.value} for a in q.aggregates
        ],
    }
    if q.filters is not None:
        doc["filters"] = filter_to_json(q.filters)
    if q.order_by:
        doc["orderBy"] = list(q.order_by)
    return doc


def query_from_json(doc: dict) -> OlapQuery:
    if not isinstance(doc, dict):
        raise QueryError("query must be a JSON object")
    try:
        dataset = doc["dataset"]
        group_by = tuple(
            GroupBy(g["dimension"], g["level"], g["attribute"])
            for g in doc.get("groupBy", ())
        )
        aggregates = tuple(
            Aggregate(a["measure"], AggregateFunction(a["function"].upper()))
            for a in doc.get("aggregates", ())
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise QueryError(f"malformed query document: {exc}") from exc
    except ValueError as exc:
        raise QueryError(str(exc)) from exc
    return OlapQuery(
        dataset=dataset,
        group_by=group_by,
        aggregates=aggregates,
        filters=filter_from_json(doc.get("filters")),
        order_by=tuple(doc.get("orderBy", ())),
    )


# -- validation ------------------------------------------------------------------


def _chain_levels(schema: CubeSchema, base: str, target: str) -> list[str]:
    """Levels visited rolling up base -> target, inclusive."""
    path = rollup_path(schema, base, target)
    return [base] + [s.parent for s in path]


def validate_query(q: OlapQuery, schema: CubeSchema) -> None:
    """Raises QueryError with every violation found."""
    problems: list[str] = []
    dataset = schema.datasets.get(q.dataset)
    if dataset is None:
        raise QueryError(f"unknown dataset {q.dataset}")
    structure = schema.structures[dataset.structure]

    seen_dims = set()
    for g in q.group_by:
        if g.dimension in seen_dims:
            problems.append(f"dimension {g.dimension} appears twice in groupBy")
            continue
        seen_dims.add(g.dimension)
        base = structure.base_level_of(g.dimension)
        if base is None:
            problems.append(f"dimension {g.dimension} is not part of the cuboid")
            continue
        if g.level not in schema.levels:
            problems.append(f"unknown level {g.level}")
            continue
        try:
            rollup_path(schema, base, g.level)
        except AmbiguousPathError as exc:
            problems.append(str(exc))
            continue
        except PathNotFoundError:
            problems.append(f"level {g.level} is not reachable from the cuboid's "
                            f"{local_name(base)} level")
            continue
        if not schema.levels[g.level].has_attribute(g.attribute):
            problems.append(f"attribute {g.attribute} does not belong to level {g.level}")

    if not q.aggregates:
        problems.append("query needs at least one aggregate")
    for a in q.aggregates:
        if a.measure not in structure.measures:
            problems.append(f"measure {a.measure} is not part of the cuboid")

    for leaf in filter_leaves(q.filters):
        if isinstance(leaf, MeasureFilter):
            if leaf.measure not in structure.measures:
                problems.append(f"filter measure {leaf.measure} is not part of the cuboid")
            continue
        level = schema.levels.get(leaf.level)
        if level is None:
            problems.append(f"filter references unknown level {leaf.level}")
            continue
        if not level.has_attribute(leaf.attribute):
            problems.append(f"filter attribute {leaf.attribute} does not belong "
                            f"to level {leaf.level}")
            continue
        dim = schema.dimension_of_level(leaf.level)
        base = structure.base_level_of(dim) if dim else None
        if base is None:
            problems.append(f"filter level {leaf.level} is not in any cuboid dimension")
            continue
        try:
            rollup_path(schema, base, leaf.level)
        except SchemaError:
            problems.append(f"filter level {leaf.level} is not reachable from the "
                            f"cuboid's {local_name(base)} level")
            continue
        attr = level.attribute(leaf.attribute)
        if leaf.comparator in NUMERIC_COMPARATORS and attr.range not in NUMERIC_DATATYPES:
            problems.append(f"comparator {leaf.comparator!r} needs a numeric attribute, "
                            f"but {leaf.attribute} has range {attr.range}")

    columns = {g.column for g in q.group_by} | {a.column for a in q.aggregates}
    for name in q.order_by:
        if name not in columns:
            problems.append(f"orderBy column {name!r} is not in the query output")

    if problems:
        raise QueryError("; ".join(problems))


# -- pivot operations ---------------------------------------------------------------


def default_display_attribute(schema: CubeSchema, level_iri: str) -> str:
    """Prefer the human-readable name attribute, fall back to the identifier."""
    level = schema.levels[level_iri]
    for attr in level.attributes:
        if attr.local.lower().endswith("name"):
            return attr.iri
    return level.identifier or level.attributes[0].iri


def roll_up(q: OlapQuery, schema: CubeSchema, dimension: str, to_level: str,
            attribute: str | None = None) -> OlapQuery:
    """Replace the dimension's group-by entry with a strictly higher level."""
    entry = q.group_entry(dimension)
    if entry is None:
        raise QueryError(f"dimension {dimension} is not in the query's groupBy")
    path = rollup_path(schema, entry.level, to_level)
    if not path:
        raise QueryError(f"roll-up target {to_level} is not strictly above "
                         f"{entry.level}")
    new_entry = GroupBy(dimension, to_level,
                        attribute or default_display_attribute(schema, to_level))
    group_by = tuple(new_entry if g.dimension == dimension else g for g in q.group_by)
    order_by = tuple(new_entry.column if c == entry.column else c for c in q.order_by)
    return replace(q, group_by=group_by, order_by=order_by)


def drill_down(q: OlapQuery, schema: CubeSchema, dimension: str, to_level: str,
               attribute: str | None = None) -> OlapQuery:
    """Replace the dimension's group-by entry with a strictly lower level.

    Evaluation recomputes from base-level observations, so the target must
    still be reachable from the cuboid's base level.
    """
    entry = q.group_entry(dimension)
    if entry is None:
        raise QueryError(f"dimension {dimension} is not in the query's groupBy")
    dataset = schema.datasets.get(q.dataset)
    structure = schema.structures[dataset.structure] if dataset else None
    base = structure.base_level_of(dimension) if structure else None
    if base is None:
        raise QueryError(f"dimension {dimension} is not part of the cuboid")
    try:
        rollup_path(schema, base, to_level)
    except PathNotFoundError:
        raise QueryError(f"level {to_level} is below the cuboid's base level "
                         f"{local_name(base)}") from None
    path = rollup_path(schema, to_level, entry.level)
    if not path:
        raise QueryError(f"drill-down target {to_level} is not strictly below "
                         f"{entry.level}")
    new_entry = GroupBy(dimension, to_level,
                        attribute or default_display_attribute(schema, to_level))
    group_by = tuple(new_entry if g.dimension == dimension else g for g in q.group_by)
    order_by = tuple(new_entry.column if c == entry.column else c for c in q.order_by)
    return replace(q, group_by=group_by, order_by=order_by)


def slice_query(q: OlapQuery, schema: CubeSchema, dimension: str, level: str,
                attribute: str, value: str) -> OlapQuery:
    """Remove the dimension from groupBy, fixing one attribute value."""
    entry = q.group_entry(dimension)
    if entry is None:
        raise QueryError(f"dimension {dimension} is not in the query's groupBy "
                         "(already sliced?)")
    predicate = AttributeFilter(level, attribute, "=", value)
    group_by = tuple(g for g in q.group_by if g.dimension != dimension)
    filters = predicate if q.filters is None else BooleanFilter("and", (q.filters, predicate))
    order_by = tuple(c for c in q.order_by if c != entry.column)
    return replace(q, group_by=group_by, filters=filters, order_by=order_by)


def dice(q: OlapQuery, schema: CubeSchema, predicate: FilterNode) -> OlapQuery:
    """AND a predicate tree into the query's filters; groupBy unchanged."""
    probe = replace(q, filters=predicate)
    validate_query(probe, schema)  # surfaces attribute/level mismatches early
    filters = predicate if q.filters is None else BooleanFilter("and", (q.filters, predicate))
    return replace(q, filters=filters)
