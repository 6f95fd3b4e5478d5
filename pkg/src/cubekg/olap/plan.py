"""Compilation of an OLAP query into its evaluation plan.

The plan materializes the graph-pattern shape the engine both executes
natively and renders as SPARQL: an observation scan with measure bindings,
one member-join chain per dimension in play (base level up to the highest
level any group-by or filter needs), attribute fetches, the filter tree,
group-aggregation, and the output sort.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..schema import AggregateFunction, CubeSchema, local_name, rollup_path
from .model import (
    AttributeFilter,
    FilterNode,
    MeasureFilter,
    OlapQuery,
    QueryError,
    filter_leaves,
    validate_query,
)


@dataclass(frozen=True)
class MeasureBinding:
    measure: str
    var: str  # m1, m2, ...


@dataclass(frozen=True)
class RollupHop:
    attribute: str  # roll-up attribute on the child level
    to_level: str
    var: str        # variable bound to the parent member


@dataclass(frozen=True)
class DimensionChain:
    dimension: str
    base_level: str
    base_var: str
    hops: tuple[RollupHop, ...]

    def var_at(self, level: str) -> str | None:
        if level == self.base_level:
            return self.base_var
        for hop in self.hops:
            if hop.to_level == level:
                return hop.var
        return None

    def levels(self) -> list[str]:
        return [self.base_level] + [h.to_level for h in self.hops]


@dataclass(frozen=True)
class AttributeBinding:
    owner_var: str
    attribute: str
    var: str


@dataclass(frozen=True)
class AggregateSpec:
    function: AggregateFunction
    measure_var: str
    column: str


@dataclass(frozen=True)
class AlgebraPlan:
    dataset: str
    observation_var: str
    measures: tuple[MeasureBinding, ...]
    chains: tuple[DimensionChain, ...]
    filter_fetches: tuple[AttributeBinding, ...]
    display_fetches: tuple[AttributeBinding, ...]
    predicate: FilterNode | None
    group_keys: tuple[str, ...]
    aggregates: tuple[AggregateSpec, ...]
    order_by: tuple[str, ...]
    schema: CubeSchema = field(repr=False, compare=False, default=None)

    def measure_var(self, measure: str) -> str:
        for mb in self.measures:
            if mb.measure == measure:
                return mb.var
        raise QueryError(f"measure {measure} is not bound in the plan")

    def check_variable_flow(self) -> None:
        """Every consumed variable must be produced by an earlier stage."""
        produced = {self.observation_var}
        produced.update(mb.var for mb in self.measures)
        for chain in self.chains:
            produced.add(chain.base_var)
            produced.update(h.var for h in chain.hops)
        for fetch in self.filter_fetches + self.display_fetches:
            if fetch.owner_var not in produced:
                raise QueryError(f"attribute fetch reads unbound variable ?{fetch.owner_var}")
            produced.add(fetch.var)
        for key in self.group_keys:
            if key not in produced:
                raise QueryError(f"group key ?{key} is never produced")
        for agg in self.aggregates:
            if agg.measure_var not in produced:
                raise QueryError(f"aggregate reads unbound variable ?{agg.measure_var}")


def filter_var(level_local: str, attr_local: str) -> str:
    return f"{level_local}_{attr_local}"


def compile_query(q: OlapQuery, schema: CubeSchema) -> AlgebraPlan:
    """Validate *q* and lower it onto the observation/member-join plan."""
    validate_query(q, schema)
    dataset = schema.datasets[q.dataset]
    structure = schema.structures[dataset.structure]

    # measure bindings in first-use order across aggregates and filters
    measure_order: list[str] = []
    for a in q.aggregates:
        if a.measure not in measure_order:
            measure_order.append(a.measure)
    for leaf in filter_leaves(q.filters):
        if isinstance(leaf, MeasureFilter) and leaf.measure not in measure_order:
            measure_order.append(leaf.measure)
    measures = tuple(MeasureBinding(m, f"m{i + 1}") for i, m in enumerate(measure_order))
    measure_vars = {mb.measure: mb.var for mb in measures}

    # dimensions in play: group-by order first, then filter-only dimensions
    required: dict[str, list[str]] = {}
    dim_order: list[str] = []
    for g in q.group_by:
        required.setdefault(g.dimension, []).append(g.level)
        dim_order.append(g.dimension)
    for leaf in filter_leaves(q.filters):
        if isinstance(leaf, AttributeFilter):
            dim = schema.dimension_of_level(leaf.level)
            required.setdefault(dim, []).append(leaf.level)
            if dim not in dim_order:
                dim_order.append(dim)

    chains = []
    for dim in dim_order:
        base = structure.base_level_of(dim)
        dim_local = local_name(dim)
        paths = {level: rollup_path(schema, base, level) for level in set(required[dim])}
        top_level, top_path = max(paths.items(), key=lambda kv: len(kv[1]))
        covered = {base} | {s.parent for s in top_path}
        for level in paths:
            if level not in covered:
                raise QueryError(f"levels {local_name(level)} and {local_name(top_level)} "
                                 f"of dimension {dim_local} lie on different branches")
        hops = tuple(
            RollupHop(s.rollup, s.parent, f"{dim_local}_{local_name(s.parent)}")
            for s in top_path
        )
        chains.append(DimensionChain(dim, base, f"{dim_local}_{local_name(base)}", hops))
    chains = tuple(chains)

    chain_by_dim = {c.dimension: c for c in chains}

    def member_var(level: str) -> str:
        dim = schema.dimension_of_level(level)
        chain = chain_by_dim[dim]
        var = chain.var_at(level)
        if var is None:
            raise QueryError(f"level {level} is not on the {local_name(dim)} chain")
        return var

    filter_fetches: list[AttributeBinding] = []
    fetched = set()
    for leaf in filter_leaves(q.filters):
        if not isinstance(leaf, AttributeFilter):
            continue
        key = (leaf.level, leaf.attribute)
        if key in fetched:
            continue
        fetched.add(key)
        filter_fetches.append(AttributeBinding(
            member_var(leaf.level), leaf.attribute,
            filter_var(local_name(leaf.level), local_name(leaf.attribute)),
        ))

    display_fetches = tuple(
        AttributeBinding(member_var(g.level), g.attribute, g.column) for g in q.group_by
    )

    columns_taken = set()
    aggregates = []
    for a in q.aggregates:
        column = a.column
        n = 2
        while column in columns_taken:
            column = f"{a.column}_{n}"
            n += 1
        columns_taken.add(column)
        aggregates.append(AggregateSpec(a.function, measure_vars[a.measure], column))

    plan = AlgebraPlan(
        dataset=q.dataset,
        observation_var="o",
        measures=measures,
        chains=chains,
        filter_fetches=tuple(filter_fetches),
        display_fetches=display_fetches,
        predicate=q.filters,
        group_keys=tuple(g.column for g in q.group_by),
        aggregates=tuple(aggregates),
        order_by=q.order_by or tuple(g.column for g in q.group_by),
        schema=schema,
    )
    plan.check_variable_flow()
    return plan
