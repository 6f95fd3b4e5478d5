"""Native evaluation of algebra plans over a graph snapshot.

Semantics mirror the emitted SPARQL: member joins and attribute fetches are
conjunctive (an observation missing a link or a fetched attribute drops
out), measure bindings are optional per observation, aggregates run over
the bound values of each group, and groups whose aggregate cells are all
unbound are omitted rather than emitted as zeros.
"""

from __future__ import annotations

import io
import csv as _csv
import re
from dataclasses import dataclass

from ..rdf import NUMERIC_DATATYPES, QB, QB4O, RDF, Graph, Iri, Literal, Triple
from ..schema import AggregateFunction, CubeSchema, local_name
from .model import (
    AttributeFilter,
    BooleanFilter,
    FilterNode,
    MeasureFilter,
    OlapQuery,
    QueryError,
)
from .plan import AlgebraPlan, compile_query, filter_var

KEY = "key"
AGGREGATE = "aggregate"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # KEY | AGGREGATE


@dataclass
class ResultTable:
    columns: list[Column]
    rows: list[tuple]
    excluded_rows: int = 0

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row arity does not match column arity")

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def key_width(self) -> int:
        return sum(1 for c in self.columns if c.kind == KEY)

    def to_json(self) -> dict:
        return {
            "columns": [{"name": c.name, "kind": c.kind} for c in self.columns],
            "rows": [list(row) for row in self.rows],
            "excludedRows": self.excluded_rows,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(self.column_names())
        for row in self.rows:
            writer.writerow(["" if v is None else v for v in row])
        return buf.getvalue()


_INT_LEXICAL = re.compile(r"[+-]?\d+\Z")


def parse_measure(lexical: str) -> int | float:
    if _INT_LEXICAL.match(lexical):
        return int(lexical)
    return float(lexical)


def _sort_key(value):
    # None sorts first, numbers before strings; never compares across types
    if value is None:
        return (0, 0)
    if isinstance(value, (int, float)):
        return (1, value)
    return (2, str(value))


def _aggregate(function: AggregateFunction, values: list):
    if function is AggregateFunction.COUNT:
        return len(values)
    if not values:
        return None
    if function is AggregateFunction.SUM:
        return sum(values)
    if function is AggregateFunction.MIN:
        return min(values)
    if function is AggregateFunction.MAX:
        return max(values)
    if function is AggregateFunction.AVG:
        return float(sum(values)) / len(values)
    raise QueryError(f"unknown aggregate {function}")


def _match_filter(node: FilterNode, solution: dict, plan: AlgebraPlan,
                  schema: CubeSchema) -> bool:
    if isinstance(node, BooleanFilter):
        if node.op == "and":
            return all(_match_filter(a, solution, plan, schema) for a in node.args)
        return any(_match_filter(a, solution, plan, schema) for a in node.args)
    if isinstance(node, MeasureFilter):
        value = solution.get(plan.measure_var(node.measure))
        if value is None:
            return False
        try:
            return _compare(parse_measure(value), node.comparator, node.value)
        except ValueError:
            return False
    if isinstance(node, AttributeFilter):
        var = filter_var(local_name(node.level), local_name(node.attribute))
        value = solution.get(var)
        if value is None:
            return False
        if node.comparator == "regex":
            return re.search(node.value, value, re.IGNORECASE) is not None
        attr = schema.levels[node.level].attribute(node.attribute)
        if attr.range in NUMERIC_DATATYPES:
            try:
                return _compare(float(value), node.comparator, float(node.value))
            except ValueError:
                return False
        return _compare(value, node.comparator, node.value)
    raise QueryError(f"cannot evaluate filter node {node!r}")


def _compare(left, comparator: str, right) -> bool:
    if comparator == "=":
        return left == right
    if comparator == "!=":
        return left != right
    if comparator == "<":
        return left < right
    if comparator == "<=":
        return left <= right
    if comparator == ">":
        return left > right
    if comparator == ">=":
        return left >= right
    raise QueryError(f"unknown comparator {comparator!r}")


def execute(plan: AlgebraPlan, graph: Graph, schema: CubeSchema | None = None) -> ResultTable:
    """Evaluate the plan; AVG is SUM/COUNT in binary floating point, rows are
    sorted per the plan's ordering with the full key tuple as tie-break."""
    schema = schema or plan.schema
    a, member_of = Iri(RDF.type), Iri(QB4O.memberOf)
    observation_type = Iri(QB.Observation)
    excluded = 0

    groups: dict[tuple, list[dict]] = {}
    for obs in graph.subjects(Iri(QB.dataSet), Iri(plan.dataset)):
        if Triple(obs, a, observation_type) not in graph:
            continue
        solution: dict[str, str | None] = {}

        for mb in plan.measures:
            term = graph.value(obs, Iri(mb.measure))
            solution[mb.var] = term.lexical if isinstance(term, Literal) else None

        ok = True
        for chain in plan.chains:
            member = graph.value(obs, Iri(chain.base_level))
            if member is None or graph.value(member, member_of) != Iri(chain.base_level):
                ok = False
                break
            solution[chain.base_var] = member
            current = member
            for hop in chain.hops:
                parent = graph.value(current, Iri(hop.attribute))
                if parent is None or graph.value(parent, member_of) != Iri(hop.to_level):
                    ok = False
                    break
                solution[hop.var] = parent
                current = parent
            if not ok:
                break
        if not ok:
            continue

        for fetch in list(plan.filter_fetches) + list(plan.display_fetches):
            term = graph.value(solution[fetch.owner_var], Iri(fetch.attribute))
            if not isinstance(term, Literal):
                ok = False
                break
            solution[fetch.var] = term.lexical
        if not ok:
            continue

        if plan.predicate is not None and not _match_filter(plan.predicate, solution,
                                                            plan, schema):
            continue

        try:
            for agg in plan.aggregates:
                value = solution.get(agg.measure_var)
                if value is not None:
                    parse_measure(value)
        except ValueError:
            excluded += 1
            continue

        key = tuple(solution[k] for k in plan.group_keys)
        groups.setdefault(key, []).append(solution)

    columns = [Column(k, KEY) for k in plan.group_keys]
    columns += [Column(agg.column, AGGREGATE) for agg in plan.aggregates]

    rows = []
    for key, solutions in groups.items():
        cells = list(key)
        agg_cells = []
        for agg in plan.aggregates:
            values = [parse_measure(s[agg.measure_var]) for s in solutions
                      if s.get(agg.measure_var) is not None]
            agg_cells.append(_aggregate(agg.function, values))
        if plan.aggregates and all(c is None for c in agg_cells):
            continue  # no bound measure values anywhere in the group
        rows.append(tuple(cells + agg_cells))

    by_name = {c.name: i for i, c in enumerate(columns)}
    order_idx = [by_name[c] for c in plan.order_by if c in by_name]
    key_width = len(plan.group_keys)

    def row_key(row):
        ordered = tuple(_sort_key(row[i]) for i in order_idx)
        return ordered + tuple(_sort_key(v) for v in row[:key_width])

    rows.sort(key=row_key)
    return ResultTable(columns, rows, excluded)


def execute_query(q: OlapQuery, schema: CubeSchema, graph: Graph) -> ResultTable:
    return execute(compile_query(q, schema), graph, schema)


def drill_across(
    qa: OlapQuery,
    qb: OlapQuery,
    shared_levels: list[str],
    schema: CubeSchema,
    graph: Graph,
) -> ResultTable:
    """Full outer join of the two query results on the shared group-key
    columns; the absent side contributes null cells."""
    if not shared_levels:
        raise QueryError("drill-across needs at least one shared level")
    shared_columns: list[str] = []
    for level in shared_levels:
        ga = next((g for g in qa.group_by if g.level == level), None)
        gb = next((g for g in qb.group_by if g.level == level), None)
        if ga is None or gb is None:
            raise QueryError(f"both queries must group by shared level {local_name(level)}")
        if (ga.dimension, ga.level, ga.attribute) != (gb.dimension, gb.level, gb.attribute):
            raise QueryError(f"shared level {local_name(level)}: group-by entries differ "
                             "between the two queries")
        shared_columns.append(ga.column)

    ra = execute_query(qa, schema, graph)
    rb = execute_query(qb, schema, graph)

    def split(table: ResultTable):
        names = table.column_names()
        shared_idx = [names.index(c) for c in shared_columns]
        other_idx = [i for i in range(len(names)) if i not in shared_idx]
        return shared_idx, other_idx

    sa, oa = split(ra)
    sb, ob = split(rb)

    taken = set(shared_columns) | {ra.columns[i].name for i in oa}
    b_names = []
    for i in ob:
        name = rb.columns[i].name
        if name in taken:
            name = f"{name}_b"
        taken.add(name)
        b_names.append(name)

    columns = [Column(c, KEY) for c in shared_columns]
    columns += [ra.columns[i] for i in oa]
    columns += [Column(name, rb.columns[i].kind) for name, i in zip(b_names, ob)]

    index_b: dict[tuple, tuple] = {}
    for row in rb.rows:
        index_b[tuple(row[i] for i in sb)] = row
    index_a: dict[tuple, tuple] = {}
    for row in ra.rows:
        index_a[tuple(row[i] for i in sa)] = row

    keys = list(index_a) + [k for k in index_b if k not in index_a]
    rows = []
    for key in keys:
        row_a = index_a.get(key)
        row_b = index_b.get(key)
        cells = list(key)
        cells += [row_a[i] if row_a else None for i in oa]
        cells += [row_b[i] if row_b else None for i in ob]
        rows.append(tuple(cells))
    rows.sort(key=lambda r: tuple(_sort_key(v) for v in r[:len(shared_columns)]))
    return ResultTable(columns, rows, ra.excluded_rows + rb.excluded_rows)
