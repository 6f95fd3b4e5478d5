"""Rendering of algebra plans as SPARQL 1.1 SELECT text.

The emitted shape follows the engine's canonical pattern: an observation
scan with measure bindings, per-dimension member chains over qb4o:memberOf
plus the roll-up attributes, attribute fetches, a FILTER with
case-insensitive REGEX for the regex comparator, and GROUP BY / ORDER BY
over the projected key variables.  Output is byte-deterministic for a
fixed plan.
"""

from __future__ import annotations

from ..rdf import NUMERIC_DATATYPES, OWL, QB, QB4O, SKOS, XSD_FLOAT, Graph, Iri
from ..rdf.turtle import escape_string
from ..schema import AggregateFunction, CubeSchema, local_name
from .model import AttributeFilter, BooleanFilter, FilterNode, MeasureFilter, QueryError
from .plan import AlgebraPlan, filter_var

_PREFIX_BLOCK = (
    f"PREFIX qb: <{QB.base}>\n"
    f"PREFIX qb4o: <{QB4O.base}>\n"
    f"PREFIX skos: <{SKOS.base}>\n"
)

_FLOAT_CAST = f"<{XSD_FLOAT}>"


def _aggregate_expr(function: AggregateFunction, var: str) -> str:
    if function is AggregateFunction.COUNT:
        return f"COUNT(?{var})"
    return f"{function.value}({_FLOAT_CAST}(?{var}))"


def _bgp_lines(plan: AlgebraPlan) -> list[str]:
    o = plan.observation_var
    lines = [f"?{o} a qb:Observation .",
             f"?{o} qb:dataSet <{plan.dataset}> ."]
    for mb in plan.measures:
        lines.append(f"?{o} <{mb.measure}> ?{mb.var} .")

    fetches_by_owner: dict[str, list] = {}
    for fetch in list(plan.filter_fetches) + list(plan.display_fetches):
        fetches_by_owner.setdefault(fetch.owner_var, []).append(fetch)

    def fetch_lines(owner_var: str) -> list[str]:
        return [f"?{f.owner_var} <{f.attribute}> ?{f.var} ."
                for f in fetches_by_owner.pop(owner_var, [])]

    for chain in plan.chains:
        lines.append(f"?{o} <{chain.base_level}> ?{chain.base_var} .")
        lines.append(f"?{chain.base_var} qb4o:memberOf <{chain.base_level}> .")
        lines.extend(fetch_lines(chain.base_var))
        current = chain.base_var
        for hop in chain.hops:
            lines.append(f"?{current} <{hop.attribute}> ?{hop.var} .")
            lines.append(f"?{hop.var} qb4o:memberOf <{hop.to_level}> .")
            lines.extend(fetch_lines(hop.var))
            current = hop.var
    return lines


def _render_predicate(node: FilterNode, plan: AlgebraPlan, schema: CubeSchema) -> str:
    if isinstance(node, BooleanFilter):
        joiner = " && " if node.op == "and" else " || "
        rendered = joiner.join(_render_predicate(a, plan, schema) for a in node.args)
        return f"({rendered})" if len(node.args) > 1 else rendered
    if isinstance(node, MeasureFilter):
        var = plan.measure_var(node.measure)
        return f"{_FLOAT_CAST}(?{var}) {node.comparator} {node.value:g}"
    if isinstance(node, AttributeFilter):
        var = filter_var(local_name(node.level), local_name(node.attribute))
        if node.comparator == "regex":
            return f'REGEX(?{var}, "{escape_string(node.value)}", "i")'
        attr = schema.levels[node.level].attribute(node.attribute)
        if attr.range in NUMERIC_DATATYPES:
            return f"{_FLOAT_CAST}(?{var}) {node.comparator} {float(node.value):g}"
        return f'?{var} {node.comparator} "{escape_string(node.value)}"'
    raise QueryError(f"cannot render filter node {node!r}")


def emit_sparql(plan: AlgebraPlan, schema: CubeSchema | None = None) -> str:
    """SPARQL SELECT text for the plan."""
    schema = schema or plan.schema
    projections = [f"?{key}" for key in plan.group_keys]
    projections += [f"({_aggregate_expr(a.function, a.measure_var)} AS ?{a.column})"
                    for a in plan.aggregates]

    lines = [_PREFIX_BLOCK + f"SELECT {' '.join(projections)}", "WHERE {"]
    lines += _bgp_lines(plan)
    if plan.predicate is not None:
        lines.append(f"FILTER {_constraint(plan, schema)}")
    lines.append("}")
    if plan.group_keys:
        lines.append("GROUP BY " + " ".join(f"?{k}" for k in plan.group_keys))
    if plan.order_by:
        lines.append("ORDER BY " + " ".join(f"?{c}" for c in plan.order_by))
    return "\n".join(lines) + "\n"


def _constraint(plan: AlgebraPlan, schema: CubeSchema) -> str:
    rendered = _render_predicate(plan.predicate, plan, schema)
    return rendered if rendered.startswith("(") else f"({rendered})"


def emit_federated_sparql(
    plan: AlgebraPlan,
    endpoint: str,
    join_level: str,
    external_pattern: str,
    graph: Graph | None = None,
    schema: CubeSchema | None = None,
) -> str:
    """SPARQL text joining the local cube with a remote SERVICE block.

    The join variable is the owl:sameAs counterpart of *join_level*'s member
    variable, named ``?{levelLocal}_ext``; *external_pattern* is inserted
    verbatim inside ``SERVICE <endpoint> { ... }`` and must use that
    variable to connect.
    """
    schema = schema or plan.schema
    if not external_pattern.strip():
        raise QueryError("federated emission needs a non-empty external pattern")
    member_var = None
    for chain in plan.chains:
        var = chain.var_at(join_level)
        if var is not None:
            member_var = var
            break
    if member_var is None:
        raise QueryError(f"join level {local_name(join_level)} is not part of the "
                         "query's member chains")

    warning = ""
    if graph is not None and not _has_same_as_links(graph, join_level):
        warning = (f"# WARNING: no owl:sameAs links found for members of "
                   f"{local_name(join_level)}\n")

    ext_var = f"{local_name(join_level)}_ext"
    projections = [f"?{key}" for key in plan.group_keys]
    projections += [f"({_aggregate_expr(a.function, a.measure_var)} AS ?{a.column})"
                    for a in plan.aggregates]

    lines = [warning + f"PREFIX owl: <{OWL.base}>\n" + _PREFIX_BLOCK
             + f"SELECT {' '.join(projections)}", "WHERE {"]
    lines += _bgp_lines(plan)
    lines.append(f"?{member_var} owl:sameAs ?{ext_var} .")
    lines.append(f"SERVICE <{endpoint}> {{")
    lines.extend(line for line in external_pattern.strip().splitlines())
    lines.append("}")
    if plan.predicate is not None:
        lines.append(f"FILTER {_constraint(plan, schema)}")
    lines.append("}")
    if plan.group_keys:
        lines.append("GROUP BY " + " ".join(f"?{k}" for k in plan.group_keys))
    if plan.order_by:
        lines.append("ORDER BY " + " ".join(f"?{c}" for c in plan.order_by))
    return "\n".join(lines) + "\n"


def _has_same_as_links(graph: Graph, level_iri: str) -> bool:
    same_as, member_of = Iri(OWL.sameAs), Iri(QB4O.memberOf)
    for member in graph.subjects(member_of, Iri(level_iri)):
        if graph.value(member, same_as) is not None:
            return True
    return False
