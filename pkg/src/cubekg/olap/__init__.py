"""OLAP layer: query model, pivot operations, plan compilation, SPARQL
emission, and native execution."""

from .execute import (
    AGGREGATE,
    KEY,
    Column,
    ResultTable,
    drill_across,
    execute,
    execute_query,
)
from .model import (
    Aggregate,
    AttributeFilter,
    BooleanFilter,
    FilterNode,
    GroupBy,
    MeasureFilter,
    OlapQuery,
    QueryError,
    default_display_attribute,
    dice,
    drill_down,
    filter_from_json,
    filter_to_json,
    query_from_json,
    query_to_json,
    roll_up,
    slice_query,
    validate_query,
)
from .plan import AlgebraPlan, compile_query
from .sparql import emit_federated_sparql, emit_sparql

__all__ = [
    "AGGREGATE", "KEY", "Column", "ResultTable", "drill_across", "execute",
    "execute_query",
    "Aggregate", "AttributeFilter", "BooleanFilter", "FilterNode", "GroupBy",
    "MeasureFilter", "OlapQuery", "QueryError", "default_display_attribute",
    "dice", "drill_down", "filter_from_json", "filter_to_json",
    "query_from_json", "query_to_json", "roll_up", "slice_query",
    "validate_query",
    "AlgebraPlan", "compile_query",
    "emit_federated_sparql", "emit_sparql",
]
