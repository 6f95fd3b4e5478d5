"""Source schemas and source-to-target mappings.

A tabular source is lifted to a small OWL-ish "source TBox" (table name as a
class, columns as datatype properties).  Mapping files then tie source
concepts/columns to target levels, cuboid structures, attributes and
measures.  Column transformations are expressed in a closed expression
language: column references, text constants, concat, the four arithmetic
operators, and table-driven substitution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .rdf import MAP, RDF, SKOS, XSD_DECIMAL, XSD_INTEGER, XSD_STRING, Graph, Iri, Literal, Namespace
from .rdf.terms import BlankNode
from .schema import CubeSchema, CuboidStructure, Level


class MappingError(ValueError):
    """Unresolvable or ill-formed mapping content."""


class ExpressionError(ValueError):
    """Evaluation failure: missing column, division by zero, bad operand."""


# -- source tables and TBoxes -------------------------------------------------

INTEGER = "integer"
DECIMAL = "decimal"
TEXT = "text"

_TYPE_RANGES = {INTEGER: XSD_INTEGER, DECIMAL: XSD_DECIMAL, TEXT: XSD_STRING}

_INT_RE = re.compile(r"[+-]?\d+\Z")
_DECIMAL_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\Z")


@dataclass(frozen=True)
class SourceColumn:
    name: str
    inferred_type: str = TEXT


@dataclass(frozen=True)
class SourceTable:
    name: str
    columns: tuple[SourceColumn, ...]

    def __post_init__(self):
        if not self.name:
            raise MappingError("source table needs a name")
        names = [c.name for c in self.columns]
        if any(not n for n in names):
            raise MappingError(f"table {self.name}: empty column name")
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise MappingError(f"table {self.name}: duplicate column names {sorted(dupes)}")

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]


@dataclass(frozen=True)
class SourceProperty:
    iri: str
    range: str
    column: str


@dataclass(frozen=True)
class SourceTBox:
    class_iri: str
    properties: tuple[SourceProperty, ...]

    def property_for_column(self, column: str) -> SourceProperty | None:
        for p in self.properties:
            if p.column == column:
                return p
        return None

    def column_for_property(self, iri: str) -> str | None:
        for p in self.properties:
            if p.iri == iri:
                return p.column
        return None


def sniff_type(cells: list[str]) -> str:
    """integer if every non-empty cell is an integer, decimal if numeric, else text."""
    non_empty = [c for c in cells if c != ""]
    if not non_empty:
        return TEXT
    if all(_INT_RE.match(c) for c in non_empty):
        return INTEGER
    if all(_DECIMAL_RE.match(c) for c in non_empty):
        return DECIMAL
    return TEXT


def infer_source_tbox(table: SourceTable, namespace: Namespace = Namespace("http://bike-csecu.com/source#")) -> SourceTBox:
    """Mint a class from the table name and one datatype property per column."""
    return SourceTBox(
        class_iri=namespace[table.name],
        properties=tuple(
            SourceProperty(namespace[c.name], _TYPE_RANGES[c.inferred_type], c.name)
            for c in table.columns
        ),
    )


# -- expression language -------------------------------------------------------


@dataclass(frozen=True)
class Column:
    name: str


@dataclass(frozen=True)
class Const:
    value: str


@dataclass(frozen=True)
class Concat:
    args: tuple["Expression", ...]


@dataclass(frozen=True)
class Arith:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Substitute:
    expr: "Expression"
    table: tuple[tuple[str, str], ...]
    default: str | None = None

    def lookup(self) -> dict[str, str]:
        return dict(self.table)


Expression = Union[Column, Const, Concat, Arith, Substitute]


def expression_columns(expr: Expression) -> set[str]:
    if isinstance(expr, Column):
        return {expr.name}
    if isinstance(expr, Concat):
        out = set()
        for a in expr.args:
            out |= expression_columns(a)
        return out
    if isinstance(expr, Arith):
        return expression_columns(expr.left) | expression_columns(expr.right)
    if isinstance(expr, Substitute):
        return expression_columns(expr.expr)
    return set()


def evaluate_expression(expr: Expression, row: dict[str, str]):
    """Evaluate against one source row; pure.  Concat and substitution yield
    text, arithmetic yields a float."""
    if isinstance(expr, Column):
        if expr.name not in row:
            raise ExpressionError(f"row has no column {expr.name!r}")
        return row[expr.name]
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Concat):
        return "".join(_as_text(evaluate_expression(a, row)) for a in expr.args)
    if isinstance(expr, Substitute):
        key = _as_text(evaluate_expression(expr.expr, row))
        table = expr.lookup()
        if key in table:
            return table[key]
        if expr.default is not None:
            return expr.default
        raise ExpressionError(f"substitution has no entry for {key!r} and no default")
    if isinstance(expr, Arith):
        left = _as_number(evaluate_expression(expr.left, row))
        right = _as_number(evaluate_expression(expr.right, row))
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        if expr.op == "/":
            if right == 0:
                raise ExpressionError("division by zero")
            return left / right
        raise ExpressionError(f"unknown operator {expr.op!r}")
    raise ExpressionError(f"not an expression: {expr!r}")


def _as_text(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _as_number(value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ExpressionError(f"non-numeric operand {value!r}") from None


class _ExprParser:
    """Recursive descent over the textual expression syntax, e.g.
    ``concat(cropsId, districtId, yearId)``, ``production / area``,
    ``substitute(districtName, {'BARGUNA': '1004'}, '0000')``."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Expression:
        expr = self._sum()
        self._ws()
        if self.pos != len(self.text):
            raise MappingError(f"trailing input in expression: {self.text[self.pos:]!r}")
        return expr

    def _ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _eat(self, token: str):
        self._ws()
        if not self.text.startswith(token, self.pos):
            raise MappingError(f"expected {token!r} at {self.text[self.pos:self.pos+10]!r}")
        self.pos += len(token)

    def _sum(self) -> Expression:
        left = self._term()
        while True:
            self._ws()
            ch = self._peek()
            if ch and ch in "+-":
                self.pos += 1
                left = Arith(ch, left, self._term())
            else:
                return left

    def _term(self) -> Expression:
        left = self._factor()
        while True:
            self._ws()
            ch = self._peek()
            if ch and ch in "*/":
                self.pos += 1
                left = Arith(ch, left, self._factor())
            else:
                return left

    def _factor(self) -> Expression:
        self._ws()
        ch = self._peek()
        if ch == "(":
            self._eat("(")
            inner = self._sum()
            self._eat(")")
            return inner
        if ch == "'":
            return Const(self._string())
        if ch.isdigit():
            return Const(self._number())
        name = self._identifier()
        self._ws()
        if self._peek() == "(":
            return self._call(name)
        return Column(name)

    def _string(self) -> str:
        self._eat("'")
        out = []
        while True:
            if self.pos >= len(self.text):
                raise MappingError("unterminated string in expression")
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "'":
                return "".join(out)
            if ch == "\\":
                out.append(self.text[self.pos])
                self.pos += 1
            else:
                out.append(ch)

    def _number(self) -> str:
        start = self.pos
        while self._peek().isdigit() or self._peek() == ".":
            self.pos += 1
        return self.text[start:self.pos]

    def _identifier(self) -> str:
        self._ws()
        start = self.pos
        while self._peek().isalnum() or self._peek() == "_":
            self.pos += 1
        if start == self.pos:
            raise MappingError(f"expected identifier at {self.text[self.pos:self.pos+10]!r}")
        return self.text[start:self.pos]

    def _call(self, name: str) -> Expression:
        if name == "concat":
            self._eat("(")
            args = []
            self._ws()
            if self._peek() != ")":
                args.append(self._sum())
                self._ws()
                while self._peek() == ",":
                    self._eat(",")
                    args.append(self._sum())
                    self._ws()
            self._eat(")")
            return Concat(tuple(args))
        if name == "substitute":
            self._eat("(")
            inner = self._sum()
            self._eat(",")
            table = self._table()
            default = None
            self._ws()
            if self._peek() == ",":
                self._eat(",")
                default = self._string()
            self._eat(")")
            return Substitute(inner, table, default)
        raise MappingError(f"unknown function {name!r}")

    def _table(self) -> tuple[tuple[str, str], ...]:
        self._eat("{")
        entries = []
        self._ws()
        while self._peek() != "}":
            key = self._string()
            self._eat(":")
            self._ws()
            entries.append((key, self._string()))
            self._ws()
            if self._peek() == ",":
                self._eat(",")
                self._ws()
        self._eat("}")
        return tuple(entries)


def parse_expression(text: str) -> Expression:
    return _ExprParser(text).parse()


def expression_to_text(expr: Expression) -> str:
    if isinstance(expr, Column):
        return expr.name
    if isinstance(expr, Const):
        escaped = expr.value.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"
    if isinstance(expr, Concat):
        return "concat(" + ", ".join(expression_to_text(a) for a in expr.args) + ")"
    if isinstance(expr, Arith):
        return f"({expression_to_text(expr.left)} {expr.op} {expression_to_text(expr.right)})"
    if isinstance(expr, Substitute):
        pairs = ", ".join(f"'{k}': '{v}'" for k, v in expr.table)
        tail = f", '{expr.default}'" if expr.default is not None else ""
        return f"substitute({expression_to_text(expr.expr)}, {{{pairs}}}{tail})"
    raise MappingError(f"not an expression: {expr!r}")


# -- S2TMAP parsing -------------------------------------------------------------


@dataclass(frozen=True)
class RowFilter:
    """Predicate restricting which source rows a concept mapping covers."""

    column: str
    pattern: str

    def matches(self, row: dict[str, str]) -> bool:
        return re.search(self.pattern, row.get(self.column, ""), re.IGNORECASE) is not None


@dataclass(frozen=True)
class PropertyMapping:
    iri: str
    target_property: str
    source: Expression


@dataclass(frozen=True)
class ConceptMapping:
    iri: str
    source_concept: str
    target_concept: str
    iri_value: Expression
    relation: str = SKOS.exactMatch
    matched: RowFilter | None = None  # None means all rows
    properties: tuple[PropertyMapping, ...] = ()

    def accepts(self, row: dict[str, str]) -> bool:
        return self.matched is None or self.matched.matches(row)


@dataclass(frozen=True)
class MappingSet:
    iri: str
    source_tbox_location: str
    target_tbox_location: str
    concept_mappings: tuple[ConceptMapping, ...] = ()

    def for_source_concept(self, class_iri: str) -> ConceptMapping | None:
        for cm in self.concept_mappings:
            if cm.source_concept == class_iri:
                return cm
        return None

    def for_target_concept(self, iri: str) -> ConceptMapping | None:
        for cm in self.concept_mappings:
            if cm.target_concept == iri:
                return cm
        return None


def _literal_value(term) -> str | None:
    return term.lexical if isinstance(term, Literal) else None


def parse_mappings(
    graph: Graph,
    source_tboxes: dict[str, SourceTBox],
    target_schema: CubeSchema,
    vocab: Namespace = MAP,
) -> MappingSet:
    """Materialize dataset/concept/property mappings and validate them against
    the source TBoxes and the target schema."""

    datasets = [s for s in graph.subjects(Iri(RDF.type), Iri(vocab.Dataset))
                if isinstance(s, Iri)]
    if not datasets:
        raise MappingError("no dataset mapping (map:Dataset) found")
    if len(datasets) > 1:
        raise MappingError("multiple dataset mappings found; expected one")
    ds = datasets[0]
    source_loc = _literal_value(graph.value(ds, Iri(vocab.sourceTBox))) or ""
    target_loc = _literal_value(graph.value(ds, Iri(vocab.targetTBox))) or ""

    concept_mappings: list[ConceptMapping] = []
    for cm in sorted(
        (s for s in graph.subjects(Iri(RDF.type), Iri(vocab.ConceptMapping))
         if isinstance(s, Iri)),
        key=lambda s: s.value,
    ):
        owner = graph.value(cm, Iri(vocab.dataset))
        if not (isinstance(owner, Iri) and owner == ds):
            raise MappingError(f"concept mapping {cm.value} is not attached to the dataset mapping")
        source_concept = graph.value(cm, Iri(vocab.sourceConcept))
        target_concept = graph.value(cm, Iri(vocab.targetConcept))
        if not isinstance(source_concept, Iri) or not isinstance(target_concept, Iri):
            raise MappingError(f"concept mapping {cm.value} lacks source or target concept")

        relation = graph.value(cm, Iri(vocab.relation))
        relation_iri = relation.value if isinstance(relation, Iri) else SKOS.exactMatch
        if relation_iri != SKOS.exactMatch:
            raise MappingError(
                f"concept mapping {cm.value}: only skos:exactMatch is supported, got {relation_iri}"
            )

        tbox = source_tboxes.get(source_concept.value)
        if tbox is None:
            raise MappingError(f"concept mapping {cm.value}: unknown source concept {source_concept.value}")

        target = target_concept.value
        level = target_schema.levels.get(target)
        structure = target_schema.structures.get(target)
        if level is None and structure is None:
            raise MappingError(
                f"concept mapping {cm.value}: target {target} is neither a level nor a cuboid structure"
            )

        iri_value = _parse_iri_value(graph, cm, vocab, tbox)
        matched = _parse_matched(graph, cm, vocab, tbox)
        properties = _parse_property_mappings(graph, cm, vocab, tbox, level, structure)
        concept_mappings.append(ConceptMapping(
            iri=cm.value,
            source_concept=source_concept.value,
            target_concept=target,
            iri_value=iri_value,
            relation=relation_iri,
            matched=matched,
            properties=properties,
        ))

    if not concept_mappings:
        raise MappingError("mapping dataset has no concept mappings")
    return MappingSet(ds.value, source_loc, target_loc, tuple(concept_mappings))


def _validate_columns(expr: Expression, tbox: SourceTBox, context: str) -> None:
    known = {p.column for p in tbox.properties}
    missing = expression_columns(expr) - known
    if missing:
        raise MappingError(f"{context}: unresolvable source column(s) {sorted(missing)}")


def _parse_iri_value(graph: Graph, cm: Iri, vocab: Namespace, tbox: SourceTBox) -> Expression:
    value = graph.value(cm, Iri(vocab.iriValue))
    kind = graph.value(cm, Iri(vocab.iriValueType))
    kind_iri = kind.value if isinstance(kind, Iri) else vocab.SourceAttribute
    if kind_iri == vocab.SourceAttribute:
        if not isinstance(value, Iri):
            raise MappingError(f"concept mapping {cm.value}: iriValue must be a source property IRI")
        column = tbox.column_for_property(value.value)
        if column is None:
            raise MappingError(f"concept mapping {cm.value}: iriValue {value.value} "
                               f"is not a property of {tbox.class_iri}")
        return Column(column)
    if kind_iri == vocab.Expression:
        text = _literal_value(value)
        if not text:
            raise MappingError(f"concept mapping {cm.value}: expression iriValue must be a literal")
        expr = parse_expression(text)
        _validate_columns(expr, tbox, f"concept mapping {cm.value} iriValue")
        return expr
    raise MappingError(f"concept mapping {cm.value}: unknown iriValueType {kind_iri}")


def _parse_matched(graph: Graph, cm: Iri, vocab: Namespace, tbox: SourceTBox) -> RowFilter | None:
    node = graph.value(cm, Iri(vocab.matchedInstances))
    if node is None or _literal_value(node) == "All":
        return None
    if isinstance(node, (Iri, BlankNode)):
        column_prop = graph.value(node, Iri(vocab.column))
        pattern = _literal_value(graph.value(node, Iri(vocab.pattern)))
        if isinstance(column_prop, Iri) and pattern is not None:
            column = tbox.column_for_property(column_prop.value)
            if column is None:
                raise MappingError(f"concept mapping {cm.value}: matchedInstances column "
                                   f"{column_prop.value} is not a property of {tbox.class_iri}")
            return RowFilter(column, pattern)
    raise MappingError(f"concept mapping {cm.value}: matchedInstances must be \"All\" "
                       "or a column/pattern node")


def _parse_property_mappings(
    graph: Graph,
    cm: Iri,
    vocab: Namespace,
    tbox: SourceTBox,
    level: Level | None,
    structure: CuboidStructure | None,
) -> tuple[PropertyMapping, ...]:
    if level is not None:
        allowed = {a.iri for a in level.attributes}
        owner_desc = f"level {level.iri}"
    else:
        allowed = {lv for _, lv in structure.base_levels} | set(structure.measures)
        owner_desc = f"structure {structure.iri}"

    out = []
    for pm in sorted(
        (s for s in graph.subjects(Iri(vocab.conceptMapping), cm) if isinstance(s, Iri)),
        key=lambda s: s.value,
    ):
        target = graph.value(pm, Iri(vocab.targetProperty))
        if not isinstance(target, Iri):
            raise MappingError(f"property mapping {pm.value} lacks a target property")
        if target.value not in allowed:
            raise MappingError(f"property mapping {pm.value}: target property {target.value} "
                               f"is not on {owner_desc}")
        source_prop = graph.value(pm, Iri(vocab.sourceProperty))
        expr_text = _literal_value(graph.value(pm, Iri(vocab.expression)))
        if isinstance(source_prop, Iri):
            column = tbox.column_for_property(source_prop.value)
            if column is None:
                raise MappingError(f"property mapping {pm.value}: source property "
                                   f"{source_prop.value} is not on {tbox.class_iri}")
            source: Expression = Column(column)
        elif expr_text is not None:
            source = parse_expression(expr_text)
            _validate_columns(source, tbox, f"property mapping {pm.value}")
        else:
            raise MappingError(f"property mapping {pm.value} needs a source property or expression")
        out.append(PropertyMapping(pm.value, target.value, source))
    return tuple(out)
