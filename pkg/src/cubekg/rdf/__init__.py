"""RDF data model: terms, triples, an indexed graph, and Turtle I/O."""

from .graph import Binding, Graph, graph_with_standard_prefixes, isomorphic
from .namespaces import (
    MAP,
    NUMERIC_DATATYPES,
    OWL,
    QB,
    QB4O,
    RDF,
    RDFS,
    SKOS,
    WELL_KNOWN_PREFIXES,
    XSD,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_FLOAT,
    XSD_INTEGER,
    XSD_LANG_STRING,
    XSD_STRING,
    Namespace,
)
from .terms import (
    BlankNode,
    Iri,
    Literal,
    Term,
    TermError,
    Triple,
    TriplePattern,
    Variable,
    bnode,
    iri,
    literal,
    var,
)
from .turtle import TurtleSyntaxError, parse_turtle, serialize_turtle

__all__ = [
    "Binding", "Graph", "graph_with_standard_prefixes", "isomorphic",
    "MAP", "NUMERIC_DATATYPES", "OWL", "QB", "QB4O", "RDF", "RDFS", "SKOS",
    "WELL_KNOWN_PREFIXES", "XSD", "XSD_BOOLEAN", "XSD_DECIMAL", "XSD_DOUBLE",
    "XSD_FLOAT", "XSD_INTEGER", "XSD_LANG_STRING", "XSD_STRING", "Namespace",
    "BlankNode", "Iri", "Literal", "Term", "TermError", "Triple",
    "TriplePattern", "Variable", "bnode", "iri", "literal", "var",
    "TurtleSyntaxError", "parse_turtle", "serialize_turtle",
]
