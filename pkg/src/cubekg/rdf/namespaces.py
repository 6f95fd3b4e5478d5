"""Namespace constants for the vocabularies the engine reads and writes."""

from __future__ import annotations


class Namespace:
    """An IRI prefix that mints full IRIs via attribute or item access."""

    def __init__(self, base: str):
        self._base = base

    @property
    def base(self) -> str:
        return self._base

    def __getattr__(self, local: str) -> str:
        if local.startswith("_"):
            raise AttributeError(local)
        return self._base + local

    def __getitem__(self, local: str) -> str:
        return self._base + local

    def __contains__(self, iri: str) -> bool:
        return iri.startswith(self._base)

    def local(self, iri: str) -> str:
        """Strip the namespace from *iri*; raises ValueError when it does not match."""
        if iri not in self:
            raise ValueError(f"{iri!r} is not in namespace {self._base!r}")
        return iri[len(self._base):]

    def __repr__(self) -> str:
        return f"Namespace({self._base!r})"


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
QB = Namespace("http://purl.org/linked-data/cube#")
QB4O = Namespace("http://purl.org/qb4olap/cubes#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")

# Default namespace for the source-to-target mapping vocabulary and for the
# engine's own schema extensions (overridable where a mapping file declares
# its own).
MAP = Namespace("http://bike-csecu.com/map#")

XSD_STRING = XSD.string
XSD_LANG_STRING = RDF.langString
XSD_INTEGER = XSD.integer
XSD_DECIMAL = XSD.decimal
XSD_DOUBLE = XSD.double
XSD_FLOAT = XSD.float
XSD_BOOLEAN = XSD.boolean

NUMERIC_DATATYPES = frozenset({
    XSD_INTEGER,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_FLOAT,
    XSD.int,
    XSD.long,
    XSD.short,
    XSD.nonNegativeInteger,
    XSD.positiveInteger,
})

#: Prefixes every serialized graph may rely on.
WELL_KNOWN_PREFIXES = {
    "rdf": RDF.base,
    "rdfs": RDFS.base,
    "owl": OWL.base,
    "xsd": XSD.base,
    "qb": QB.base,
    "qb4o": QB4O.base,
    "skos": SKOS.base,
}
