"""RDF term and triple model.

Terms come in three shapes: IRIs, blank nodes, and literals.  Triples are
constrained at construction time: the subject is an IRI or blank node, the
predicate an IRI, and the object any term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .namespaces import XSD_LANG_STRING, XSD_STRING


class TermError(ValueError):
    """A malformed term or an ill-typed triple position."""


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise TermError("IRI must be non-empty")
        if any(ch.isspace() for ch in self.value):
            raise TermError(f"IRI contains whitespace: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self):
        if not self.label:
            raise TermError("blank node label must be non-empty")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    def __post_init__(self):
        if not self.datatype:
            raise TermError("literal must carry a datatype IRI")
        if self.language is not None and self.datatype != XSD_LANG_STRING:
            raise TermError("language tag requires the language-string datatype")
        if self.language is None and self.datatype == XSD_LANG_STRING:
            raise TermError("language-string literal requires a language tag")

    def n3(self) -> str:
        from .turtle import escape_string  # noqa: PLC0415 (cycle at import time)

        quoted = f'"{escape_string(self.lexical)}"'
        if self.language is not None:
            return f"{quoted}@{self.language}"
        if self.datatype != XSD_STRING:
            return f"{quoted}^^<{self.datatype}>"
        return quoted

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BlankNode, Literal]
SubjectTerm = Union[Iri, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: SubjectTerm
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TermError(f"triple subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TermError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TermError(f"triple object must be an RDF term, got {self.object!r}")

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


@dataclass(frozen=True, slots=True)
class Variable:
    """A named hole in a triple pattern."""

    name: str

    def __post_init__(self):
        if not self.name:
            raise TermError("variable name must be non-empty")

    def n3(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Iri, BlankNode, Literal, Variable]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """A triple with optional variables; the predicate slot never holds a literal."""

    subject: PatternTerm
    predicate: Union[Iri, Variable]
    object: PatternTerm

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise TermError("pattern subject cannot be a literal")
        if not isinstance(self.predicate, (Iri, Variable)):
            raise TermError("pattern predicate must be an IRI or variable")

    def variables(self) -> tuple[str, ...]:
        names = []
        for slot in (self.subject, self.predicate, self.object):
            if isinstance(slot, Variable) and slot.name not in names:
                names.append(slot.name)
        return tuple(names)


def iri(value: str) -> Iri:
    return Iri(value)


def bnode(label: str) -> BlankNode:
    return BlankNode(label)


def literal(lexical: str, datatype: str = XSD_STRING, language: str | None = None) -> Literal:
    if language is not None:
        return Literal(lexical, XSD_LANG_STRING, language)
    return Literal(lexical, datatype)


def var(name: str) -> Variable:
    return Variable(name)
