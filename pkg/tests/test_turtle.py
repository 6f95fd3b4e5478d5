import pytest
from hypothesis import given, settings, strategies as st

from cubekg.rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    RDF,
    TurtleSyntaxError,
    Triple,
    XSD,
    isomorphic,
    parse_turtle,
    serialize_turtle,
)

EX = "http://example.org/"


class TestParserGrammar:
    def test_empty_document(self):
        assert len(parse_turtle("")) == 0
        assert len(parse_turtle("# only a comment\n")) == 0

    def test_paper_linking_example(self):
        doc = (
            "@prefix agri: <http://bike-csecu.com/datasets/agri/abox/mdProperty#> .\n"
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
            "@prefix wiki: <http://www.wikidata.org/entity/> .\n"
            "agri:District owl:sameAs wiki:Q152732 .\n"
        )
        g = parse_turtle(doc)
        assert len(g) == 1
        triple = next(iter(g))
        assert triple.object == Iri("http://www.wikidata.org/entity/Q152732")

    def test_predicate_list_three_triples(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            'ex:s ex:p1 "a" ; ex:p2 "b" ; ex:p3 "c" .\n'
        )
        assert len(g) == 3
        assert {t.predicate.value for t in g} == {EX + "p1", EX + "p2", EX + "p3"}

    def test_object_list(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p 1, 2, 3 .")
        assert len(g) == 3

    def test_a_keyword(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .\nex:s a ex:T .")
        assert next(iter(g)).predicate.value == RDF.type

    def test_typed_and_tagged_literals(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
            'ex:s ex:p "3.5"^^xsd:float, "hola"@es .\n'
        )
        objects = {t.object for t in g}
        assert Literal("3.5", XSD.float) in objects
        assert Literal("hola", RDF.langString, "es") in objects

    def test_numeric_and_boolean_shorthand(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            "ex:s ex:p 42, -7, 3.14, 1.0e6, true, false .\n"
        )
        datatypes = sorted(t.object.datatype for t in g)
        assert datatypes.count(XSD.integer) == 2
        assert datatypes.count(XSD.decimal) == 1
        assert datatypes.count(XSD.double) == 1
        assert datatypes.count(XSD.boolean) == 2

    def test_bnode_label_and_property_list(self):
        g = parse_turtle(
            "@prefix ex: <http://example.org/> .\n"
            "_:x ex:p _:y .\n"
            'ex:s ex:q [ ex:inner "v" ] .\n'
        )
        assert len(g) == 3

    def test_bnode_labels_are_scoped_per_document(self):
        g = Graph()
        parse_turtle("@prefix ex: <http://example.org/> .\n_:a ex:p 1 .", g)
        parse_turtle("@prefix ex: <http://example.org/> .\n_:a ex:p 2 .", g)
        subjects = {t.subject for t in g}
        assert len(subjects) == 2  # the two _:a labels stay distinct

    def test_base_resolution(self):
        g = parse_turtle("@base <http://example.org/dir/> .\n<rel> <p> <../up> .")
        triple = next(iter(g))
        assert triple.subject.value == "http://example.org/dir/rel"
        assert triple.object.value == "http://example.org/up"

    def test_sparql_style_directives(self):
        g = parse_turtle("PREFIX ex: <http://example.org/>\nex:s ex:p ex:o .")
        assert len(g) == 1

    def test_long_string_with_newline(self):
        g = parse_turtle('@prefix ex: <http://example.org/> .\nex:s ex:p """line1\nline2""" .')
        assert next(iter(g)).object.lexical == "line1\nline2"

    def test_prefixes_retained(self):
        g = parse_turtle("@prefix ex: <http://example.org/> .")
        assert g.prefixes["ex"] == EX


class TestParserErrors:
    def test_undefined_prefix_named(self):
        with pytest.raises(TurtleSyntaxError, match="undefined prefix 'nope:'"):
            parse_turtle("nope:s nope:p nope:o .")

    def test_unterminated_literal_with_position(self):
        with pytest.raises(TurtleSyntaxError) as err:
            parse_turtle('@prefix ex: <http://example.org/> .\nex:s ex:p "open .')
        assert "unterminated string" in str(err.value)
        assert err.value.line == 2

    def test_syntax_error_carries_line_and_column(self):
        with pytest.raises(TurtleSyntaxError) as err:
            parse_turtle("@prefix ex: <http://example.org/> .\nex:s .\n")
        assert err.value.line == 2
        assert err.value.column >= 1

    def test_collections_rejected(self):
        with pytest.raises(TurtleSyntaxError, match="collection"):
            parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p (1 2) .")

    def test_unterminated_iri(self):
        with pytest.raises(TurtleSyntaxError, match="unterminated IRI"):
            parse_turtle("<http://example.org/s> <http://example.org/p> <http://open")


class TestSerializer:
    def test_empty_graph(self):
        g = Graph()
        assert serialize_turtle(g) == ""
        g.bind("ex", EX)
        out = serialize_turtle(g)
        assert out == f"@prefix ex: <{EX}> .\n"

    def test_one_triple_roundtrip(self):
        g = Graph([Triple(Iri(EX + "s"), Iri(EX + "p"), Literal("x"))])
        again = parse_turtle(serialize_turtle(g))
        assert set(again) == set(g)

    def test_prefixes_emitted_and_used(self):
        g = Graph(prefixes={"ex": EX})
        g.add(Iri(EX + "s"), Iri(EX + "p"), Iri(EX + "o"))
        out = serialize_turtle(g)
        assert "@prefix ex: <http://example.org/> ." in out
        assert "ex:s ex:p ex:o ." in out

    def test_deterministic_output(self):
        g1 = Graph()
        g2 = Graph()
        batch = [
            Triple(Iri(EX + s), Iri(EX + p), Literal(v))
            for s in "ab" for p in "xy" for v in ("1", "2")
        ]
        for triple in batch:
            g1.insert(triple)
        for triple in reversed(batch):
            g2.insert(triple)
        assert serialize_turtle(g1) == serialize_turtle(g2)


# A modest term universe keeps shrinking fast while covering IRIs, bnodes,
# typed/tagged literals, and awkward lexical content.
_iris = st.sampled_from([Iri(EX + x) for x in ("s", "p", "o", "s2", "p2")])
_bnodes = st.sampled_from([BlankNode(f"g{i}") for i in range(3)])
_texts = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
    max_size=12,
)
_literals = st.one_of(
    st.builds(Literal, _texts),
    st.builds(lambda v: Literal(v, XSD.integer), st.integers(-999, 999).map(str)),
    st.builds(lambda v: Literal(v, RDF.langString, "en"), _texts),
    st.builds(lambda v: Literal(v, XSD.float), st.floats(-1e3, 1e3, allow_nan=False).map(repr)),
)
_triples = st.builds(
    Triple,
    st.one_of(_iris, _bnodes),
    _iris,
    st.one_of(_iris, _bnodes, _literals),
)


@given(st.lists(_triples, max_size=25))
@settings(max_examples=120, deadline=None)
def test_roundtrip_isomorphic(batch):
    g = Graph(batch, prefixes={"ex": EX})
    again = parse_turtle(serialize_turtle(g))
    assert isomorphic(g, again)
    assert len(again) == len(g)
