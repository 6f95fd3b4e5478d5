import re

import pytest

from cubekg.fixtures import DATA, MDA, MDP, MDS
from cubekg.olap import (
    Aggregate,
    AttributeFilter,
    BooleanFilter,
    GroupBy,
    MeasureFilter,
    OlapQuery,
    QueryError,
    compile_query,
    emit_federated_sparql,
    emit_sparql,
)
from cubekg.schema import AggregateFunction

from sparql_grammar import SparqlGrammarError, check_sparql

GEO, PROD, TIME = MDS.agriGeographyDim, MDS.agriProductDim, MDS.agriTimeDim


def listing_scenario_query():
    """Category/Division/Year averages diced to two categories and one year."""
    return OlapQuery(
        dataset=DATA.agricultureDataset,
        group_by=(
            GroupBy(PROD, MDP.Category, MDA.categoryName),
            GroupBy(GEO, MDP.Division, MDA.divisionName),
            GroupBy(TIME, MDP.Time, MDA.yearName),
        ),
        aggregates=(
            Aggregate(MDP.area, AggregateFunction.AVG),
            Aggregate(MDP.production, AggregateFunction.AVG),
        ),
        filters=BooleanFilter("and", (
            BooleanFilter("or", (
                AttributeFilter(MDP.Category, MDA.categoryName, "regex", "Cereals"),
                AttributeFilter(MDP.Category, MDA.categoryName, "regex", "Fiber Crops"),
            )),
            AttributeFilter(MDP.Time, MDA.yearName, "regex", "2018-19"),
        )),
        order_by=("agriProductDim_categoryName", "agriGeographyDim_divisionName",
                  "agriTimeDim_yearName", "area_avg"),
    )


@pytest.fixture(scope="module")
def listing_text(demo_schema):
    return emit_sparql(compile_query(listing_scenario_query(), demo_schema))


class TestListingScenario:
    def test_observation_scan(self, listing_text):
        assert "?o a qb:Observation ." in listing_text
        assert f"?o qb:dataSet <{DATA.agricultureDataset}> ." in listing_text

    def test_measures_cast_through_float(self, listing_text):
        assert "(AVG(<http://www.w3.org/2001/XMLSchema#float>(?m1)) AS ?area_avg)" \
            in listing_text
        assert "(AVG(<http://www.w3.org/2001/XMLSchema#float>(?m2)) AS ?production_avg)" \
            in listing_text

    def test_two_rollup_hops(self, listing_text):
        assert f"<{MDA.inCategory}> ?agriProductDim_Category" in listing_text
        assert f"<{MDA.inDivision}> ?agriGeographyDim_Division" in listing_text

    def test_member_of_patterns(self, listing_text):
        for level in (MDP.Product, MDP.Category, MDP.District, MDP.Division, MDP.Time):
            assert f"qb4o:memberOf <{level}>" in listing_text

    def test_time_chain_has_zero_hops(self, listing_text):
        assert f"?o <{MDP.Time}> ?agriTimeDim_Time ." in listing_text
        assert "?agriTimeDim_Time <" in listing_text
        # no roll-up hop away from the Time member
        assert "agriTimeDim_All" not in listing_text

    def test_filter_three_regex_terms(self, listing_text):
        filter_line = next(line for line in listing_text.splitlines()
                           if line.startswith("FILTER"))
        assert filter_line.count('REGEX(') == 3
        assert filter_line.count('"i"') == 3
        assert "||" in filter_line and "&&" in filter_line

    def test_group_and_order_by_key_variables(self, listing_text):
        assert ("GROUP BY ?agriProductDim_categoryName ?agriGeographyDim_divisionName "
                "?agriTimeDim_yearName") in listing_text
        assert ("ORDER BY ?agriProductDim_categoryName ?agriGeographyDim_divisionName "
                "?agriTimeDim_yearName ?area_avg") in listing_text

    def test_prefix_block(self, listing_text):
        assert "PREFIX qb: <http://purl.org/linked-data/cube#>" in listing_text
        assert "PREFIX qb4o: <http://purl.org/qb4olap/cubes#>" in listing_text
        assert "PREFIX skos: <http://www.w3.org/2004/02/skos/core#>" in listing_text

    def test_passes_grammar_check(self, listing_text):
        check_sparql(listing_text)

    def test_deterministic(self, demo_schema):
        a = emit_sparql(compile_query(listing_scenario_query(), demo_schema))
        b = emit_sparql(compile_query(listing_scenario_query(), demo_schema))
        assert a == b


class TestOtherShapes:
    def test_no_filter_no_filter_clause(self, demo_schema):
        q = OlapQuery(
            DATA.agricultureDataset,
            (GroupBy(GEO, MDP.District, MDA.districtName),),
            (Aggregate(MDP.area, AggregateFunction.SUM),),
        )
        text = emit_sparql(compile_query(q, demo_schema))
        assert "FILTER" not in text
        check_sparql(text)

    def test_count_not_cast(self, demo_schema):
        q = OlapQuery(
            DATA.agricultureDataset,
            (GroupBy(GEO, MDP.District, MDA.districtName),),
            (Aggregate(MDP.production, AggregateFunction.COUNT),),
        )
        text = emit_sparql(compile_query(q, demo_schema))
        assert "(COUNT(?m1) AS ?production_count)" in text
        check_sparql(text)

    def test_measure_filter_rendered(self, demo_schema):
        q = OlapQuery(
            DATA.agricultureDataset,
            (GroupBy(GEO, MDP.District, MDA.districtName),),
            (Aggregate(MDP.production, AggregateFunction.SUM),),
            filters=MeasureFilter(MDP.production, ">", 1000.0),
        )
        text = emit_sparql(compile_query(q, demo_schema))
        assert "FILTER (<http://www.w3.org/2001/XMLSchema#float>(?m1) > 1000)" in text
        check_sparql(text)

    def test_numeric_attribute_filter_cast(self, demo_schema):
        q = OlapQuery(
            DATA.agricultureDataset,
            (GroupBy(TIME, MDP.Time, MDA.yearName),),
            (Aggregate(MDP.production, AggregateFunction.SUM),),
            filters=AttributeFilter(MDP.Time, MDA.startYear, ">=", "2017"),
        )
        text = emit_sparql(compile_query(q, demo_schema))
        assert "?Time_startYear" in text
        assert ">= 2017" in text
        check_sparql(text)

    def test_grand_total_query_no_group_by(self, demo_schema):
        q = OlapQuery(
            DATA.agricultureDataset,
            (),
            (Aggregate(MDP.production, AggregateFunction.SUM),),
        )
        text = emit_sparql(compile_query(q, demo_schema))
        assert "GROUP BY" not in text
        check_sparql(text)

    def test_grammar_checker_rejects_broken_text(self):
        with pytest.raises(SparqlGrammarError):
            check_sparql("SELECT ?x WHERE { ?x ?y }")  # missing dot and term
        with pytest.raises(SparqlGrammarError):
            check_sparql("SELECT WHERE { ?s ?p ?o . }")
        with pytest.raises(SparqlGrammarError):
            check_sparql("PREFIX x <http://a> SELECT ?s WHERE { ?s ?p ?o . }")


class TestFederated:
    ENDPOINT = "https://query.wikidata.org/sparql"
    PATTERN = "?District_ext <http://www.wikidata.org/prop/direct/P2046> ?districtArea ."

    def forestry_query(self):
        return OlapQuery(
            DATA.forestryDataset,
            (GroupBy(GEO, MDP.District, MDA.districtName),
             GroupBy(TIME, MDP.Time, MDA.yearName)),
            (Aggregate(MDP.area, AggregateFunction.SUM),),
        )

    def test_service_block_joined_on_same_as(self, demo_schema, demo_graph):
        plan = compile_query(self.forestry_query(), demo_schema)
        text = emit_federated_sparql(plan, self.ENDPOINT, MDP.District, self.PATTERN,
                                     graph=demo_graph)
        assert f"SERVICE <{self.ENDPOINT}> {{" in text
        assert "?agriGeographyDim_District owl:sameAs ?District_ext ." in text
        assert self.PATTERN in text
        assert "PREFIX owl:" in text
        assert "WARNING" not in text
        check_sparql(text)

    def test_fish_population_join(self, demo_schema, demo_graph):
        q = OlapQuery(
            DATA.fisheriesDataset,
            (GroupBy(GEO, MDP.District, MDA.districtName),),
            (Aggregate(MDP.production, AggregateFunction.SUM),),
        )
        pattern = "?District_ext <http://www.wikidata.org/prop/direct/P1082> ?population ."
        text = emit_federated_sparql(compile_query(q, demo_schema), self.ENDPOINT,
                                     MDP.District, pattern, graph=demo_graph)
        assert "?population" in text
        check_sparql(text)

    def test_empty_pattern_rejected(self, demo_schema):
        plan = compile_query(self.forestry_query(), demo_schema)
        with pytest.raises(QueryError, match="non-empty"):
            emit_federated_sparql(plan, self.ENDPOINT, MDP.District, "  ")

    def test_join_level_must_be_on_a_chain(self, demo_schema):
        plan = compile_query(self.forestry_query(), demo_schema)
        with pytest.raises(QueryError, match="not part"):
            emit_federated_sparql(plan, self.ENDPOINT, MDP.Habitat, self.PATTERN)

    def test_warning_when_no_links(self, demo_schema):
        from cubekg.rdf import Graph
        plan = compile_query(self.forestry_query(), demo_schema)
        text = emit_federated_sparql(plan, self.ENDPOINT, MDP.District, self.PATTERN,
                                     graph=Graph())
        assert text.startswith("# WARNING: no owl:sameAs links")
        check_sparql(text)
