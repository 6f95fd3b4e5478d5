import pytest

from cubekg.etl import member_iri, observation_iri
from cubekg.fixtures import ABOX_BASE, DATA, MDA, MDP, demo_schema
from cubekg.quality import (
    CompletenessReport,
    MetricError,
    completeness_percent,
    cuboid_stats,
    level_stats,
    property_completeness,
    stats_report,
)
from cubekg.rdf import Graph, Iri, Literal, OWL, QB, QB4O, RDF, XSD
from cubekg.schema import local_name

# the published per-level figures: (level, attributes, members, links, triples)
DIMENSION_TABLE = [
    ("District", 3, 64, 128, 448),
    ("Division", 3, 7, 14, 49),
    ("All", 3, 1, 1, 6),
    ("Product", 3, 114, 134, 704),
    ("Category", 3, 15, 15, 90),
    ("Habitat", 3, 14, 14, 84),
    ("Sector", 6, 4, 4, 36),
    ("Agriculture", 6, 1, 1, 9),
    ("Time", 3, 52, 52, 312),
]


def _member_graph(level_local, level_iri, n_members, attrs_per_member, links_per_member):
    """Synthesize a strictly-shaped level population."""
    g = Graph()
    member_of, a = Iri(QB4O.memberOf), Iri(RDF.type)
    for i in range(n_members):
        m = Iri(member_iri(ABOX_BASE, level_local, str(i)))
        g.add(m, a, Iri(QB4O.LevelMember))
        g.add(m, member_of, Iri(level_iri))
        for j in range(attrs_per_member):
            g.add(m, Iri(MDA[f"attr{j}"]), Literal(f"v{i}-{j}"))
        for j in range(links_per_member):
            g.add(m, Iri(OWL.sameAs), Iri(f"http://www.wikidata.org/entity/Q{i}_{j}"))
    return g


class TestCompleteness:
    def test_no_missing_is_100(self):
        g = _member_graph("District", MDP.District, 64, 1, 0)
        report = property_completeness(g, MDP.District, MDA.attr0)
        assert report.percent == 100.00
        assert report.total_items == 64
        assert report.incomplete_items == 0

    def test_all_missing_is_0(self):
        g = _member_graph("District", MDP.District, 10, 0, 0)
        report = property_completeness(g, MDP.District, MDA.scientificName)
        assert report.percent == 0.00

    def test_7_of_116_missing_is_93_97(self):
        g = _member_graph("Product", MDP.Product, 116, 0, 0)
        attr = Iri(MDA.scientificName)
        for i in range(116 - 7):
            m = Iri(member_iri(ABOX_BASE, "Product", str(i)))
            g.add(m, attr, Literal(f"Species {i}"))
        report = property_completeness(g, MDP.Product, MDA.scientificName)
        assert report.incomplete_items == 7
        assert report.percent == 93.97

    def test_rounding_is_half_up(self):
        # 1 - 3/8 = 0.625 -> 62.50; 1 - 19/1600 = 0.988125 -> 98.81
        assert completeness_percent(8, 3) == 62.50
        assert completeness_percent(1600, 19) == 98.81
        # exact .005 boundary rounds up
        assert completeness_percent(200000, 2990) == 98.51

    def test_zero_members_undefined(self):
        with pytest.raises(MetricError, match="no members"):
            property_completeness(Graph(), MDP.District, MDA.districtName)

    def test_monotone_in_added_triples(self):
        g = _member_graph("Product", MDP.Product, 20, 0, 0)
        attr = Iri(MDA.scientificName)
        last = 0.0
        for i in range(20):
            g.add(Iri(member_iri(ABOX_BASE, "Product", str(i))), attr, Literal("x"))
            percent = property_completeness(g, MDP.Product, MDA.scientificName).percent
            assert percent >= last
            last = percent
        assert last == 100.00


class TestLevelStats:
    def test_identity_on_synthetic_district(self, demo_schema):
        g = _member_graph("District", MDP.District, 64, 3, 2)
        stats = {local_name(s.level): s for s in level_stats(g, demo_schema)}
        district = stats["District"]
        assert district.member_count == 64
        assert district.external_link_count == 128
        assert district.triple_count == 448
        assert district.identity_holds()

    def test_sector_row(self, demo_schema):
        g = _member_graph("Sector", MDP.Sector, 4, 6, 1)
        stats = {local_name(s.level): s for s in level_stats(g, demo_schema)}
        assert stats["Sector"].triple_count == 36

    def test_empty_level_all_zero(self, demo_schema):
        stats = {local_name(s.level): s for s in level_stats(Graph(), demo_schema)}
        empty = stats["Habitat"]
        assert (empty.member_count, empty.external_link_count, empty.triple_count) == (0, 0, 0)

    def test_published_table_reproduced_by_identity(self):
        total = 0
        for level, attrs, members, links, triples in DIMENSION_TABLE:
            assert members * (attrs + 2) + links == triples, level
            total += triples
        assert total == 1738

    def test_demo_graph_matches_published_table(self, demo_graph, demo_schema):
        stats = {local_name(s.level): s for s in level_stats(demo_graph, demo_schema)}
        for level, attrs, members, links, triples in DIMENSION_TABLE:
            s = stats[level]
            assert (s.attribute_count, s.member_count,
                    s.external_link_count, s.triple_count) == (attrs, members, links, triples)
            assert s.identity_holds()
        assert sum(s.triple_count for s in stats.values()) == 1738

    def test_identity_holds_on_every_generated_level(self, demo_graph, demo_schema):
        for s in level_stats(demo_graph, demo_schema):
            assert s.identity_holds(), s.level


class TestCuboidStats:
    def _observation(self, g, key, dataset, measures=2, levels=3):
        obs = Iri(observation_iri(ABOX_BASE, key))
        g.add(obs, Iri(RDF.type), Iri(QB.Observation))
        g.add(obs, Iri(QB.dataSet), Iri(dataset))
        for i in range(levels):
            g.add(obs, Iri(MDP[f"LevelRef{i}"]), Iri(f"{ABOX_BASE}x/{key}-{i}"))
        for i in range(measures):
            g.add(obs, Iri(MDP[f"measure{i}"]), Literal("1", XSD.float))
        return obs

    def test_six_row_fixture_counts_six(self, demo_schema):
        g = Graph()
        for key in ("A0101921004201718", "A0101921006201718", "A0101921004201819",
                    "A0101921006201819", "A0101921004201920", "A0101921006201920"):
            self._observation(g, key, DATA.agricultureDataset)
        stats = {local_name(c.cuboid): c for c in cuboid_stats(g, demo_schema)}
        assert stats["productionCuboid"].observation_count == 6

    def test_full_observation_is_seven_triples(self, demo_schema):
        g = Graph()
        self._observation(g, "only", DATA.agricultureDataset, measures=2, levels=3)
        stats = {local_name(c.cuboid): c for c in cuboid_stats(g, demo_schema)}
        assert stats["productionCuboid"].triple_count == 7

    def test_empty_cuboid_is_zero_zero(self, demo_schema):
        stats = {local_name(c.cuboid): c for c in cuboid_stats(Graph(), demo_schema)}
        assert (stats["fisheriesCuboid"].observation_count,
                stats["fisheriesCuboid"].triple_count) == (0, 0)

    def test_demo_graph_counts(self, demo_graph, demo_schema):
        stats = {local_name(c.cuboid): c for c in cuboid_stats(demo_graph, demo_schema)}
        assert stats["productionCuboid"].observation_count == 29
        assert stats["fisheriesCuboid"].observation_count == 9
        assert stats["forestryCuboid"].observation_count == 13
        for c in stats.values():
            assert c.observation_count <= c.triple_count


def test_stats_report_shape(demo_graph, demo_schema):
    doc = stats_report(demo_graph, demo_schema)
    assert len(doc["levels"]) == 9
    assert len(doc["cuboids"]) == 3
    assert all({"level", "attributeCount", "memberCount", "externalLinkCount",
                "tripleCount"} <= set(row) for row in doc["levels"])
