"""Quality metrics over a generated graph.

Covers per-attribute property completeness, per-level dimension statistics
(attribute/member/link/triple counts with the structural identity
``triples = members x (attributes + 2) + links``), and per-cuboid fact
statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .rdf import OWL, QB, QB4O, RDF, Graph, Iri, Triple
from .schema import CubeSchema


class MetricError(ValueError):
    """A metric that is undefined on the given input."""


@dataclass(frozen=True)
class CompletenessReport:
    level: str
    attribute: str
    total_items: int
    incomplete_items: int
    percent: float

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "attribute": self.attribute,
            "totalItems": self.total_items,
            "incompleteItems": self.incomplete_items,
            "percent": self.percent,
        }


@dataclass(frozen=True)
class LevelStats:
    level: str
    attribute_count: int
    member_count: int
    external_link_count: int
    triple_count: int

    def identity_holds(self) -> bool:
        return self.triple_count == (
            self.member_count * (self.attribute_count + 2) + self.external_link_count
        )

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "attributeCount": self.attribute_count,
            "memberCount": self.member_count,
            "externalLinkCount": self.external_link_count,
            "tripleCount": self.triple_count,
        }


@dataclass(frozen=True)
class CuboidStats:
    cuboid: str
    observation_count: int
    triple_count: int

    def to_json(self) -> dict:
        return {
            "cuboid": self.cuboid,
            "observationCount": self.observation_count,
            "tripleCount": self.triple_count,
        }


def completeness_percent(total: int, incomplete: int) -> float:
    """(1 - incomplete/total) x 100, rounded half-up to two decimals."""
    ratio = Decimal(1) - (Decimal(incomplete) / Decimal(total))
    return float((ratio * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def property_completeness(graph: Graph, level: str, attribute: str) -> CompletenessReport:
    """Share of the level's members carrying at least one value for the attribute."""
    member_of = Iri(QB4O.memberOf)
    members = list(graph.subjects(member_of, Iri(level)))
    if not members:
        raise MetricError(f"level {level} has no members; completeness is undefined")
    attr = Iri(attribute)
    incomplete = sum(1 for m in members if graph.value(m, attr) is None)
    return CompletenessReport(
        level=level,
        attribute=attribute,
        total_items=len(members),
        incomplete_items=incomplete,
        percent=completeness_percent(len(members), incomplete),
    )


def level_stats(graph: Graph, schema: CubeSchema) -> list[LevelStats]:
    """One row per schema level, counted by pattern matching."""
    member_of, same_as = Iri(QB4O.memberOf), Iri(OWL.sameAs)
    out = []
    for level in sorted(schema.levels.values(), key=lambda lv: lv.iri):
        members = list(graph.subjects(member_of, Iri(level.iri)))
        links = 0
        triples = 0
        for m in members:
            for t in graph.triples(subject=m):
                triples += 1
                if t.predicate == same_as:
                    links += 1
        out.append(LevelStats(
            level=level.iri,
            attribute_count=len(level.attributes),
            member_count=len(members),
            external_link_count=links,
            triple_count=triples,
        ))
    return out


def cuboid_stats(graph: Graph, schema: CubeSchema) -> list[CuboidStats]:
    """One row per cuboid structure: observations in its dataset and their triples."""
    a = Iri(RDF.type)
    observation = Iri(QB.Observation)
    out = []
    for structure in sorted(schema.structures.values(), key=lambda st: st.iri):
        observations = set()
        for ds in schema.datasets.values():
            if ds.structure != structure.iri:
                continue
            for obs in graph.subjects(Iri(QB.dataSet), Iri(ds.iri)):
                if Triple(obs, a, observation) in graph:
                    observations.add(obs)
        triples = sum(sum(1 for _ in graph.triples(subject=o)) for o in observations)
        out.append(CuboidStats(structure.iri, len(observations), triples))
    return out


def stats_report(graph: Graph, schema: CubeSchema) -> dict:
    return {
        "levels": [s.to_json() for s in level_stats(graph, schema)],
        "cuboids": [s.to_json() for s in cuboid_stats(graph, schema)],
    }
