"""Synthetic three-dimension cube plus an independent brute-force oracle.

The fixture is deliberately different from the bundled demo: 40 districts /
8 regions / one geo root, 50 products / 10 groups / 3 branches / one root,
25 years rolling up to a per-dimension time root, and ~2000 observations
with integer measures.  The oracle aggregates the raw rows through plain
dictionaries; it never touches the engine's plan or executor.
"""

from __future__ import annotations

import csv
import json
import random
import re
from pathlib import Path

from cubekg.etl import PipelineConfig, run_pipeline
from cubekg.rdf import Graph, Iri, Literal, MAP, RDF, SKOS, serialize_turtle
from cubekg.rdf.namespaces import Namespace, XSD
from cubekg.schema import (
    AggregateFunction,
    CubeDataset,
    CubeSchema,
    CuboidStructure,
    Dimension,
    Hierarchy,
    HierarchyStep,
    Level,
    LevelAttribute,
    Measure,
    serialize_tbox,
)

P = Namespace("http://example.org/cube/prop#")
A = Namespace("http://example.org/cube/attr#")
S = Namespace("http://example.org/cube/struct#")
D = Namespace("http://example.org/cube/data#")
SRC = Namespace("http://bike-csecu.com/source#")
BASE = "http://example.org/cube/data/"

N_DISTRICTS, N_REGIONS = 40, 8
N_PRODUCTS, N_GROUPS, N_BRANCHES = 50, 10, 3
N_YEARS = 25
N_OBSERVATIONS = 2000
SEED = 20240803


def _level(local: str, id_attr: str, name_attr: str, rollup: tuple[str, str] | None,
           id_numeric: bool = False) -> Level:
    attrs = [
        LevelAttribute(A[id_attr], XSD.integer if id_numeric else XSD.string),
        LevelAttribute(A[name_attr], XSD.string),
    ]
    if rollup is not None:
        attr_local, target_local = rollup
        attrs.append(LevelAttribute(A[attr_local], P[target_local], is_rollup=True))
    if local == "Year":
        attrs.append(LevelAttribute(A.startYear, XSD.integer))
    return Level(P[local], tuple(attrs), A[id_attr])


def oracle_schema() -> CubeSchema:
    s = CubeSchema()
    for level in [
        _level("District", "districtId", "districtName", ("inRegion", "Region")),
        _level("Region", "regionId", "regionName", ("inGeoRoot", "GeoRoot")),
        _level("GeoRoot", "geoRootId", "geoRootName", None),
        _level("Product", "productId", "productName", ("inGroup", "Group")),
        _level("Group", "groupId", "groupName", ("inBranch", "Branch")),
        _level("Branch", "branchId", "branchName", ("inProductRoot", "ProductRoot")),
        _level("ProductRoot", "productRootId", "productRootName", None),
        _level("Year", "yearId", "yearName", ("inTimeRoot", "TimeRoot"), id_numeric=True),
        _level("TimeRoot", "timeRootId", "timeRootName", None),
    ]:
        s.levels[level.iri] = level

    def step(child, parent, attr_local):
        return HierarchyStep(P[child], P[parent], A[attr_local])

    s.hierarchies[S.geo] = Hierarchy(
        S.geo, S.geoDim, (P.District, P.Region, P.GeoRoot),
        (step("District", "Region", "inRegion"), step("Region", "GeoRoot", "inGeoRoot")))
    s.hierarchies[S.product] = Hierarchy(
        S.product, S.productDim, (P.Product, P.Group, P.Branch, P.ProductRoot),
        (step("Product", "Group", "inGroup"), step("Group", "Branch", "inBranch"),
         step("Branch", "ProductRoot", "inProductRoot")))
    s.hierarchies[S.time] = Hierarchy(
        S.time, S.timeDim, (P.Year, P.TimeRoot),
        (step("Year", "TimeRoot", "inTimeRoot"),))

    s.dimensions[S.geoDim] = Dimension(S.geoDim, (S.geo,))
    s.dimensions[S.productDim] = Dimension(S.productDim, (S.product,))
    s.dimensions[S.timeDim] = Dimension(S.timeDim, (S.time,))

    s.measures[P.area] = Measure(P.area, XSD.float, AggregateFunction.SUM)
    s.measures[P.production] = Measure(P.production, XSD.float, AggregateFunction.SUM)

    s.structures[S.cube] = CuboidStructure(
        S.cube,
        ((S.geoDim, P.District), (S.productDim, P.Product), (S.timeDim, P.Year)),
        (P.area, P.production))
    s.datasets[D.dataset] = CubeDataset(D.dataset, S.cube)
    return s


def _rows(rng: random.Random) -> dict:
    districts = [(f"D{i:02d}", f"District {i:02d}", f"V{i % N_REGIONS + 1}")
                 for i in range(1, N_DISTRICTS + 1)]
    regions = [(f"V{i}", f"Region {i}", "G1") for i in range(1, N_REGIONS + 1)]
    products = [(f"P{i:02d}", f"Product {i:02d}", f"U{i % N_GROUPS + 1}")
                for i in range(1, N_PRODUCTS + 1)]
    groups = [(f"U{i}", f"Group {i}", f"B{i % N_BRANCHES + 1}")
              for i in range(1, N_GROUPS + 1)]
    branches = [(f"B{i}", f"Branch {i}", "R1") for i in range(1, N_BRANCHES + 1)]
    years = [(str(2000 + i), f"{2000 + i}-{(i + 1) % 100:02d}", "T1", str(2000 + i))
             for i in range(N_YEARS)]

    coords = set()
    while len(coords) < N_OBSERVATIONS:
        coords.add((rng.randrange(N_PRODUCTS), rng.randrange(N_DISTRICTS),
                    rng.randrange(N_YEARS)))
    observations = [
        (products[p][0], districts[d][0], years[y][0],
         str(rng.randint(1, 10_000)), str(rng.randint(1, 50_000)))
        for p, d, y in sorted(coords)
    ]
    return {
        "districts": districts, "regions": regions, "products": products,
        "groups": groups, "branches": branches, "years": years,
        "observations": observations,
    }


def _mapping_graph() -> Graph:
    g = Graph(prefixes={"map": MAP.base, "onto": SRC.base})
    a = Iri(RDF.type)
    ds = Iri(MAP.dataset1)
    g.add(ds, a, Iri(MAP.Dataset))
    g.add(ds, Iri(MAP.sourceTBox), Literal("sources"))
    g.add(ds, Iri(MAP.targetTBox), Literal("tbox.ttl"))

    def concept(table: str, target: str, iri_value: str, expression: bool) -> Iri:
        cm = Iri(MAP[f"{table}Mapping"])
        g.add(cm, a, Iri(MAP.ConceptMapping))
        g.add(cm, Iri(MAP.dataset), ds)
        g.add(cm, Iri(MAP.sourceConcept), Iri(SRC[table]))
        g.add(cm, Iri(MAP.targetConcept), Iri(target))
        g.add(cm, Iri(MAP.relation), Iri(SKOS.exactMatch))
        if expression:
            g.add(cm, Iri(MAP.iriValue), Literal(iri_value))
            g.add(cm, Iri(MAP.iriValueType), Iri(MAP.Expression))
        else:
            g.add(cm, Iri(MAP.iriValue), Iri(SRC[iri_value]))
            g.add(cm, Iri(MAP.iriValueType), Iri(MAP.SourceAttribute))
        g.add(cm, Iri(MAP.matchedInstances), Literal("All"))
        return cm

    def prop(cm: Iri, tag: str, target: str, column: str):
        pm = Iri(MAP[f"{tag}Prop"])
        g.add(pm, a, Iri(MAP.PropertyMapping))
        g.add(pm, Iri(MAP.conceptMapping), cm)
        g.add(pm, Iri(MAP.targetProperty), Iri(target))
        g.add(pm, Iri(MAP.sourceProperty), Iri(SRC[column]))

    level_tables = [
        ("District", ["districtId", "districtName", "inRegion"]),
        ("Region", ["regionId", "regionName", "inGeoRoot"]),
        ("GeoRoot", ["geoRootId", "geoRootName"]),
        ("Product", ["productId", "productName", "inGroup"]),
        ("Group", ["groupId", "groupName", "inBranch"]),
        ("Branch", ["branchId", "branchName", "inProductRoot"]),
        ("ProductRoot", ["productRootId", "productRootName"]),
        ("Year", ["yearId", "yearName", "inTimeRoot", "startYear"]),
        ("TimeRoot", ["timeRootId", "timeRootName"]),
    ]
    for table, columns in level_tables:
        cm = concept(table, P[table], columns[0], expression=False)
        for column in columns:
            prop(cm, f"{table}_{column}", A[column], column)

    cm = concept("Facts", S.cube, "concat(productId, districtId, yearId)", expression=True)
    prop(cm, "Facts_product", P.Product, "productId")
    prop(cm, "Facts_district", P.District, "districtId")
    prop(cm, "Facts_year", P.Year, "yearId")
    prop(cm, "Facts_area", P.area, "area")
    prop(cm, "Facts_production", P.production, "production")
    return g


def build_oracle_fixture(root: Path) -> tuple:
    """Write sources, run the pipeline, and return (graph, schema, rows)."""
    rng = random.Random(SEED)
    data = _rows(rng)
    root.mkdir(parents=True, exist_ok=True)

    def write(name: str, header: list[str], rows):
        with open(root / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)

    write("district.csv", ["districtId", "districtName", "inRegion"], data["districts"])
    write("region.csv", ["regionId", "regionName", "inGeoRoot"], data["regions"])
    write("georoot.csv", ["geoRootId", "geoRootName"], [("G1", "Everywhere")])
    write("product.csv", ["productId", "productName", "inGroup"], data["products"])
    write("group.csv", ["groupId", "groupName", "inBranch"], data["groups"])
    write("branch.csv", ["branchId", "branchName", "inProductRoot"], data["branches"])
    write("productroot.csv", ["productRootId", "productRootName"], [("R1", "Everything")])
    write("year.csv", ["yearId", "yearName", "inTimeRoot", "startYear"], data["years"])
    write("timeroot.csv", ["timeRootId", "timeRootName"], [("T1", "Always")])
    write("facts.csv", ["productId", "districtId", "yearId", "area", "production"],
          data["observations"])

    schema = oracle_schema()
    (root / "tbox.ttl").write_text(serialize_turtle(serialize_tbox(schema)),
                                   encoding="utf-8")
    (root / "mappings.ttl").write_text(serialize_turtle(_mapping_graph()),
                                       encoding="utf-8")
    config_doc = {
        "baseIri": BASE,
        "tbox": "tbox.ttl",
        "mappings": "mappings.ttl",
        "output": "cube.ttl",
        "staging": "staging",
        "strict": True,
        "sources": [
            {"table": name, "path": f"{name.lower()}.csv"}
            for name in ("GeoRoot", "Region", "District", "ProductRoot", "Branch",
                         "Group", "Product", "TimeRoot", "Year")
        ] + [{"table": "Facts", "path": "facts.csv"}],
        "links": [],
    }
    (root / "config.json").write_text(json.dumps(config_doc), encoding="utf-8")
    graph, _ = run_pipeline(PipelineConfig.from_file(root / "config.json"))
    return graph, schema, data


# -- the oracle itself ----------------------------------------------------------


class Oracle:
    """Filter-map-aggregate over the raw fact rows, via lookup dictionaries."""

    def __init__(self, data: dict):
        self.rows = data["observations"]
        self.lookup = {}  # (levelLocal, key) -> row dict of attribute values
        level_rows = {
            "District": (data["districts"], ["districtId", "districtName", "inRegion"]),
            "Region": (data["regions"], ["regionId", "regionName", "inGeoRoot"]),
            "GeoRoot": ([("G1", "Everywhere")], ["geoRootId", "geoRootName"]),
            "Product": (data["products"], ["productId", "productName", "inGroup"]),
            "Group": (data["groups"], ["groupId", "groupName", "inBranch"]),
            "Branch": (data["branches"], ["branchId", "branchName", "inProductRoot"]),
            "ProductRoot": ([("R1", "Everything")], ["productRootId", "productRootName"]),
            "Year": (data["years"], ["yearId", "yearName", "inTimeRoot", "startYear"]),
            "TimeRoot": ([("T1", "Always")], ["timeRootId", "timeRootName"]),
        }
        for local, (rows, columns) in level_rows.items():
            for row in rows:
                self.lookup[(local, row[0])] = dict(zip(columns, row))

    # chain of (level local, key column of the child pointing up)
    UP = {
        "District": ("Region", "inRegion"),
        "Region": ("GeoRoot", "inGeoRoot"),
        "Product": ("Group", "inGroup"),
        "Group": ("Branch", "inBranch"),
        "Branch": ("ProductRoot", "inProductRoot"),
        "Year": ("TimeRoot", "inTimeRoot"),
    }
    BASE_OF_DIM = {"geoDim": "District", "productDim": "Product", "timeDim": "Year"}
    ROW_KEY_OF_DIM = {"geoDim": 1, "productDim": 0, "timeDim": 2}

    def member_key(self, row: tuple, dim_local: str, level_local: str) -> str:
        key = row[self.ROW_KEY_OF_DIM[dim_local]]
        level = self.BASE_OF_DIM[dim_local]
        while level != level_local:
            parent, up_column = self.UP[level]
            key = self.lookup[(level, key)][up_column]
            level = parent
        return key

    def attribute(self, row: tuple, dim_local: str, level_local: str, attr_local: str) -> str:
        key = self.member_key(row, dim_local, level_local)
        return self.lookup[(level_local, key)][attr_local]

    def run(self, spec: dict) -> dict[tuple, tuple]:
        """spec: groupBy [(dimLocal, levelLocal, attrLocal)], aggregates
        [(measure 'area'|'production', fn)], filters [leaf...] with
        'all_of'/'any_of' combination."""
        measure_index = {"area": 3, "production": 4}
        grouped: dict[tuple, list[tuple]] = {}
        for row in self.rows:
            if not self._matches(spec.get("filters"), row):
                continue
            key = tuple(self.attribute(row, d, lv, at) for d, lv, at in spec["groupBy"])
            grouped.setdefault(key, []).append(row)
        out = {}
        for key, rows in grouped.items():
            cells = []
            for measure, fn in spec["aggregates"]:
                values = [int(r[measure_index[measure]]) for r in rows]
                if fn == "SUM":
                    cells.append(sum(values))
                elif fn == "MIN":
                    cells.append(min(values))
                elif fn == "MAX":
                    cells.append(max(values))
                elif fn == "COUNT":
                    cells.append(len(values))
                elif fn == "AVG":
                    cells.append(float(sum(values)) / len(values))
            out[key] = tuple(cells)
        return out

    def _matches(self, node, row) -> bool:
        if node is None:
            return True
        if "all_of" in node:
            return all(self._matches(n, row) for n in node["all_of"])
        if "any_of" in node:
            return any(self._matches(n, row) for n in node["any_of"])
        if "measure" in node:
            value = int(row[{"area": 3, "production": 4}[node["measure"]]])
            return _compare(value, node["comparator"], node["value"])
        actual = self.attribute(row, node["dim"], node["level"], node["attribute"])
        if node["comparator"] == "regex":
            return re.search(node["value"], actual, re.IGNORECASE) is not None
        if node.get("numeric"):
            return _compare(float(actual), node["comparator"], float(node["value"]))
        return _compare(actual, node["comparator"], node["value"])


def _compare(left, comparator, right):
    return {
        "=": left == right, "!=": left != right,
        "<": left < right, "<=": left <= right,
        ">": left > right, ">=": left >= right,
    }[comparator]
