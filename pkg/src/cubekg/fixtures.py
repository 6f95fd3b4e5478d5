"""Bundled desk-scale demo dataset: an agriculture statistics cube.

Builds the three-dimension constellation schema (geography, product, time;
production/fisheries/forestry cuboids) and writes a complete, deterministic
source directory: level and fact CSVs, external-link CSVs, the mapping file,
the TBox, and a pipeline config.  Scale: 272 level members across 9 levels,
363 external links, and a few dozen observations.

Run ``python -m cubekg.fixtures OUTDIR`` to materialize it.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .etl import member_iri
from .rdf import MAP, RDF, SKOS, Graph, Iri, Literal, serialize_turtle
from .schema import (
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
from .rdf.namespaces import Namespace, XSD

MDP = Namespace("http://bike-csecu.com/datasets/agri/abox/mdProperty#")
MDA = Namespace("http://bike-csecu.com/datasets/agri/abox/mdAttribute#")
MDS = Namespace("http://bike-csecu.com/datasets/agri/abox/mdStructure#")
DATA = Namespace("http://bike-csecu.com/datasets/agri/abox/data#")
SOURCE = Namespace("http://bike-csecu.com/source#")
WIKI = Namespace("http://www.wikidata.org/entity/")
GEONAMES = Namespace("https://www.geonames.org/BD/")
EXIOBASE = Namespace("https://odas.aau.dk/resource/")

ABOX_BASE = "http://bike-csecu.com/datasets/agri/abox/data/"

PREFIXES = {
    "mdProperty": MDP.base,
    "mdAttribute": MDA.base,
    "mdStructure": MDS.base,
    "data": DATA.base,
}


def demo_schema() -> CubeSchema:
    """Three dimensions, four hierarchies, nine levels, two measures,
    three cuboids."""
    s = CubeSchema()

    def attr(local: str, rng: str, rollup: bool = False) -> LevelAttribute:
        return LevelAttribute(MDA[local], rng, rollup)

    levels = {
        "District": Level(MDP.District, (
            attr("districtId", XSD.integer),
            attr("districtName", XSD.string),
            attr("inDivision", MDP.Division, rollup=True),
        ), MDA.districtId),
        "Division": Level(MDP.Division, (
            attr("divisionId", XSD.integer),
            attr("divisionName", XSD.string),
            attr("inAll", MDP.All, rollup=True),
        ), MDA.divisionId),
        "All": Level(MDP.All, (
            attr("allId", XSD.string),
            attr("allName", XSD.string),
            attr("description", XSD.string),
        ), MDA.allId),
        "Product": Level(MDP.Product, (
            attr("productId", XSD.string),
            attr("productName", XSD.string),
            attr("inCategory", MDP.Category, rollup=True),
        ), MDA.productId),
        "Category": Level(MDP.Category, (
            attr("categoryId", XSD.string),
            attr("categoryName", XSD.string),
            attr("inSector", MDP.Sector, rollup=True),
        ), MDA.categoryId),
        "Habitat": Level(MDP.Habitat, (
            attr("habitatId", XSD.string),
            attr("habitatName", XSD.string),
            attr("inSector", MDP.Sector, rollup=True),
        ), MDA.habitatId),
        "Sector": Level(MDP.Sector, (
            attr("sectorId", XSD.string),
            attr("sectorName", XSD.string),
            attr("description", XSD.string),
            attr("shortName", XSD.string),
            attr("displayOrder", XSD.integer),
            attr("inAgriculture", MDP.Agriculture, rollup=True),
        ), MDA.sectorId),
        "Agriculture": Level(MDP.Agriculture, (
            attr("agricultureId", XSD.string),
            attr("agricultureName", XSD.string),
            attr("description", XSD.string),
            attr("scope", XSD.string),
            attr("country", XSD.string),
            attr("since", XSD.integer),
        ), MDA.agricultureId),
        "Time": Level(MDP.Time, (
            attr("yearId", XSD.integer),
            attr("yearName", XSD.string),
            attr("startYear", XSD.integer),
        ), MDA.yearId),
    }
    for level in levels.values():
        s.levels[level.iri] = level

    def step(child: str, parent: str, rollup_local: str) -> HierarchyStep:
        return HierarchyStep(MDP[child], MDP[parent], MDA[rollup_local])

    s.hierarchies[MDS.geoHierarchy] = Hierarchy(
        MDS.geoHierarchy, MDS.agriGeographyDim,
        (MDP.District, MDP.Division, MDP.All),
        (step("District", "Division", "inDivision"), step("Division", "All", "inAll")),
    )
    s.hierarchies[MDS.productCropsHierarchy] = Hierarchy(
        MDS.productCropsHierarchy, MDS.agriProductDim,
        (MDP.Product, MDP.Category, MDP.Sector, MDP.Agriculture),
        (step("Product", "Category", "inCategory"),
         step("Category", "Sector", "inSector"),
         step("Sector", "Agriculture", "inAgriculture")),
    )
    s.hierarchies[MDS.productFisheriesHierarchy] = Hierarchy(
        MDS.productFisheriesHierarchy, MDS.agriProductDim,
        (MDP.Habitat, MDP.Sector, MDP.Agriculture),
        (step("Habitat", "Sector", "inSector"),
         step("Sector", "Agriculture", "inAgriculture")),
    )
    s.hierarchies[MDS.timeHierarchy] = Hierarchy(
        MDS.timeHierarchy, MDS.agriTimeDim, (MDP.Time,), ()
    )

    s.dimensions[MDS.agriGeographyDim] = Dimension(
        MDS.agriGeographyDim, (MDS.geoHierarchy,))
    s.dimensions[MDS.agriProductDim] = Dimension(
        MDS.agriProductDim, (MDS.productCropsHierarchy, MDS.productFisheriesHierarchy))
    s.dimensions[MDS.agriTimeDim] = Dimension(MDS.agriTimeDim, (MDS.timeHierarchy,))

    s.measures[MDP.area] = Measure(MDP.area, XSD.float, AggregateFunction.SUM)
    s.measures[MDP.production] = Measure(MDP.production, XSD.float, AggregateFunction.SUM)

    s.structures[MDS.productionCuboid] = CuboidStructure(
        MDS.productionCuboid,
        ((MDS.agriGeographyDim, MDP.District),
         (MDS.agriProductDim, MDP.Product),
         (MDS.agriTimeDim, MDP.Time)),
        (MDP.area, MDP.production),
    )
    s.structures[MDS.fisheriesCuboid] = CuboidStructure(
        MDS.fisheriesCuboid,
        ((MDS.agriGeographyDim, MDP.District),
         (MDS.agriProductDim, MDP.Habitat),
         (MDS.agriTimeDim, MDP.Time)),
        (MDP.area, MDP.production),
    )
    s.structures[MDS.forestryCuboid] = CuboidStructure(
        MDS.forestryCuboid,
        ((MDS.agriGeographyDim, MDP.District),
         (MDS.agriProductDim, MDP.Sector),
         (MDS.agriTimeDim, MDP.Time)),
        (MDP.area, MDP.production),
    )

    s.datasets[DATA.agricultureDataset] = CubeDataset(
        DATA.agricultureDataset, MDS.productionCuboid)
    s.datasets[DATA.fisheriesDataset] = CubeDataset(
        DATA.fisheriesDataset, MDS.fisheriesCuboid)
    s.datasets[DATA.forestryDataset] = CubeDataset(
        DATA.forestryDataset, MDS.forestryCuboid)
    return s


# -- reference data -----------------------------------------------------------

DIVISIONS = [
    ("10", "BARISHAL DIVISION"),
    ("20", "CHATTOGRAM DIVISION"),
    ("30", "DHAKA DIVISION"),
    ("40", "KHULNA DIVISION"),
    ("50", "RAJSHAHI DIVISION"),
    ("55", "RANGPUR DIVISION"),
    ("60", "SYLHET DIVISION"),
]

DISTRICTS = [
    # Barishal division
    ("1004", "Barguna", "10"), ("1006", "Barishal", "10"), ("1009", "Bhola", "10"),
    ("1042", "Jhallokati", "10"), ("1078", "Patuakhali", "10"), ("1079", "Pirojpur", "10"),
    # Chattogram division
    ("2003", "Bandarban", "20"), ("2012", "Brahmanbaria", "20"), ("2013", "Chadpur", "20"),
    ("2015", "Chattogram", "20"), ("2019", "Cumilla", "20"), ("2022", "Coxs Bazar", "20"),
    ("2030", "Feni", "20"), ("2046", "Khagrachhari", "20"), ("2051", "Lakshmipur", "20"),
    ("2075", "Noakhali", "20"), ("2084", "Rangamati", "20"),
    # Dhaka division
    ("3026", "Dhaka", "30"), ("3029", "Faridpur", "30"), ("3033", "Gazipur", "30"),
    ("3035", "Gopalganj", "30"), ("3039", "Jamalpur", "30"), ("3048", "Kishoreganj", "30"),
    ("3054", "Madaripur", "30"), ("3056", "Manikganj", "30"), ("3059", "Munshiganj", "30"),
    ("3061", "Mymensingh", "30"), ("3067", "Narayanganj", "30"), ("3068", "Narsingdi", "30"),
    ("3072", "Netrokona", "30"), ("3082", "Rajbari", "30"), ("3086", "Shariatpur", "30"),
    ("3089", "Sherpur", "30"), ("3093", "Tangail", "30"),
    # Khulna division
    ("4001", "Bagerhat", "40"), ("4018", "Chuadanga", "40"), ("4041", "Jashore", "40"),
    ("4044", "Jhenaidah", "40"), ("4047", "Khulna", "40"), ("4050", "Kushtia", "40"),
    ("4055", "Magura", "40"), ("4057", "Meherpur", "40"), ("4064", "Narail", "40"),
    ("4087", "Satkhira", "40"),
    # Rajshahi division
    ("5010", "Bogura", "50"), ("5038", "Joypurhat", "50"), ("5064", "Naogaon", "50"),
    ("5069", "Natore", "50"), ("5070", "Chapainawabganj", "50"), ("5076", "Pabna", "50"),
    ("5081", "Rajshahi", "50"), ("5088", "Sirajganj", "50"),
    # Rangpur division
    ("5527", "Dinajpur", "55"), ("5532", "Gaibandha", "55"), ("5549", "Kurigram", "55"),
    ("5552", "Lalmonirhat", "55"), ("5573", "Nilphamari", "55"), ("5577", "Panchagarh", "55"),
    ("5585", "Rangpur", "55"), ("5594", "Thakurgaon", "55"),
    # Sylhet division
    ("6036", "Habiganj", "60"), ("6058", "Maulvibazar", "60"), ("6090", "Sunamganj", "60"),
    ("6091", "Sylhet", "60"),
]

SECTORS = [
    ("A011", "Crops", "Cultivated crop production", "crops", "1"),
    ("A012", "Fisheries", "Inland and marine fisheries", "fish", "2"),
    ("A013", "Forestry", "Forest coverage and products", "forest", "3"),
    ("A014", "Livestock", "Livestock and poultry", "livestock", "4"),
]

CATEGORIES = [
    ("A01001", "Cereals"), ("A01002", "Fiber Crops"), ("A01003", "Fruits"),
    ("A01004", "Pulses"), ("A01005", "Oilseeds"), ("A01006", "Spices"),
    ("A01007", "Vegetables"), ("A01008", "Beverage Crops"), ("A01009", "Narcotics"),
    ("A01010", "Sugar Crops"), ("A01011", "Tubers"), ("A01012", "Fodder Crops"),
    ("A01013", "Flowers"), ("A01014", "Medicinal Plants"), ("A01015", "Nuts"),
]

HABITATS = [
    ("A01201", "River"), ("A01202", "Estuary"), ("A01203", "Beel"), ("A01204", "Pond"),
    ("A01205", "Baor"), ("A01206", "Floodplain"), ("A01207", "Kaptai Lake"),
    ("A01208", "Pen Culture"), ("A01209", "Cage Culture"),
    ("A01210", "Seasonal Waterbody"), ("A01211", "Shrimp Farm"),
    ("A01212", "Sundarbans"), ("A01213", "Canal"), ("A01214", "Haor"),
]

PINNED_PRODUCTS = [
    ("A010101", "Wheat", "Cereals"), ("A010102", "Aus Paddy", "Cereals"),
    ("A010103", "Aman Paddy", "Cereals"), ("A010104", "Boro Paddy", "Cereals"),
    ("A010105", "Maize", "Cereals"), ("A010106", "Barley", "Cereals"),
    ("A010201", "Jute", "Fiber Crops"), ("A010202", "Cotton", "Fiber Crops"),
    ("A010192", "Banana", "Fruits"), ("A010301", "Mango", "Fruits"),
    ("A010401", "Masur", "Pulses"), ("A010402", "Arhar", "Pulses"),
    ("A010501", "Mustard", "Oilseeds"), ("A010502", "Soybean", "Oilseeds"),
    ("A010601", "Onion", "Spices"), ("A010602", "Garlic", "Spices"),
    ("A010603", "Ginger", "Spices"), ("A010701", "Potato", "Vegetables"),
    ("A010702", "Sweet Potato", "Vegetables"), ("A010801", "Tea", "Beverage Crops"),
    ("A010901", "Tobacco", "Narcotics"), ("A011001", "Sugarcane", "Sugar Crops"),
]


def products() -> list[tuple[str, str, str]]:
    """114 products: the pinned real crops plus deterministic filler."""
    out = list(PINNED_PRODUCTS)
    categories = [name for _, name in CATEGORIES]
    i = 0
    while len(out) < 114:
        out.append((f"A0199{i:02d}", f"Minor Crop {i + 1}", categories[i % len(categories)]))
        i += 1
    return out


def fiscal_years() -> list[tuple[str, str, str]]:
    """52 fiscal years 1969-70 .. 2020-21 as (yearId, yearName, startYear)."""
    out = []
    for y in range(1969, 2021):
        suffix = f"{(y + 1) % 100:02d}"
        out.append((f"{y}{suffix}", f"{y}-{suffix}", str(y)))
    return out


# Area/production of banana by district and fiscal year, micro rows plus the
# division aggregate rows that cleansing must drop.  The per-district 2018-19
# Barishal cell carries the processed-cuboid values (1664/6401).
BANANA_BLOCK = [
    ("Banana", "Barguna", "2017-18", "331", "1132"),
    ("Banana", "Barishal", "2017-18", "1668", "3219"),
    ("Banana", "Bhola", "2017-18", "513", "1178"),
    ("Banana", "Jhallokati", "2017-18", "2824", "7461"),
    ("Banana", "Patuakhali", "2017-18", "764", "3343"),
    ("Banana", "Pirojpur", "2017-18", "3240", "14034"),
    ("Banana", "Barishal Division", "2017-18", "9340", "30367"),
    ("Banana", "Barguna", "2018-19", "338", "475"),
    ("Banana", "Barishal", "2018-19", "1664", "6401"),
    ("Banana", "Bhola", "2018-19", "520", "1180"),
    ("Banana", "Jhallokati", "2018-19", "2830", "7470"),
    ("Banana", "Patuakhali", "2018-19", "765", "3345"),
    ("Banana", "Pirojpur", "2018-19", "3280", "13386"),
    ("Banana", "Barishal Division", "2018-19", "9417", "29257"),
    ("Banana", "Barguna", "2019-20", "347", "1580"),
    ("Banana", "Barishal", "2019-20", "1750", "5500"),
    ("Banana", "Bhola", "2019-20", "536", "1879"),
    ("Banana", "Jhallokati", "2019-20", "2902", "8324"),
    ("Banana", "Patuakhali", "2019-20", "554", "2717"),
    ("Banana", "Pirojpur", "2019-20", "2768", "13390"),
    ("Banana", "Barishal Division", "2019-20", "8857", "33390"),
]

OTHER_CROPS = [
    ("Onion", "Chadpur", "2017-18", "1590", "4205"),
    ("Onion", "Chadpur", "2018-19", "1661", "4308"),
    ("Onion", "Chadpur", "2019-20", "1724", "4318"),
    ("Wheat", "Barguna", "2018-19", "500", "1200"),
    ("Wheat", "Barishal", "2018-19", "620", "1500"),
    ("Wheat", "Rajshahi", "2018-19", "5200", "11000"),
    ("Jute", "Barguna", "2018-19", "800", "2000"),
    ("Jute", "Faridpur", "2018-19", "15000", "90000"),
    ("Aman Paddy", "Noakhali", "1997-98", "585410", "313070"),
    ("Aus Paddy", "Noakhali", "1997-98", "225370", "105670"),
    ("Boro Paddy", "Noakhali", "1997-98", "247870", "262710"),
]

FISHERIES_ROWS = [
    ("River", "Barguna", "2017-18", "5200"),
    ("River", "Barguna", "2018-19", "5845"),
    ("Baor", "Barguna", "2017-18", "1200"),
    ("Baor", "Barguna", "2018-19", "1400"),
    ("River", "Khulna", "2017-18", "9000"),
    ("River", "Bagerhat", "2017-18", "6780"),
    ("Beel", "Pabna", "2017-18", "1440"),
    ("Pond", "Barishal", "2018-19", "3300"),
    ("Pond", "Cumilla", "2019-20", "7000"),
]

FORESTRY_ROWS = [
    ("Forestry", "Bandarban", "2015-16", "795000.25"),
    ("Forestry", "Bandarban", "2016-17", "797541.49"),
    ("Forestry", "Rangamati", "2016-17", "650000.5"),
    ("Forestry", "Barguna", "2016-17", "75000"),
    ("Forestry", "Patuakhali", "2016-17", "150000"),
    ("Forestry", "Pirojpur", "2016-17", "6000"),
    ("Forestry", "Habiganj", "2016-17", "36360.7"),
    ("Forestry", "Kurigram", "2016-17", "128.59"),
    ("Forestry", "Nilphamari", "2016-17", "1200.08"),
    ("Forestry", "Sunamganj", "2016-17", "18012.3"),
    ("Forestry", "Dhaka", "2016-17", "934.74"),
    ("Forestry", "Khulna", "2017-18", "420000"),
    ("Forestry", "Bagerhat", "2017-18", "380000.75"),
]


def district_substitutions() -> dict[str, str]:
    return {name: code for code, name, _ in DISTRICTS}


def year_substitutions() -> dict[str, str]:
    return {name: year_id for year_id, name, _ in fiscal_years()}


def crop_substitutions() -> dict[str, str]:
    return {name: pid for pid, name, _ in products()}


def habitat_substitutions() -> dict[str, str]:
    return {name: hid for hid, name in HABITATS}


# -- source directory --------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _category_by_name() -> dict[str, str]:
    return {name: cid for cid, name in CATEGORIES}


def write_level_sources(root: Path) -> None:
    d = root / "levels"
    _write_csv(d / "district.csv", ["districtId", "districtName", "inDivision"],
               [(code, name.upper(), division) for code, name, division in DISTRICTS])
    _write_csv(d / "division.csv", ["divisionId", "divisionName", "inAll"],
               [(code, name, "BD") for code, name in DIVISIONS])
    _write_csv(d / "all.csv", ["allId", "allName", "description"],
               [("BD", "Bangladesh", "All administrative regions")])
    cat = _category_by_name()
    _write_csv(d / "product.csv", ["productId", "productName", "inCategory"],
               [(pid, name, cat[category]) for pid, name, category in products()])
    _write_csv(d / "category.csv", ["categoryId", "categoryName", "inSector"],
               [(cid, name, "A011") for cid, name in CATEGORIES])
    _write_csv(d / "habitat.csv", ["habitatId", "habitatName", "inSector"],
               [(hid, name, "A012") for hid, name in HABITATS])
    _write_csv(d / "sector.csv",
               ["sectorId", "sectorName", "description", "shortName", "displayOrder",
                "inAgriculture"],
               [(sid, name, desc, short, order, "A01")
                for sid, name, desc, short, order in SECTORS])
    _write_csv(d / "agriculture.csv",
               ["agricultureId", "agricultureName", "description", "scope", "country",
                "since"],
               [("A01", "Agriculture", "National agriculture statistics", "national",
                 "Bangladesh", "1974")])
    _write_csv(d / "time.csv", ["yearId", "yearName", "startYear"], fiscal_years())


def write_fact_sources(root: Path) -> None:
    d = root / "facts"
    _write_csv(d / "crops_production.csv",
               ["cropsId", "districtId", "yearId", "area", "production"],
               BANANA_BLOCK + OTHER_CROPS)
    _write_csv(d / "fisheries_production.csv",
               ["habitatId", "districtId", "yearId", "production"],
               FISHERIES_ROWS)
    _write_csv(d / "forestry_area.csv",
               ["sectorId", "districtId", "yearId", "area"],
               FORESTRY_ROWS)


def write_link_sources(root: Path) -> None:
    d = root / "links"

    def links_for(level_local: str, keys: list[str], externals) -> list[tuple[str, str]]:
        out = []
        for key in keys:
            local = member_iri(ABOX_BASE, level_local, key)
            for external in externals(key):
                out.append((local, external))
        return out

    rows = links_for("District", [c for c, _, _ in DISTRICTS],
                     lambda c: [WIKI[f"Q90{c}"], GEONAMES[c]])
    _write_csv(d / "district_links.csv", ["localIri", "externalIri"], rows)

    rows = links_for("Division", [c for c, _ in DIVISIONS],
                     lambda c: [WIKI[f"Q91{c}"], GEONAMES[c]])
    _write_csv(d / "division_links.csv", ["localIri", "externalIri"], rows)

    _write_csv(d / "all_links.csv", ["localIri", "externalIri"],
               [(member_iri(ABOX_BASE, "All", "BD"), WIKI.Q902)])

    product_ids = [pid for pid, _, _ in products()]
    rows = links_for("Product", product_ids, lambda p: [WIKI[f"Q80{p[1:]}"]])
    rows += links_for("Product", product_ids[:20], lambda p: [EXIOBASE[f"product/{p}"]])
    _write_csv(d / "product_links.csv", ["localIri", "externalIri"], rows)

    rows = links_for("Category", [c for c, _ in CATEGORIES], lambda c: [WIKI[f"Q81{c[1:]}"]])
    _write_csv(d / "category_links.csv", ["localIri", "externalIri"], rows)

    rows = links_for("Habitat", [h for h, _ in HABITATS], lambda h: [WIKI[f"Q82{h[1:]}"]])
    _write_csv(d / "habitat_links.csv", ["localIri", "externalIri"], rows)

    rows = links_for("Sector", [s for s, _, _, _, _ in SECTORS], lambda s: [WIKI[f"Q83{s[1:]}"]])
    _write_csv(d / "sector_links.csv", ["localIri", "externalIri"], rows)

    _write_csv(d / "agriculture_links.csv", ["localIri", "externalIri"],
               [(member_iri(ABOX_BASE, "Agriculture", "A01"), WIKI.Q11451)])

    rows = links_for("Time", [y for y, _, _ in fiscal_years()], lambda y: [WIKI[f"Q77{y}"]])
    _write_csv(d / "time_links.csv", ["localIri", "externalIri"], rows)

    # concept-level links: every level IRI points at its external counterpart
    tbox_links = [(MDP.District, WIKI.Q152732)]
    for i, local in enumerate(("Division", "All", "Product", "Category", "Habitat",
                               "Sector", "Agriculture", "Time")):
        tbox_links.append((MDP[local], WIKI[f"Q600{i:02d}"]))
    _write_csv(d / "tbox_links.csv", ["localIri", "externalIri"], tbox_links)


LEVEL_TABLES = [
    # (table, csv, level local, identifier column)
    ("District", "levels/district.csv", "District", "districtId"),
    ("Division", "levels/division.csv", "Division", "divisionId"),
    ("All", "levels/all.csv", "All", "allId"),
    ("Product", "levels/product.csv", "Product", "productId"),
    ("Category", "levels/category.csv", "Category", "categoryId"),
    ("Habitat", "levels/habitat.csv", "Habitat", "habitatId"),
    ("Sector", "levels/sector.csv", "Sector", "sectorId"),
    ("Agriculture", "levels/agriculture.csv", "Agriculture", "agricultureId"),
    ("Time", "levels/time.csv", "Time", "yearId"),
]

FACT_TABLES = [
    # (table, csv, structure local, iri-value expression, level columns, measure columns)
    ("CropsProduction", "facts/crops_production.csv", "productionCuboid",
     "concat(cropsId, districtId, yearId)",
     {"Product": "cropsId", "District": "districtId", "Time": "yearId"},
     {"area": "area", "production": "production"}),
    ("FisheriesProduction", "facts/fisheries_production.csv", "fisheriesCuboid",
     "concat(habitatId, districtId, yearId)",
     {"Habitat": "habitatId", "District": "districtId", "Time": "yearId"},
     {"production": "production"}),
    ("ForestryArea", "facts/forestry_area.csv", "forestryCuboid",
     "concat(sectorId, districtId, yearId)",
     {"Sector": "sectorId", "District": "districtId", "Time": "yearId"},
     {"area": "area"}),
]

LEVEL_COLUMNS = {
    "District": ["districtId", "districtName", "inDivision"],
    "Division": ["divisionId", "divisionName", "inAll"],
    "All": ["allId", "allName", "description"],
    "Product": ["productId", "productName", "inCategory"],
    "Category": ["categoryId", "categoryName", "inSector"],
    "Habitat": ["habitatId", "habitatName", "inSector"],
    "Sector": ["sectorId", "sectorName", "description", "shortName", "displayOrder",
               "inAgriculture"],
    "Agriculture": ["agricultureId", "agricultureName", "description", "scope",
                    "country", "since"],
    "Time": ["yearId", "yearName", "startYear"],
}


def build_mapping_graph() -> Graph:
    """The source-to-target mapping definitions for every demo table."""
    g = Graph(prefixes={
        "map": MAP.base,
        "onto": SOURCE.base,
        "mdProperty": MDP.base,
        "mdAttribute": MDA.base,
        "mdStructure": MDS.base,
        "skos": SKOS.base,
        "rdf": RDF.base,
    })
    a = Iri(RDF.type)
    dataset = Iri(MAP.agriMappingDataset)
    g.add(dataset, a, Iri(MAP.Dataset))
    g.add(dataset, Iri(MAP.sourceTBox), Literal("staging/source_tbox"))
    g.add(dataset, Iri(MAP.targetTBox), Literal("tbox.ttl"))

    def concept(name: str, source_class: str, target: str, iri_value: str,
                value_is_expression: bool) -> Iri:
        cm = Iri(MAP[f"{name}Mapping"])
        g.add(cm, a, Iri(MAP.ConceptMapping))
        g.add(cm, Iri(MAP.dataset), dataset)
        g.add(cm, Iri(MAP.sourceConcept), Iri(SOURCE[source_class]))
        g.add(cm, Iri(MAP.targetConcept), Iri(target))
        g.add(cm, Iri(MAP.relation), Iri(SKOS.exactMatch))
        if value_is_expression:
            g.add(cm, Iri(MAP.iriValue), Literal(iri_value))
            g.add(cm, Iri(MAP.iriValueType), Iri(MAP.Expression))
        else:
            g.add(cm, Iri(MAP.iriValue), Iri(SOURCE[iri_value]))
            g.add(cm, Iri(MAP.iriValueType), Iri(MAP.SourceAttribute))
        g.add(cm, Iri(MAP.matchedInstances), Literal("All"))
        return cm

    def prop(cm: Iri, name: str, target: str, column: str) -> None:
        pm = Iri(MAP[f"{name}PropertyMapping"])
        g.add(pm, a, Iri(MAP.PropertyMapping))
        g.add(pm, Iri(MAP.conceptMapping), cm)
        g.add(pm, Iri(MAP.targetProperty), Iri(target))
        g.add(pm, Iri(MAP.sourceProperty), Iri(SOURCE[column]))

    for table, _, level_local, id_column in LEVEL_TABLES:
        cm = concept(table, table, MDP[level_local], id_column, value_is_expression=False)
        for column in LEVEL_COLUMNS[level_local]:
            prop(cm, f"{table}_{column}", MDA[column], column)

    for table, _, structure_local, expr, level_cols, measure_cols in FACT_TABLES:
        cm = concept(table, table, MDS[structure_local], expr, value_is_expression=True)
        for level_local, column in level_cols.items():
            prop(cm, f"{table}_{column}", MDP[level_local], column)
        for measure_local, column in measure_cols.items():
            prop(cm, f"{table}_measure_{column}", MDP[measure_local], column)

    return g


def build_config(root: Path) -> dict:
    sources = []
    for table, path, _, _ in LEVEL_TABLES:
        sources.append({"table": table, "path": path})
    crops_cleansing = {
        "dropRow": {"column": "districtId", "pattern": "Division$"},
        "substitutions": {
            "cropsId": crop_substitutions(),
            "districtId": district_substitutions(),
            "yearId": year_substitutions(),
        },
        "trim": True,
    }
    fisheries_cleansing = {
        "substitutions": {
            "habitatId": habitat_substitutions(),
            "districtId": district_substitutions(),
            "yearId": year_substitutions(),
        },
        "trim": True,
    }
    forestry_cleansing = {
        "substitutions": {
            "sectorId": {name: sid for sid, name, _, _, _ in SECTORS},
            "districtId": district_substitutions(),
            "yearId": year_substitutions(),
        },
        "trim": True,
    }
    sources.append({"table": "CropsProduction", "path": "facts/crops_production.csv",
                    "cleansing": crops_cleansing})
    sources.append({"table": "FisheriesProduction", "path": "facts/fisheries_production.csv",
                    "cleansing": fisheries_cleansing,
                    "optionalMeasures": [MDP.area]})
    sources.append({"table": "ForestryArea", "path": "facts/forestry_area.csv",
                    "cleansing": forestry_cleansing,
                    "optionalMeasures": [MDP.production]})
    return {
        "baseIri": ABOX_BASE,
        "tbox": "tbox.ttl",
        "mappings": "mappings.ttl",
        "output": "bdakg.ttl",
        "staging": "staging",
        "strict": True,
        "sources": sources,
        "links": [f"links/{name}" for name in (
            "district_links.csv", "division_links.csv", "all_links.csv",
            "product_links.csv", "category_links.csv", "habitat_links.csv",
            "sector_links.csv", "agriculture_links.csv", "time_links.csv",
            "tbox_links.csv",
        )],
    }


def write_demo_sources(root: str | Path) -> Path:
    """Materialize the complete demo source directory; returns the config path."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    write_level_sources(root)
    write_fact_sources(root)
    write_link_sources(root)
    tbox = serialize_tbox(demo_schema(), prefixes=PREFIXES)
    (root / "tbox.ttl").write_text(serialize_turtle(tbox), encoding="utf-8")
    (root / "mappings.ttl").write_text(serialize_turtle(build_mapping_graph()),
                                       encoding="utf-8")
    config_path = root / "config.json"
    config_path.write_text(json.dumps(build_config(root), indent=2), encoding="utf-8")
    return config_path


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(description="write the bundled demo dataset")
    parser.add_argument("outdir", help="directory to create")
    args = parser.parse_args(argv)
    config = write_demo_sources(args.outdir)
    print(config)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
