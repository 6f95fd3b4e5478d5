"""cubekg: tabular open data -> QB4OLAP knowledge graph -> OLAP queries."""

__version__ = "0.1.0"
