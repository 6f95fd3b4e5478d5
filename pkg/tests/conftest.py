import pytest

from cubekg.etl import PipelineConfig, run_pipeline
from cubekg.fixtures import write_demo_sources
from cubekg.schema import load_tbox

from oracle import Oracle, build_oracle_fixture


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo")
    write_demo_sources(root)
    return root


@pytest.fixture(scope="session")
def demo_run(demo_dir):
    config = PipelineConfig.from_file(demo_dir / "config.json")
    graph, report = run_pipeline(config)
    return graph, report, config


@pytest.fixture(scope="session")
def demo_graph(demo_run):
    return demo_run[0]


@pytest.fixture(scope="session")
def demo_report(demo_run):
    return demo_run[1]


@pytest.fixture(scope="session")
def demo_schema(demo_graph):
    return load_tbox(demo_graph)


@pytest.fixture(scope="session")
def cube(tmp_path_factory):
    """Synthetic ~2000-observation cube plus its brute-force oracle."""
    root = tmp_path_factory.mktemp("oracle")
    graph, schema, data = build_oracle_fixture(root)
    return graph, schema, Oracle(data), data
