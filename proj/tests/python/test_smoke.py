"""Smoke tests for the python module: ingest, queries, algorithms, bench."""

import json
import math

import pytest

import tsgraph

SCHEMA = json.dumps(
    {
        "graph_id": "pysmoke",
        "edge_types": {"follows": [{"col": "weight", "type": "double"}]},
        "vertex_attrs": [{"name": "age", "type": "int"}],
    }
)

EDGES = [
    (1, 2, "follows", 1_000, [1.5]),
    (1, 3, "follows", 2_000, [0.5]),
    (2, 3, "follows", 3_000, [1.0]),
    (3, 4, "follows", 4_000, [2.0]),
]

UPDATES = [
    (1, "age", 500, 16),
    (1, "age", 1_500, 17),
    (2, "age", 500, 30),
]


@pytest.fixture()
def graph(tmp_path):
    root = str(tmp_path / "store")
    report = tsgraph.ingest(root, SCHEMA, EDGES, UPDATES, n=2,
                            vertex_partitions=2)
    assert report["edges"] == len(EDGES)
    assert report["vertices"] == 4
    return tsgraph.Graph(root, "pysmoke")


def test_edges_roundtrip(graph):
    edges = graph.edges()
    assert len(edges) == len(EDGES)
    assert sorted(edges) == sorted(
        [(s, d, t, ts, a) for (s, d, t, ts, a) in EDGES]
    )


def test_snapshot_filters_edges(graph):
    early = graph.edges(at=2_500)
    assert {(e[0], e[1]) for e in early} == {(1, 2), (1, 3)}


def test_khop_and_frontier(graph):
    assert graph.khop([1], 1) == [1, 2, 3]
    assert graph.khop([1], 2) == [1, 2, 3, 4]
    assert graph.frontier([1], 1) == [2, 3]
    assert graph.frontier([2], 1, direction="in") == [1]


def test_attribute_time_travel(graph):
    assert graph.attribute_at(1, "age", at=400) is None
    assert graph.attribute_at(1, "age", at=1_000) == 16
    assert graph.attribute_at(1, "age", at=9_999) == 17
    with pytest.raises(KeyError):
        graph.attribute_at(1, "not_declared", at=1_000)


def test_pagerank_sums_to_one(graph):
    ranks = graph.pagerank()
    assert ranks.keys() == {1, 2, 3, 4}
    assert math.isclose(sum(ranks.values()), 1.0, abs_tol=1e-9)


def test_sssp_weights(graph):
    dists = graph.sssp(1, weight_attr="weight")
    assert dists[1] == 0.0
    assert dists[2] == 1.5
    assert dists[3] == 0.5
    assert dists[4] == 2.5


def test_neighbors_filtered(graph):
    counts = graph.neighbors_filtered([1, 2], "age>16", at=10_000)
    assert counts == {1: 2, 2: 2}


def test_routes_and_stats(graph):
    routes = graph.resolve_routes([1, 999])
    assert routes[999] == []
    assert all(flag in ("SRC", "DST", "BOTH") for flag, _ in routes[1])
    stats = graph.stats()
    assert stats["vertices"] == 4
    assert stats["edge_partitions"] == 4


def test_ingest_refuses_existing_graph(graph, tmp_path):
    with pytest.raises(ValueError):
        tsgraph.ingest(str(tmp_path / "store"), SCHEMA, EDGES, UPDATES)


def test_bench_rows():
    ts = list(range(1_700_000_000_000, 1_700_000_050_000, 7))
    rows = tsgraph.bench(ts, "ts", ["none", "delta_ts"])
    assert [r["codec"] for r in rows] == ["none", "delta_ts"]
    assert rows[1]["ratio"] < rows[0]["ratio"]


def test_hour_bucket():
    assert tsgraph.hour_bucket(3_600_000) == 1
