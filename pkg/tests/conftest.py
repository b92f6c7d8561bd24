import random

import networkx as nx
import pytest

from perfres.graph import RootedGraph

# filled by test_acceptance; printed at the end of every run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")


def nx_components_without(g: RootedGraph, removed):
    h = g.to_nx()
    h.remove_nodes_from(removed)
    return [set(c) for c in nx.connected_components(h)]


def graph_from(links, t=0):
    return RootedGraph.build(links, t)


@pytest.fixture
def rng():
    return random.Random(12345)
