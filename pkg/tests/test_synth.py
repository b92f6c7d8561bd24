import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from perfres.errors import MissingComponentPattern
from perfres.generate import add_foreign_component, random_biconnected_planar, random_connected_planar
from perfres.graph import RootedGraph, SeparatorReport, biconnected_decomposition, separating_links
from perfres.patterns import check_pattern, orbit_violations, route, updated_right_hand_pattern
from perfres.planar import planarity_embed
from perfres.synth import (NON_PLANAR, UNCLASSIFIABLE, decide, lift_component, lift_cut_nodes,
                           lift_sep_links, lift_sep_links_t, synthesize)
from perfres.verify import Ok, gadget, verify_exhaustive

seeds = st.integers(0, 10**6)


def resilient(g):
    res = synthesize(g)
    assert res.resilient
    check_pattern(g, res.pattern)
    return verify_exhaustive(g, res.pattern)


def test_lonely_target():
    g = RootedGraph.build([], 0, [0])
    res = synthesize(g)
    assert res.decision.yes and res.pattern.lists == {}


def test_single_link():
    g = RootedGraph.build([(0, 1)], 0)
    res = synthesize(g)
    assert res.pattern.lists == {1: {None: (0,), 0: (0,)}}
    assert route(g, res.pattern, 1).trace == (1, 0)


def test_k5_with_target_inside_is_no():
    g = RootedGraph.build(list(combinations(range(5), 2)), 0)
    d = decide(g)
    assert not d.yes and d.reason == NON_PLANAR
    res = synthesize(g)
    assert res.pattern is None and res.decision.describe() == d.describe() == "NO (NonPlanarComponent)"


def test_traps_are_unclassifiable():
    for name in ("k5e", "k33e", "k34_2e", "sk24"):
        d = decide(gadget(name))
        assert d.reason == UNCLASSIFIABLE
        assert d.describe() == f"NO (ReducedInstanceUnclassifiable: block {d.failed_block})"


def test_planar_figure_fills_foreign_nodes():
    g = gadget("fig_planar")
    res = synthesize(g)
    assert res.decision.yes and res.decision.outside == frozenset(range(2, 7))
    for v in range(2, 7):
        ns = tuple(sorted(g.neighbors(v)))
        assert set(res.pattern[v].values()) == {ns}
    assert isinstance(verify_exhaustive(g, res.pattern), Ok)


def test_merge_figure_verifies():
    res = verify_exhaustive(gadget("fig_merge"), synthesize(gadget("fig_merge")).pattern)
    assert isinstance(res, Ok)
    assert res.scenarios > 2 ** 9


def test_two_access_separator_goes_first_after_t():
    # t=0 u=1 v=2 x=3 y=4
    g = RootedGraph.build([(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4)], 0)
    p = synthesize(g).pattern
    assert p[1][3][:2] == (0, 2)
    assert p[2][4][:2] == (0, 1)
    assert isinstance(verify_exhaustive(g, p), Ok)


def test_lift_without_separators_is_right_hand():
    g = random_biconnected_planar(7, random.Random(4), chords=3)
    rep = separating_links(g)
    g = g.without_links(rep.all)
    rot = planarity_embed(g)
    e_map = {v: rot.rotation[v][0] for v in g.nodes if v != 0}
    empty = SeparatorReport(frozenset(), frozenset(), {})
    assert lift_sep_links(g, rot, e_map, empty, []) == updated_right_hand_pattern(g, rot, e_map)


def test_lift_t_links():
    g = RootedGraph.build([(0, 1), (0, 2), (1, 2)], 0)
    p = synthesize(g).pattern
    assert lift_sep_links_t(g, p, []) == p
    # theta: t-1 is separating because 3 hangs between t and 1 on its own path
    theta = RootedGraph.build([(0, 1), (0, 3), (3, 1), (0, 2), (2, 1)], 0)
    rep = separating_links(theta)
    assert rep.sep_t == {(0, 1)}
    pat = synthesize(theta).pattern
    assert all(lst[0] == 0 for lst in pat[1].values())
    assert isinstance(verify_exhaustive(theta, pat), Ok)
    # once t-1 fails the lifted lists act like the ones without it
    inner = synthesize(theta.without_links([(0, 1)])).pattern
    for s in (1, 2, 3):
        assert route(theta, pat, s, [(0, 1)]) == route(theta.without_links([(0, 1)]), inner, s)


def test_lift_cut_nodes():
    g = RootedGraph.build([(0, 1), (1, 2), (0, 2)], 0)
    d = biconnected_decomposition(g)
    p = synthesize(g).pattern
    assert lift_cut_nodes(d, [p]) == p
    with pytest.raises(MissingComponentPattern):
        lift_cut_nodes(d, [])


def test_two_triangles_sharing_a_node():
    # t=0; triangles 0-1-2 and 2-3-4 share c=2
    g = RootedGraph.build([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 2)], 0)
    p = synthesize(g).pattern
    for port in (None, 3, 4):
        assert set(p[2][port][:2]) == {0, 1}
    assert isinstance(verify_exhaustive(g, p), Ok)


def test_block_chain_descends_towards_t():
    # blocks 0-1-2, 2-3-4, 4-5-6 chained at 2 and 4
    g = RootedGraph.build([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5), (5, 6), (4, 6)], 0)
    p = synthesize(g).pattern
    assert isinstance(verify_exhaustive(g, p), Ok)
    d = biconnected_decomposition(g)
    r = route(g, p, 6)
    locals_hit = [x for x in r.trace if x in d.cut_nodes]
    dist = [d.distance_to_t[x] for x in locals_hit]
    assert dist == sorted(dist, reverse=True)


def test_lift_component_is_identity_when_connected():
    g = gadget("fig_merge")
    p = synthesize(g).pattern
    assert lift_component(p, g) == p


def contract_block(g, rng):
    """Contract a block not holding t into its local target, or None."""
    d = biconnected_decomposition(g)
    options = [(b, local) for b, local in d.components if g.target not in b.nodes]
    if not options:
        return None
    block, local = rng.choice(options)
    h = g.to_nx()
    for x in sorted(block.nodes - {local}):
        h = nx.contracted_nodes(h, local, x, self_loops=False)
    return RootedGraph.build([tuple(e) for e in h.edges], g.target, h.nodes)


def mixed_graph(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 9)
    g = random_connected_planar(n, rng, extra=rng.choice([0.1, 0.3, 0.6]))
    return g, rng


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_decision_invariances(seed):
    g, rng = mixed_graph(seed)
    want = decide(g).verdict
    d = biconnected_decomposition(g)
    for block, _ in d.components:
        rep = separating_links(block)
        for e in rep.all:
            assert decide(g.without_links([e])).verdict == want
    assert decide(add_foreign_component(g, rng, 4)).verdict == want
    c = contract_block(g, rng)
    if c is not None:
        assert decide(c).verdict == want


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_synthesis_agrees_with_decision(seed):
    g, _ = mixed_graph(seed)
    d = decide(g)
    res = synthesize(g)
    assert res.resilient == d.yes
    assert res.decision.describe() == d.describe()
    if res.resilient:
        check_pattern(g, res.pattern)
        if g.m <= 14:
            assert isinstance(verify_exhaustive(g, res.pattern), Ok)
            assert orbit_violations(g, res.pattern, limit=1) == []

