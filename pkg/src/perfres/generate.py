"""Random rooted graphs for tests and benchmarks.

All generators take a `random.Random` so runs are reproducible.
"""
from __future__ import annotations

import random

import networkx as nx

from .graph import RootedGraph, link


def _planar_with(links: set, e) -> bool:
    h = nx.Graph(list(links) + [e])
    return nx.check_planarity(h)[0]


def random_connected_planar(n: int, rng: random.Random, extra: float = 0.5, target: int = 0) -> RootedGraph:
    """Random spanning tree plus random links that keep the graph planar."""
    links = set()
    for v in range(1, n):
        links.add(link(v, rng.randrange(v)))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in links]
    rng.shuffle(pairs)
    budget = int(extra * len(pairs))
    for e in pairs[:budget]:
        if _planar_with(links, e):
            links.add(e)
    return RootedGraph.build(links, target, range(n))


def random_biconnected_planar(n: int, rng: random.Random, chords: int | None = None, target: int = 0) -> RootedGraph:
    """Hamiltonian cycle on a shuffled order plus planar chords."""
    order = list(range(n))
    rng.shuffle(order)
    links = {link(order[i], order[(i + 1) % n]) for i in range(n)}
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in links]
    rng.shuffle(pairs)
    want = rng.randint(0, 2 * n) if chords is None else chords
    for e in pairs:
        if want <= 0:
            break
        if _planar_with(links, e):
            links.add(e)
            want -= 1
    return RootedGraph.build(links, target, range(n))


def polygon(nodes: list, rng: random.Random, chord_prob: float = 0.5) -> set:
    """Cycle through `nodes` in the given order with random non-crossing chords."""
    k = len(nodes)
    links = {link(nodes[i], nodes[(i + 1) % k]) for i in range(k)} if k > 2 else set()
    if k == 2:
        links.add(link(*nodes))

    def fill(lo, hi):
        # chords inside the polygon piece nodes[lo..hi], whose side lo-hi already exists
        if hi - lo < 2:
            return
        if rng.random() < chord_prob:
            mid = rng.randint(lo + 1, hi - 1)
            if mid - lo > 1:
                links.add(link(nodes[lo], nodes[mid]))
            if hi - mid > 1:
                links.add(link(nodes[mid], nodes[hi]))
            fill(lo, mid)
            fill(mid, hi)

    if k > 3:
        fill(0, k - 1)
    return links


class _Ids:
    def __init__(self, start: int):
        self.next = start

    def take(self, k: int) -> list:
        out = list(range(self.next, self.next + k))
        self.next += k
        return out


def outerplanar_minus_t(size: int, rng: random.Random, access: int | None = None) -> RootedGraph:
    """Outerplanar polygon on 1..size plus t=0 linked to some polygon nodes."""
    nodes = list(range(1, size + 1))
    links = polygon(nodes, rng)
    k = access if access is not None else rng.randint(2, min(size, 4))
    for v in rng.sample(nodes, k):
        links.add((0, v))
    return RootedGraph.build(links, 0)


def dipole(parts: list, rng: random.Random, uv: bool = False) -> RootedGraph:
    """t=0 linked to u=1 and v=2; each part is an outerplanar piece with u and v on its rim.

    `parts` lists the number of interior nodes per piece.
    """
    ids = _Ids(3)
    links = {(0, 1), (0, 2)}
    for k in parts:
        inner = ids.take(k)
        cut = rng.randint(0, k)
        rim = [1] + inner[:cut] + [2] + inner[cut:]
        piece = polygon(rim, rng)
        piece.discard((1, 2))
        links |= piece
    if uv:
        links.add((1, 2))
    return RootedGraph.build(links, 0)


def ring(segments: list, rng: random.Random) -> RootedGraph:
    """t=0 linked to ring nodes 1..k; segment i joins ring nodes i and i+1.

    `segments` lists the number of interior nodes per segment (0 means a single link).
    """
    k = len(segments)
    ids = _Ids(k + 1)
    links = {(0, i) for i in range(1, k + 1)}
    for i, size in enumerate(segments):
        a, b = i + 1, (i + 1) % k + 1
        inner = ids.take(size)
        if size == 0:
            links.add(link(a, b))
            continue
        cut = rng.randint(0, size)
        rim = [a] + inner[:cut] + [b] + inner[cut:]
        piece = polygon(rim, rng)
        if cut not in (0, size):
            # keep a and b off each other's rim neighborhood so the segment is not a single link
            piece.discard(link(a, b))
        links |= piece
    return RootedGraph.build(links, 0)


# ---------------------------------------------------------------- decorations

def _fresh(g: RootedGraph) -> _Ids:
    return _Ids(max(g.nodes) + 1)


def add_cut_block(g: RootedGraph, rng: random.Random, size: int = 3) -> RootedGraph:
    """Hang a cycle with a chord or two off a random node other than t."""
    anchor = rng.choice(sorted(g.nodes - {g.target}))
    inner = _fresh(g).take(size - 1)
    return g.with_links(polygon([anchor] + inner, rng))


def add_t_separator(g: RootedGraph, rng: random.Random, length: int = 1) -> RootedGraph:
    """A path t - new nodes - x next to an existing link t-x, which makes t-x separating."""
    access = sorted(g.access_nodes())
    x = rng.choice(access)
    path = [x] + _fresh(g).take(length) + [g.target]
    return g.with_links(link(a, b) for a, b in zip(path, path[1:]))


def add_nested_separators(g: RootedGraph, rng: random.Random, depth: int = 2) -> RootedGraph:
    """Put a detour next to a link away from t, then another next to one of the detour's links."""
    t = g.target
    candidates = sorted(e for e in g.links if t not in e)
    if not candidates:
        return g
    a, b = rng.choice(candidates)
    ids = _fresh(g)
    new = []
    for _ in range(depth):
        c = ids.take(1)[0]
        new += [link(a, c), link(c, b)]
        a, b = rng.choice([(a, c), (c, b)])
    return g.with_links(new)


def add_foreign_component(g: RootedGraph, rng: random.Random, size: int = 3) -> RootedGraph:
    nodes = _fresh(g).take(size)
    return g.with_links(polygon(nodes, rng))


def decorate(g: RootedGraph, rng: random.Random, cut=True, t_sep=True, nested=True, foreign=True) -> RootedGraph:
    if cut:
        g = add_cut_block(g, rng)
    if t_sep:
        g = add_t_separator(g, rng)
    if nested:
        g = add_nested_separators(g, rng)
    if foreign:
        g = add_foreign_component(g, rng)
    return g


def yes_battery(count: int, seed: int = 0, max_links: int = 18) -> list:
    """Decorated instances of the three classes, each with at most `max_links` links.

    Returns (label, graph) pairs.
    """
    rng = random.Random(seed)
    out = []
    makers = [
        ("outerplanar", lambda: outerplanar_minus_t(rng.randint(3, 5), rng)),
        ("dipole", lambda: dipole([rng.randint(1, 2) for _ in range(rng.randint(2, 3))], rng,
                                  uv=rng.random() < 0.3)),
        ("ring", lambda: ring([rng.choice([0, 0, 1, 2]) for _ in range(rng.randint(3, 4))], rng)),
    ]
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("could not build enough small instances")
        label, make = makers[len(out) % 3]
        base = make()
        g = decorate(base, rng)
        if g.m <= max_links:
            out.append((label, g))
    return out
