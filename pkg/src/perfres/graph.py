"""Rooted graphs, file parsing, connectivity and separating links."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .errors import CycleDetected, ModelViolation, NotConnected, ParseError, PreconditionViolated

Link = tuple  # (u, v) with u < v


def link(u: int, v: int) -> Link:
    return (u, v) if u < v else (v, u)


def other(e: Link, v: int) -> int:
    if e[0] == v:
        return e[1]
    if e[1] == v:
        return e[0]
    raise ValueError(f"{v} is not an endpoint of {e}")


def fmt_link(e: Link) -> str:
    return f"{e[0]}-{e[1]}"


@dataclass(frozen=True)
class RootedGraph:
    nodes: frozenset
    links: frozenset
    target: int
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.target not in self.nodes:
            raise ModelViolation(f"target {self.target} is not a node")
        adj = {v: [] for v in self.nodes}
        for u, v in self.links:
            if u == v:
                raise ModelViolation(f"self-loop at {u}")
            if u > v:
                raise ModelViolation(f"link ({u}, {v}) is not normalized")
            if u not in adj or v not in adj:
                raise ModelViolation(f"link {u}-{v} has an endpoint outside the node set")
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()})

    @classmethod
    def build(cls, links: Iterable, target: int, nodes: Iterable = ()) -> "RootedGraph":
        """Build from raw pairs; duplicates and self-loops are model violations."""
        seen = set()
        for u, v in links:
            if u == v:
                raise ModelViolation(f"self-loop at {u}")
            e = link(u, v)
            if e in seen:
                raise ModelViolation(f"duplicate link {fmt_link(e)}")
            seen.add(e)
        ns = set(nodes) | {target}
        for u, v in seen:
            ns.add(u)
            ns.add(v)
        return cls(frozenset(ns), frozenset(seen), target)

    @property
    def t(self) -> int:
        return self.target

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.links)

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def incident(self, v: int) -> list:
        return [link(v, u) for u in self._adj[v]]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_link(self, u: int, v: int) -> bool:
        return link(u, v) in self.links

    def access_nodes(self) -> tuple:
        return self._adj[self.target]

    def sorted_links(self) -> list:
        return sorted(self.links)

    def without_links(self, removed: Iterable) -> "RootedGraph":
        removed = {link(*e) for e in removed}
        return RootedGraph(self.nodes, self.links - removed, self.target)

    def with_links(self, added: Iterable) -> "RootedGraph":
        return RootedGraph.build(list(self.links) + [tuple(e) for e in added], self.target, self.nodes)

    def plus_link(self, u: int, v: int) -> "RootedGraph":
        """Copy with one more link; skips the full rebuild that with_links does."""
        e = link(u, v)
        if u == v or u not in self.nodes or v not in self.nodes:
            raise ModelViolation(f"cannot add link {u}-{v}")
        if e in self.links:
            raise ModelViolation(f"duplicate link {u}-{v}")
        new = object.__new__(RootedGraph)
        object.__setattr__(new, "nodes", self.nodes)
        object.__setattr__(new, "links", self.links | {e})
        object.__setattr__(new, "target", self.target)
        adj = dict(self._adj)
        adj[u] = tuple(sorted(adj[u] + (v,)))
        adj[v] = tuple(sorted(adj[v] + (u,)))
        object.__setattr__(new, "_adj", adj)
        return new

    def without_nodes(self, removed: Iterable) -> "RootedGraph":
        removed = set(removed)
        if self.target in removed:
            raise ModelViolation("cannot remove the target")
        links = frozenset(e for e in self.links if e[0] not in removed and e[1] not in removed)
        return RootedGraph(self.nodes - removed, links, self.target)

    def induced(self, keep: Iterable, target: int | None = None) -> "RootedGraph":
        keep = frozenset(keep)
        links = frozenset(e for e in self.links if e[0] in keep and e[1] in keep)
        return RootedGraph(keep, links, self.target if target is None else target)

    def with_target(self, t: int) -> "RootedGraph":
        return RootedGraph(self.nodes, self.links, t)

    def relabel(self, mapping: dict) -> "RootedGraph":
        return RootedGraph.build([(mapping[u], mapping[v]) for u, v in self.links],
                                 mapping[self.target], [mapping[v] for v in self.nodes])

    def to_nx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.nodes)
        h.add_edges_from(self.links)
        return h


def reachable(g: RootedGraph, start: int, blocked=frozenset(), dead_links=frozenset()) -> set:
    """Nodes reachable from start without entering blocked nodes or using dead links."""
    if start in blocked:
        return set()
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y in seen or y in blocked:
                continue
            if dead_links and link(x, y) in dead_links:
                continue
            seen.add(y)
            queue.append(y)
    return seen


def is_connected(g: RootedGraph) -> bool:
    if not g.nodes:
        return True
    return len(reachable(g, g.target)) == g.n


def bfs_distances(g: RootedGraph, source: int) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


# ---------------------------------------------------------------- file formats

def _parse_int(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a node id, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"node ids must be non-negative, got {value}", lineno)
    return value


def _directives(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_rooted_graph(text: str) -> RootedGraph:
    target = None
    links = []
    seen = set()
    for lineno, parts in _directives(text):
        kind = parts[0]
        if kind == "t":
            if len(parts) != 2:
                raise ParseError("expected 't <id>'", lineno)
            if target is not None:
                raise ParseError("target given more than once", lineno)
            target = _parse_int(parts[1], lineno)
        elif kind == "e":
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            u, v = _parse_int(parts[1], lineno), _parse_int(parts[2], lineno)
            if u == v:
                raise ModelViolation(f"line {lineno}: self-loop at {u}")
            e = link(u, v)
            if e in seen:
                raise ModelViolation(f"line {lineno}: duplicate link {fmt_link(e)}")
            seen.add(e)
            links.append(e)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    if target is None:
        raise ModelViolation("missing target line 't <id>'")
    return RootedGraph.build(links, target)


def format_rooted_graph(g: RootedGraph) -> str:
    lines = [f"t {g.target}"]
    lines += [f"e {u} {v}" for u, v in g.sorted_links()]
    return "\n".join(lines) + "\n"


def parse_failure_set(text: str, g: RootedGraph | None = None) -> frozenset:
    failed = set()
    for lineno, parts in _directives(text):
        if parts[0] != "f" or len(parts) != 3:
            raise ParseError("expected 'f <u> <v>'", lineno)
        e = link(_parse_int(parts[1], lineno), _parse_int(parts[2], lineno))
        if g is not None and e not in g.links:
            raise ModelViolation(f"line {lineno}: failed link {fmt_link(e)} is not in the graph")
        failed.add(e)
    return frozenset(failed)


def format_failure_set(failed: Iterable) -> str:
    return "".join(f"f {u} {v}\n" for u, v in sorted(link(*e) for e in failed))


# ---------------------------------------------------------------- components

def component_of_target(g: RootedGraph):
    """Return (subgraph induced on t's component, nodes outside it)."""
    inside = reachable(g, g.target)
    return g.induced(inside), frozenset(g.nodes - inside)


@dataclass(frozen=True)
class BiconnectedDecomposition:
    components: list  # [(RootedGraph, local target)]
    cut_nodes: frozenset
    distance_to_t: dict

    def component_of_link(self, e: Link) -> int:
        for i, (c, _) in enumerate(self.components):
            if e in c.links:
                return i
        raise KeyError(e)


def biconnected_decomposition(g: RootedGraph) -> BiconnectedDecomposition:
    if not is_connected(g):
        raise NotConnected("biconnected decomposition needs a connected graph")
    dist = bfs_distances(g, g.target)
    comps = []
    for edges in nx.biconnected_component_edges(g.to_nx()):
        links = frozenset(link(u, v) for u, v in edges)
        nodes = frozenset(x for e in links for x in e)
        local = min(nodes, key=lambda x: (dist[x], x))
        comps.append((RootedGraph(nodes, links, local), local))
    comps.sort(key=lambda c: (dist[c[1]], min(c[0].nodes)))
    cuts = frozenset(nx.articulation_points(g.to_nx()))
    return BiconnectedDecomposition(comps, cuts, dist)


# ---------------------------------------------------------------- separating links

@dataclass(frozen=True)
class SeparatorReport:
    sep_t: frozenset
    sep_other: frozenset
    separated_by: dict  # link -> frozenset of links (S_e)

    @property
    def all(self) -> frozenset:
        return self.sep_t | self.sep_other

    def s(self, e: Link) -> frozenset:
        return self.separated_by.get(e, frozenset())


def _separated_links(g: RootedGraph, e: Link):
    """Links cut off from t when both endpoints of e are removed, or None if e does not separate."""
    u, v = e
    rest = g.n - 2
    if rest <= 0:
        return None
    start = g.target if g.target not in e else next((x for x in g.nodes if x not in e), None)
    comp = reachable(g, start, blocked={u, v})
    if len(comp) == rest:
        return None
    if g.target in e:
        return frozenset()
    return frozenset(f for f in g.links if f != e and (f[0] not in comp and f[0] not in e
                                                      or f[1] not in comp and f[1] not in e))


def separating_links(g: RootedGraph, candidates: Iterable | None = None) -> SeparatorReport:
    """Test every link (or only the given candidates) by removing both endpoints."""
    if not is_connected(g):
        raise NotConnected("separating links need a connected graph")
    sep_t, sep_other, sep = set(), set(), {}
    pool = g.links if candidates is None else {link(*e) for e in candidates} & g.links
    for e in sorted(pool):
        cut = _separated_links(g, e)
        if cut is None:
            continue
        if g.target in e:
            sep_t.add(e)
        else:
            sep_other.add(e)
            sep[e] = cut
    return SeparatorReport(frozenset(sep_t), frozenset(sep_other), sep)


def separating_order(g: RootedGraph, report: SeparatorReport) -> list:
    """Order S* so that f in S_e puts e before f; ties broken by smallest link."""
    if report.sep_t:
        raise PreconditionViolated("separating links incident to t must be removed first")
    items = sorted(report.sep_other)
    indegree = {e: 0 for e in items}
    succ = {e: [] for e in items}
    for e in items:
        for f in report.s(e):
            if f in indegree:
                succ[e].append(f)
                indegree[f] += 1
    heap = [e for e in items if indegree[e] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        e = heapq.heappop(heap)
        order.append(e)
        for f in succ[e]:
            indegree[f] -= 1
            if indegree[f] == 0:
                heapq.heappush(heap, f)
    if len(order) != len(items):
        raise CycleDetected("the enclosure relation between separating links is cyclic")
    return order
