"""Skipping forwarding patterns, routing, and right-hand rule families.

A priority list at node v is a tuple of neighbor ids, each standing for the
link towards that neighbor. In-ports are neighbor ids as well, with None
standing for the start of a routing (written as "-" in pattern files).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import InvalidPriorityChoice, ModelViolation, NotIncident, ParseError, UnknownNode
from .graph import RootedGraph, link, other, reachable

REACHED, LOOP, STUCK = "REACHED", "LOOP", "STUCK"


@dataclass(frozen=True)
class SkippingPattern:
    lists: dict  # node -> {inport (neighbor id or None): tuple of neighbor ids}

    def __getitem__(self, v):
        return self.lists[v]

    def nodes(self):
        return self.lists.keys()

    def total_length(self) -> int:
        return sum(len(lst) for table in self.lists.values() for lst in table.values())

    def replace(self, v, table) -> "SkippingPattern":
        lists = dict(self.lists)
        lists[v] = table
        return SkippingPattern(lists)

    def restricted(self, nodes: Iterable) -> "SkippingPattern":
        nodes = set(nodes)
        return SkippingPattern({v: t for v, t in self.lists.items() if v in nodes})


def check_pattern(g: RootedGraph, p: SkippingPattern) -> None:
    """Raise ModelViolation unless p has a permutation of E_v for every in-port of every v != t."""
    expected = set(g.nodes) - {g.target}
    if set(p.lists) != expected:
        missing = sorted(expected - set(p.lists))
        extra = sorted(set(p.lists) - expected)
        raise ModelViolation(f"pattern nodes differ from graph (missing {missing}, extra {extra})")
    for v, table in p.lists.items():
        ports = set(g.neighbors(v)) | {None}
        if set(table) != ports:
            raise ModelViolation(f"node {v}: in-ports {sorted(table, key=str)} do not match its links")
        want = sorted(g.neighbors(v))
        for f, lst in table.items():
            if sorted(lst) != want:
                raise ModelViolation(f"node {v}, in-port {f}: {lst} is not a permutation of its links")


# ---------------------------------------------------------------- routing

@dataclass(frozen=True)
class Routing:
    trace: tuple
    verdict: str

    @property
    def steps(self) -> int:
        return len(self.trace) - 1

    @property
    def reached(self) -> bool:
        return self.verdict == REACHED

    def __str__(self):
        return " ".join(map(str, self.trace)) + " | " + self.verdict


def first_alive(v, lst, failed) -> int | None:
    for u in lst:
        if link(v, u) not in failed:
            return u
    return None


def route(g: RootedGraph, p: SkippingPattern, s: int, failed: Iterable = ()) -> Routing:
    if s not in g.nodes:
        raise UnknownNode(f"source {s} is not a node")
    failed = frozenset(link(*e) for e in failed)
    t = g.target
    trace = [s]
    seen = set()
    prev, v = None, s
    bound = 2 * g.m + g.n + 2
    while v != t:
        state = (prev, v)
        if state in seen:
            return Routing(tuple(trace), LOOP)
        seen.add(state)
        nxt = first_alive(v, p.lists[v][prev], failed)
        if nxt is None:
            return Routing(tuple(trace), STUCK)
        trace.append(nxt)
        prev, v = v, nxt
        assert len(trace) <= bound, "routing exceeded the state bound"
    return Routing(tuple(trace), REACHED)


# ---------------------------------------------------------------- right-hand families

def _port(v, inport):
    """Accept an in-port given as a link tuple or as the neighbor id."""
    if isinstance(inport, tuple):
        return other(inport, v)
    return inport


def right_hand_list(rot, v, inport) -> list:
    u = _port(v, inport)
    if u not in rot.rotation.get(v, ()):
        raise NotIncident(f"{u} is not a neighbor of {v}")
    return rot.ccw_from(v, u)


def updated_right_hand(g: RootedGraph, rot, v, e_v) -> dict:
    """Right-hand lists of v with the t-link moved to the front, plus the bottom alias."""
    e_v = _port(v, e_v)
    if e_v not in g.neighbors(v):
        raise NotIncident(f"e_v={e_v} is not a neighbor of {v}")
    t = g.target
    table = {}
    for u in g.neighbors(v):
        lst = right_hand_list(rot, v, u)
        if t in lst:
            lst.remove(t)
            lst.insert(0, t)
        table[u] = tuple(lst)
    table[None] = table[e_v]
    return table


def updated_right_hand_pattern(g: RootedGraph, rot, e_map: dict) -> SkippingPattern:
    lists = {}
    for v in g.nodes:
        if v == g.target:
            continue
        if g.degree(v) == 0:
            lists[v] = {None: ()}
            continue
        lists[v] = updated_right_hand(g, rot, v, e_map[v])
    return SkippingPattern(lists)


def hier_right_hand(h, e_map: dict, priority: dict, unrestricted=frozenset()) -> SkippingPattern:
    """Lists t-prefix + priority part + counterclockwise regular part over arcs of h.

    priority maps (v, in-port neighbor) to the ordered neighbors forming the
    priority part. A member w is accepted only if the in-port link lies in
    S_{v,w}, unless {v,w} is listed in `unrestricted`.
    """
    g = h.graph
    t = g.target
    lists = {}
    for v in g.nodes:
        if v == t:
            continue
        table = {}
        for y in g.neighbors(v):
            table[y] = tuple(hier_list(h, v, y, priority.get((v, y), ()), unrestricted))
        table[None] = table[_port(v, e_map[v])] if g.degree(v) else ()
        lists[v] = table
    return SkippingPattern(lists)


def hier_list(h, v, y, prio, unrestricted=frozenset()) -> list:
    g = h.graph
    f = link(v, y)
    for w in prio:
        e = link(v, w)
        if e not in unrestricted and f not in h.enclosure.get(e, ()):
            raise InvalidPriorityChoice(f"{e} does not enclose in-port {f} at {v}")
        if w == g.target:
            raise InvalidPriorityChoice("the t-link cannot be in the priority part")
    skip = set(prio)
    arcs = h.arcs[v]
    i = arcs.index((y, v))
    prefix, regular = [], []
    for a, b in arcs[i + 1:] + arcs[:i + 1]:
        if a != v:
            continue
        if b == g.target:
            prefix.append(b)
        elif b not in skip:
            regular.append(b)
    return prefix + list(prio) + regular


def is_hier_list(h, v, y, lst) -> bool:
    """Whether lst decomposes as t-prefix + valid priority part + regular part."""
    g = h.graph
    if sorted(lst) != sorted(g.neighbors(v)):
        return False
    lst = list(lst)
    k = 1 if g.target in lst else 0
    if k and lst[0] != g.target:
        return False
    for cut in range(k, len(lst) + 1):
        try:
            if hier_list(h, v, y, tuple(lst[k:cut])) == lst:
                return True
        except InvalidPriorityChoice:
            return False
    return False


# ---------------------------------------------------------------- orbits

def relevant_neighbors(g: RootedGraph, v, failed_v: Iterable) -> set:
    """Active neighbors of v with a path to t avoiding v and every other active neighbor."""
    dead = {_port(v, e) for e in failed_v}
    active = [u for u in g.neighbors(v) if u not in dead]
    out = set()
    for u in active:
        if u == g.target:
            out.add(u)
            continue
        blocked = {v} | (set(active) - {u})
        if g.target in reachable(g, u, blocked=blocked):
            out.add(u)
    return out


def orbit(p_v: dict, dead: Iterable, u) -> list:
    """Bounce sequence w1=u, w_{i+1} = first live entry of p_v(w_i), up to the first repeat.

    `dead` holds the failed neighbors of v.
    """
    dead = set(dead)
    seq = [u]
    seen = {u}
    w = u
    while True:
        w = next((x for x in p_v[w] if x not in dead), None)
        if w is None:
            return seq
        seq.append(w)
        if w in seen:
            return seq
        seen.add(w)


def orbit_violations(g: RootedGraph, p: SkippingPattern, limit: int | None = None) -> list:
    """All (v, dead neighbors, u) where the orbit of a relevant u misses another relevant neighbor."""
    bad = []
    for v in sorted(p.lists):
        ns = g.neighbors(v)
        for k in range(len(ns) + 1):
            for dead in combinations(ns, k):
                rel = relevant_neighbors(g, v, [link(v, x) for x in dead])
                if len(rel) < 2:
                    continue
                # a live t-link ends every orbit that reaches it
                need = {g.target} if g.target in rel else rel
                for u in rel - {g.target}:
                    if not need <= set(orbit(p.lists[v], dead, u)):
                        bad.append((v, dead, u))
                        if limit and len(bad) >= limit:
                            return bad
    return bad


# ---------------------------------------------------------------- file format

def format_pattern(p: SkippingPattern) -> str:
    out = []
    for v in sorted(p.lists):
        out.append(f"node {v}")
        table = p.lists[v]
        if None in table:
            out.append("in - : " + ",".join(map(str, table[None])))
        for u in sorted(k for k in table if k is not None):
            out.append(f"in {u} : " + ",".join(map(str, table[u])))
    return "\n".join(out) + "\n"


def parse_pattern(text: str) -> SkippingPattern:
    lists = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("node"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'node <v>'", lineno)
            current = int(parts[1])
            if current in lists:
                raise ParseError(f"node {current} listed twice", lineno)
            lists[current] = {}
        elif line.startswith("in"):
            if current is None:
                raise ParseError("'in' line before any 'node' line", lineno)
            head, sep, tail = line.partition(":")
            parts = head.split()
            if not sep or len(parts) != 2:
                raise ParseError("expected 'in <u|-> : w1,w2,...'", lineno)
            if parts[1] == "-":
                port = None
            elif parts[1].isdigit():
                port = int(parts[1])
            else:
                raise ParseError(f"bad in-port {parts[1]!r}", lineno)
            tail = tail.strip()
            try:
                lst = tuple(int(x) for x in tail.split(",")) if tail else ()
            except ValueError:
                raise ParseError(f"bad priority list {tail!r}", lineno) from None
            if port in lists[current]:
                raise ParseError(f"in-port {parts[1]} repeated for node {current}", lineno)
            lists[current][port] = lst
        else:
            raise ParseError(f"unknown directive in {line!r}", lineno)
    return SkippingPattern(lists)
