"""Exhaustive resilience checking, a brute-force rooted-minor search, and fixture graphs."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, islice
from math import comb

import numpy as np

from .errors import CapExceeded, SizeExceeded, UnknownGadget
from .graph import RootedGraph, fmt_link, link, reachable
from .patterns import Routing, SkippingPattern, check_pattern, route


@dataclass(frozen=True)
class Ok:
    scenarios: int

    def __str__(self):
        return f"OK (checked {self.scenarios} scenarios)"


@dataclass(frozen=True)
class Counterexample:
    source: int
    failures: frozenset
    routing: Routing

    def __str__(self):
        fails = ",".join(fmt_link(e) for e in sorted(self.failures))
        trace = ",".join(map(str, self.routing.trace))
        return f"FAIL s={self.source} F={fails} route={trace} {self.routing.verdict}"


# ---------------------------------------------------------------- vectorised routing tables

class _Tables:
    """Routing state machine over (node, in-port) states as padded numpy arrays."""

    DONE = -1

    def __init__(self, g: RootedGraph, p: SkippingPattern):
        self.links = sorted(g.links)
        index = {e: i for i, e in enumerate(self.links)}
        t = g.target
        states = {}
        for v in sorted(g.nodes):
            if v == t:
                continue
            states[(v, None)] = len(states)
            for u in g.neighbors(v):
                states[(v, u)] = len(states)
        width = max((g.degree(v) for v in g.nodes), default=0) or 1
        self.n_states = len(states)
        self.link_of = np.full((self.n_states, width), -1, dtype=np.int64)
        self.next_of = np.full((self.n_states, width), self.DONE, dtype=np.int64)
        for (v, port), sid in states.items():
            for k, w in enumerate(p.lists[v][port]):
                self.link_of[sid, k] = index[link(v, w)]
                self.next_of[sid, k] = self.DONE if w == t else states[(w, v)]
        self.start = {v: states[(v, None)] for v in g.nodes if v != t}

    def run(self, dead: np.ndarray, lanes_set: np.ndarray, lanes_src: np.ndarray) -> np.ndarray:
        """Return a boolean per lane: True if the routing reaches t.

        `dead` is [sets, m] with True for failed links.
        """
        ok = np.zeros(len(lanes_set), dtype=bool)
        state = np.array([self.start[s] for s in lanes_src.tolist()], dtype=np.int64)
        active = np.arange(len(lanes_set))
        padded = np.concatenate([dead, np.ones((dead.shape[0], 1), dtype=bool)], axis=1)
        for _ in range(self.n_states + 1):
            if active.size == 0:
                break
            st = state[active]
            lk = self.link_of[st]
            alive = ~padded[lanes_set[active][:, None], lk]
            has = alive.any(axis=1)
            k = alive.argmax(axis=1)
            nxt = self.next_of[st, k]
            done = has & (nxt == self.DONE)
            ok[active[done]] = True
            keep = has & ~done
            state[active[keep]] = nxt[keep]
            active = active[keep]
        return ok


def _connected_to_t(g: RootedGraph, links, dead: np.ndarray) -> np.ndarray:
    """[sets, n] reachability from t in G minus each failure set."""
    nodes = sorted(g.nodes)
    col = {v: i for i, v in enumerate(nodes)}
    reach = np.zeros((dead.shape[0], len(nodes)), dtype=bool)
    reach[:, col[g.target]] = True
    ends = [(col[a], col[b], i) for i, (a, b) in enumerate(links)]
    while True:
        before = reach.sum()
        for a, b, i in ends:
            up = ~dead[:, i]
            reach[:, a] |= reach[:, b] & up
            reach[:, b] |= reach[:, a] & up
        if reach.sum() == before:
            return reach


def failure_sets(m: int, size: int):
    """Failure sets of one size as link-index tuples, lexicographic."""
    return combinations(range(m), size)


def verify_exhaustive(g: RootedGraph, p: SkippingPattern, cap: int = 20, chunk: int = 50_000,
                      max_failures: int | None = None):
    """First (F, s) whose routing misses t although s and t stay connected, or Ok.

    Failure sets go by increasing size, then lexicographically; within a set,
    sources go by id. With `max_failures` only sets up to that size are tried
    and the link cap is not applied.
    """
    if max_failures is None and g.m > cap:
        raise CapExceeded(f"{g.m} links exceed the cap of {cap}")
    check_pattern(g, p)
    tables = _Tables(g, p)
    links = tables.links
    nodes = sorted(g.nodes)
    sources = np.array([i for i, v in enumerate(nodes) if v != g.target], dtype=np.int64)
    node_ids = np.array(nodes, dtype=np.int64)
    total = 0
    top = g.m if max_failures is None else min(max_failures, g.m)
    for size in range(top + 1):
        combos = failure_sets(g.m, size)
        left = comb(g.m, size)
        while left:
            block = list(islice(combos, chunk))
            left -= len(block)
            dead = np.zeros((len(block), g.m), dtype=bool)
            if size:
                idx = np.array(block, dtype=np.int64)
                dead[np.repeat(np.arange(len(block)), size), idx.ravel()] = True
            reach = _connected_to_t(g, links, dead)[:, sources]
            lane_set, lane_col = np.nonzero(reach)
            total += lane_set.size
            if lane_set.size == 0:
                continue
            lane_src = node_ids[sources[lane_col]]
            good = tables.run(dead, lane_set, lane_src)
            if not good.all():
                # nonzero scans row-major, so the first bad lane is the smallest (F, s)
                bad = int(np.flatnonzero(~good)[0])
                failed = frozenset(links[i] for i in block[lane_set[bad]])
                s = int(lane_src[bad])
                return Counterexample(s, failed, route(g, p, s, failed))
    return Ok(total)


def verify_scalar(g: RootedGraph, p: SkippingPattern, cap: int = 20):
    """Straight-line version of verify_exhaustive, kept as an independent cross-check."""
    if g.m > cap:
        raise CapExceeded(f"{g.m} links exceed the cap of {cap}")
    check_pattern(g, p)
    links = sorted(g.links)
    total = 0
    for size in range(g.m + 1):
        for combo in combinations(links, size):
            failed = frozenset(combo)
            alive_part = reachable(g, g.target, dead_links=failed)
            for s in sorted(g.nodes):
                if s == g.target or s not in alive_part:
                    continue
                total += 1
                r = route(g, p, s, failed)
                if not r.reached:
                    return Counterexample(s, failed, r)
    return Ok(total)


def verify_sampled(g: RootedGraph, p: SkippingPattern, samples: int, seed: int = 0, max_size=None):
    """Random failure sets for graphs too large to enumerate; all sources per set."""
    check_pattern(g, p)
    rng = random.Random(seed)
    links = sorted(g.links)
    top = len(links) if max_size is None else max_size
    total = 0
    for _ in range(samples):
        failed = frozenset(rng.sample(links, rng.randint(0, top)))
        alive_part = reachable(g, g.target, dead_links=failed)
        for s in sorted(alive_part - {g.target}):
            total += 1
            r = route(g, p, s, failed)
            if not r.reached:
                return Counterexample(s, failed, r)
    return Ok(total)


def revalidate(g: RootedGraph, p: SkippingPattern, cx: Counterexample) -> bool:
    """A counterexample is genuine if s still reaches t in G minus F while the routing does not."""
    connected = cx.source in reachable(g, g.target, dead_links=cx.failures)
    again = route(g, p, cx.source, cx.failures)
    return connected and not again.reached and again == cx.routing


# ---------------------------------------------------------------- rooted minors

@dataclass(frozen=True)
class MinorResult:
    present: bool
    branch_sets: dict | None = None

    def __bool__(self):
        return self.present


def _connected_sets(n: int, nbr: list) -> list:
    """Every connected node set as a bitmask, grown from its lowest node."""
    out = []
    for root in range(n):
        allowed = ~((1 << root) - 1)
        seen = {1 << root}
        stack = [1 << root]
        while stack:
            s = stack.pop()
            out.append(s)
            frontier = 0
            x = s
            while x:
                low = x & -x
                frontier |= nbr[low.bit_length() - 1]
                x ^= low
            frontier &= allowed & ~s
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                t = s | low
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    out.sort(key=lambda s: (bin(s).count("1"), s))
    return out


def rooted_minor_bruteforce(host: RootedGraph, pattern: RootedGraph, max_host_nodes: int = 10,
                            max_pattern_nodes: int = 7) -> MinorResult:
    """Search branch sets for every pattern node, with host t inside pattern t's set."""
    if host.n > max_host_nodes:
        raise SizeExceeded(f"host has {host.n} nodes, limit {max_host_nodes}")
    if pattern.n > max_pattern_nodes:
        raise SizeExceeded(f"pattern has {pattern.n} nodes, limit {max_pattern_nodes}")
    hnodes = sorted(host.nodes)
    hid = {v: i for i, v in enumerate(hnodes)}
    nbr = [0] * len(hnodes)
    for a, b in host.links:
        nbr[hid[a]] |= 1 << hid[b]
        nbr[hid[b]] |= 1 << hid[a]
    sets = _connected_sets(len(hnodes), nbr)
    reach = {}
    for s in sets:
        x, r = s, 0
        while x:
            low = x & -x
            r |= nbr[low.bit_length() - 1]
            x ^= low
        reach[s] = r
    host_t = 1 << hid[host.target]

    # pattern nodes: t first, then breadth-first so each one has an earlier neighbor
    order = [pattern.target]
    for v in order:
        for u in pattern.neighbors(v):
            if u not in order:
                order.append(u)
    order += sorted(set(pattern.nodes) - set(order))
    earlier = [[order.index(u) for u in pattern.neighbors(v) if order.index(u) < i]
               for i, v in enumerate(order)]
    k = len(order)
    full = (1 << len(hnodes)) - 1
    chosen = [0] * k

    def place(i, used):
        if i == k:
            return True
        free = full & ~used
        spare = bin(free).count("1") - (k - i - 1)
        for s in sets:
            size = bin(s).count("1")
            if size > spare:
                break
            if s & used:
                continue
            if i == 0 and not s & host_t:
                continue
            if any(not (reach[chosen[j]] & s) for j in earlier[i]):
                continue
            chosen[i] = s
            if place(i + 1, used | s):
                return True
        return False

    if not place(0, 0):
        return MinorResult(False)
    branch = {}
    for i, v in enumerate(order):
        branch[v] = frozenset(hnodes[b] for b in range(len(hnodes)) if chosen[i] >> b & 1)
    return MinorResult(True, branch)


def is_rooted_minor_witness(host: RootedGraph, pattern: RootedGraph, branch: dict) -> bool:
    """Independent check of a witness: disjoint connected sets, all pattern links realised."""
    used = set()
    for v, s in branch.items():
        if not s or used & s:
            return False
        used |= s
        start = min(s)
        if reachable(host.induced(s, target=start), start) != set(s):
            return False
    if host.target not in branch[pattern.target]:
        return False
    for a, b in pattern.links:
        if not any(host.has_link(x, y) for x in branch[a] for y in branch[b]):
            return False
    return True


# ---------------------------------------------------------------- fixtures

def _k5e():
    # t=0 u=1 v=2 w=3 p=4: K5 without the link t-p
    return RootedGraph.build([(a, b) for a, b in combinations(range(5), 2) if (a, b) != (0, 4)], 0)


def _k33e():
    # t=0 u=1 v=2 p=3 q=4 r=5: K3,3 on {t,p,r} x {u,v,q} without t-q
    return RootedGraph.build([(0, 1), (0, 2), (3, 1), (3, 2), (5, 1), (5, 2), (4, 3), (4, 5)], 0)


def _k34_2e():
    # t=0 u=1 v=2 w=3 x=4 p=5 q=6: K3,4 on {u,v,w} x {t,x,p,q} without w-p and w-q
    return RootedGraph.build([(1, 0), (2, 0), (3, 0), (1, 4), (2, 4), (3, 4), (1, 5), (2, 5),
                              (1, 6), (2, 6)], 0)


def _sk24():
    # t=0 u=1 v=2 x=3 p=4 q=5 r=6: K2,4 on {x,v} x {t,p,q,r}, with t-x subdivided by u
    return RootedGraph.build([(0, 1), (0, 2), (1, 3), (3, 4), (3, 5), (3, 6), (2, 4), (2, 5), (2, 6)], 0)


def _grid4():
    links = []
    for r in range(4):
        for c in range(4):
            v = 4 * r + c
            if c < 3:
                links.append((v, v + 1))
            if r < 3:
                links.append((v, v + 4))
    return RootedGraph.build(links, 0)


def _fig_planar():
    # t=0 linked to w=1, next to a separate K5 on 2..6
    links = [(0, 1)] + list(combinations(range(2, 7), 2))
    return RootedGraph.build(links, 0)


def _fig_merge():
    # t=0 u=1 v=2 w=3 p=4 q=5 r=6 s=7
    return RootedGraph.build([(0, 1), (0, 2), (1, 2), (3, 1), (3, 2), (4, 1), (5, 2), (5, 4),
                              (6, 1), (6, 4), (7, 5), (7, 6), (7, 2)], 0)


def _fig_ring():
    # t=0, ring nodes u1..u5=1..5, segment interiors 6..19
    p, q, r, s, x, y, z, a, b, c, d, e, m1, m2 = range(6, 20)
    links = [(0, u) for u in range(1, 6)]
    links += [(p, 2), (q, 2), (q, p), (r, 1), (r, p), (r, q), (s, 1), (s, p), (s, r)]
    links += [(2, x), (x, y), (y, z), (z, 3)]
    links += [(a, 4), (b, 4), (a, b), (c, a), (c, b), (d, c), (d, 3), (e, c), (e, 3)]
    links += [(4, 5), (1, m1), (m1, 5), (1, m2), (m2, 5)]
    return RootedGraph.build(links, 0)


def _fig_skipping():
    # t=0 u=1 v=2: a triangle
    return RootedGraph.build([(0, 1), (0, 2), (1, 2)], 0)


GADGETS = {
    "k5e": _k5e,
    "k33e": _k33e,
    "k34_2e": _k34_2e,
    "sk24": _sk24,
    "grid4": _grid4,
    "fig_planar": _fig_planar,
    "fig_merge": _fig_merge,
    "fig_ring": _fig_ring,
    "fig_skipping": _fig_skipping,
}

TRAPS = ("k5e", "k33e", "k34_2e", "sk24")

# fixture labels -> node ids, for the figures whose letters matter in tests
LABELS = {
    "k5e": dict(t=0, u=1, v=2, w=3, p=4),
    "k33e": dict(t=0, u=1, v=2, p=3, q=4, r=5),
    "k34_2e": dict(t=0, u=1, v=2, w=3, x=4, p=5, q=6),
    "sk24": dict(t=0, u=1, v=2, x=3, p=4, q=5, r=6),
    "fig_merge": dict(t=0, u=1, v=2, w=3, p=4, q=5, r=6, s=7),
    "fig_skipping": dict(t=0, u=1, v=2),
}


def gadget(name: str) -> RootedGraph:
    try:
        return GADGETS[name]()
    except KeyError:
        raise UnknownGadget(f"unknown gadget {name!r}; choose from {', '.join(GADGETS)}") from None


def _complete(g: RootedGraph, given: dict) -> SkippingPattern:
    """Fill every list not in `given` with ascending neighbor order."""
    lists = {}
    for v in sorted(g.nodes):
        if v == g.target:
            continue
        ns = tuple(sorted(g.neighbors(v)))
        lists[v] = {port: given.get(v, {}).get(port, ns) for port in (None,) + ns}
    return SkippingPattern(lists)


def skipping_pattern_fixture(name: str) -> SkippingPattern:
    """Hand-written patterns: the triangle example table, and looping patterns for two traps."""
    if name == "fig_skipping":
        t, u, v = range(3)
        return SkippingPattern({
            u: {t: (t, v), v: (t, v), None: (t, v)},
            v: {t: (t, u), u: (t, u), None: (u, t)},
        })
    if name == "sk24":
        t, u, v, x, p, q, r = range(7)
        # only the lists on the loop matter for the argument; the others are chosen so
        # that no smaller failure set breaks the pattern first
        return SkippingPattern({
            u: {None: (x, t), t: (x, t), x: (t, x)},
            v: {None: (r, p, t, q), t: (t, p, q, r), p: (t, q, r, p), q: (t, r, p, q), r: (t, p, q, r)},
            x: {None: (u, p, q, r), u: (p, q, r, u), p: (q, r, u, p), q: (r, u, p, q), r: (u, p, q, r)},
            p: {None: (v, x), x: (v, x), v: (x, v)},
            q: {None: (v, x), x: (v, x), v: (x, v)},
            r: {None: (x, v), x: (v, x), v: (x, v)},
        })
    if name == "k34_2e":
        t, u, v, w, x, p, q = range(7)
        return _complete(gadget(name), {
            x: {w: (u, v, w), u: (v, w, u), v: (w, u, v)},
            u: {x: (t, p, q, x), p: (t, q, x, p), q: (t, x, p, q)},
            v: {x: (t, p, q, x)},
            p: {v: (u, v)},
            q: {None: (v, u), u: (v, u)},
        })
    raise UnknownGadget(f"no hand-written pattern for {name!r}")


def random_pattern(g: RootedGraph, rng: random.Random) -> SkippingPattern:
    lists = {}
    for v in sorted(g.nodes):
        if v == g.target:
            continue
        ns = list(sorted(g.neighbors(v)))
        table = {}
        for port in [None] + sorted(g.neighbors(v)):
            rng.shuffle(ns)
            table[port] = tuple(ns)
        lists[v] = table
    return SkippingPattern(lists)
