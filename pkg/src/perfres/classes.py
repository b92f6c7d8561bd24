"""Recognition and embedding synthesis for the three classes of resilient nice graphs.

Every synthesizer returns a rotation system of the whole graph together with
the in-port e_v whose list doubles as the start list of v. The updated
right-hand rule over that embedding is the forwarding pattern.

Walks below are "right-hand walks": arriving at x from a, the walk leaves
towards the counterclockwise successor of a at x, which is exactly what the
right-hand rule does when nothing fails.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import NotNice, WrongClass
from .graph import RootedGraph, reachable, separating_links
from .planar import RotationSystem, default_outer, outerplanar_embed

OUTERPLANAR = "OuterplanarMinusT"
DIPOLE = "DipoleOuterplanar"
RING = "RingOfOuterplanar"
NONE = "NoneOfThree"


@dataclass(frozen=True)
class ClassVerdict:
    kind: str
    witness: dict = field(default_factory=dict)

    @property
    def classified(self) -> bool:
        return self.kind != NONE


def is_nice(g: RootedGraph) -> bool:
    if g.n <= 2:
        return g.n == 1 or g.m == 1
    h = g.to_nx()
    if not nx.is_biconnected(h) or not nx.check_planarity(h)[0]:
        return False
    return not separating_links(g).all


def _components(g: RootedGraph, removed) -> list:
    """Node sets of the components of g minus `removed`, ordered by smallest node id."""
    removed = set(removed)
    left = set(g.nodes) - removed
    comps = []
    while left:
        start = min(left)
        comp = reachable(g, start, blocked=removed)
        comps.append(frozenset(comp))
        left -= comp
    return sorted(comps, key=min)


def classify_nice(g: RootedGraph, check: bool = True) -> ClassVerdict:
    if check and not is_nice(g):
        raise NotNice("classification expects a planar, biconnected graph without separating links")
    t = g.target
    if g.n == 1:
        return ClassVerdict(OUTERPLANAR, {"embedding": RotationSystem({}, None)})
    others = g.nodes - {t}
    rest = g.induced(others, target=min(others))
    if rest.m == 0:
        emb = RotationSystem({v: () for v in rest.nodes}, None)
    elif reachable(rest, min(rest.nodes)) == set(rest.nodes):
        emb = outerplanar_embed(rest)
    else:
        emb = None
    if emb is not None:
        return ClassVerdict(OUTERPLANAR, {"embedding": emb})
    access = sorted(g.access_nodes())
    if len(access) == 2:
        verdict = as_dipole(g, *access)
    else:
        verdict = as_ring(g, access)
    return verdict if verdict is not None else ClassVerdict(NONE)


def as_dipole(g: RootedGraph, u, v) -> ClassVerdict | None:
    t = g.target
    parts = []
    for comp in _components(g, {u, v, t}):
        h = g.induced(comp | {u, v}, target=u).without_links([(u, v)])
        if not (set(h.neighbors(u)) & comp and set(h.neighbors(v)) & comp):
            return None
        emb = outerplanar_embed(h)
        if emb is None:
            return None
        parts.append((h, emb))
    return ClassVerdict(DIPOLE, {"u": u, "v": v, "components": parts})


def as_ring(g: RootedGraph, access) -> ClassVerdict | None:
    t = g.target
    if len(access) < 3:
        return None
    aset = set(access)
    groups = {}
    for comp in _components(g, aset | {t}):
        attached = frozenset(x for y in comp for x in g.neighbors(y) if x in aset)
        if len(attached) != 2:
            return None
        groups.setdefault(attached, set()).update(comp)
    for a, b in g.links:
        if a in aset and b in aset:
            groups.setdefault(frozenset((a, b)), set())
    pair_graph = {a: [] for a in access}
    for pair in groups:
        a, b = sorted(pair)
        pair_graph[a].append(b)
        pair_graph[b].append(a)
    if any(len(ns) != 2 for ns in pair_graph.values()):
        return None
    order = [access[0], min(pair_graph[access[0]])]
    while True:
        nxt = [x for x in pair_graph[order[-1]] if x != order[-2]][0]
        if nxt == order[0]:
            break
        order.append(nxt)
    if len(order) != len(access):
        return None
    segments = []
    for i, a in enumerate(order):
        b = order[(i + 1) % len(order)]
        h = g.induced(groups[frozenset((a, b))] | {a, b}, target=a)
        emb = outerplanar_embed(h)
        if emb is None:
            return None
        segments.append((h, emb))
    return ClassVerdict(RING, {"order": order, "segments": segments})


# ---------------------------------------------------------------- synthesis helpers

def _corner(walk, x):
    """(node we arrive from, node we leave to) at the first visit of x in a right-hand walk."""
    for k, (a, b) in enumerate(walk):
        if b == x:
            return a, walk[(k + 1) % len(walk)][1]
    raise WrongClass(f"node {x} is not on the outer walk")


def _entering(walk, nodes) -> dict:
    return {x: _corner(walk, x)[0] for x in nodes}


def synth_outerplanar(g: RootedGraph, verdict: ClassVerdict):
    if verdict.kind != OUTERPLANAR:
        raise WrongClass(f"expected {OUTERPLANAR}, got {verdict.kind}")
    t = g.target
    emb = verdict.witness["embedding"]
    rest = [v for v in g.nodes if v != t]
    if not rest:
        return RotationSystem({t: ()}, None), {}
    if not emb.links():
        # t is the center of a star
        rotation = {s: (t,) for s in rest}
        rotation[t] = tuple(sorted(rest, reverse=True))
        return RotationSystem(rotation, default_outer(rotation, t)), {s: t for s in rest}
    walk = emb.outer_rh_walk()
    e_map = _entering(walk, rest)
    rotation = dict(emb.rotation)
    first_visit = {}
    for k, (_, b) in enumerate(walk):
        first_visit.setdefault(b, k)
    access = sorted(g.access_nodes(), key=lambda x: first_visit[x])
    for x in access:
        a, _ = _corner(walk, x)
        ns = list(rotation[x])
        ns.insert(ns.index(a) + 1, t)
        rotation[x] = tuple(ns)
    rotation[t] = tuple(reversed(access))
    return RotationSystem(rotation, default_outer(rotation, t)), e_map


def _block(emb: RotationSystem, walk, x) -> list:
    """Neighbors of x counterclockwise, starting where the outer walk leaves x."""
    a, _ = _corner(walk, x)
    return emb.ccw_from(x, a)


def synth_dipole(g: RootedGraph, verdict: ClassVerdict):
    if verdict.kind != DIPOLE:
        raise WrongClass(f"expected {DIPOLE}, got {verdict.kind}")
    t = g.target
    u, v = verdict.witness["u"], verdict.witness["v"]
    rotation, e_map = {}, {}
    around_u, around_v = [], []
    for h, emb in verdict.witness["components"]:
        walk = emb.outer_rh_walk()
        around_u.append(_block(emb, walk, u))
        around_v.append(_block(emb, walk, v))
        inner = [x for x in h.nodes if x not in (u, v)]
        e_map.update(_entering(walk, inner))
        for x in inner:
            rotation[x] = emb.rotation[x]
    uv = g.has_link(u, v)
    rotation[u] = tuple(x for blk in around_u for x in blk) + ((v,) if uv else ()) + (t,)
    rotation[v] = tuple(x for blk in reversed(around_v) for x in blk) + (t,) + ((u,) if uv else ())
    rotation[t] = (u, v)
    e_map[u] = t
    # first link met clockwise around v from the outer face
    e_map[v] = around_v[0][-1] if around_v else t
    return RotationSystem(rotation, default_outer(rotation, t)), e_map


def dipole_sequences(g: RootedGraph, verdict: ClassVerdict):
    """Per component: (neighbors of u counterclockwise, neighbors of v clockwise), from the outer face."""
    u, v = verdict.witness["u"], verdict.witness["v"]
    out = []
    for _, emb in verdict.witness["components"]:
        walk = emb.outer_rh_walk()
        out.append((tuple(_block(emb, walk, u)), tuple(reversed(_block(emb, walk, v)))))
    return out


def synth_ring(g: RootedGraph, verdict: ClassVerdict):
    if verdict.kind != RING:
        raise WrongClass(f"expected {RING}, got {verdict.kind}")
    t = g.target
    order = verdict.witness["order"]
    k = len(order)
    rotation, e_map = {}, {}
    blocks = {x: [] for x in order}  # [(block from the previous segment), (block from the next)]
    arrive = {}
    for i, (h, emb) in enumerate(verdict.witness["segments"]):
        a, b = order[i], order[(i + 1) % k]
        walk = emb.outer_rh_walk()
        inner = [x for x in h.nodes if x not in (a, b)]
        e_map.update(_entering(walk, inner))
        for x in inner:
            rotation[x] = emb.rotation[x]
        blocks[a].append(("next", _block(emb, walk, a)))
        blocks[b].append(("prev", _block(emb, walk, b)))
        arrive[(a, i)] = _corner(walk, a)[0]
    for i, x in enumerate(order):
        parts = dict(blocks[x])
        # arriving at x through the next segment's outer walk continues into the previous segment
        rotation[x] = tuple(parts["prev"]) + tuple(parts["next"]) + (t,)
        e_map[x] = arrive[(x, i)]
    rotation[t] = tuple(order)
    return RotationSystem(rotation, default_outer(rotation, t)), e_map


def synthesize_class(g: RootedGraph, verdict: ClassVerdict):
    if verdict.kind == OUTERPLANAR:
        return synth_outerplanar(g, verdict)
    if verdict.kind == DIPOLE:
        return synth_dipole(g, verdict)
    if verdict.kind == RING:
        return synth_ring(g, verdict)
    raise WrongClass("instance is in none of the three classes")
