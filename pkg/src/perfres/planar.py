"""Rotation systems, face walks, planarity and outerplanarity."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import LinkExists, NotConnected, NotOnFace
from .graph import RootedGraph, is_connected, link


@dataclass(frozen=True)
class RotationSystem:
    """Counterclockwise neighbor order per node.

    A dart (x, y) is the link {x, y} traversed from x. Face walks follow the
    clockwise successor, which keeps the face on the left of every dart.
    `outer` is a dart lying on the outer face walk.
    """

    rotation: dict
    outer: tuple | None = None
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pos = {}
        for v, ns in self.rotation.items():
            for i, u in enumerate(ns):
                pos[(v, u)] = i
        object.__setattr__(self, "_pos", pos)

    # -- local structure
    def nodes(self):
        return self.rotation.keys()

    def links(self) -> set:
        return {link(v, u) for v, ns in self.rotation.items() for u in ns}

    def ccw_succ(self, v, u):
        ns = self.rotation[v]
        return ns[(self._pos[(v, u)] + 1) % len(ns)]

    def cw_succ(self, v, u):
        ns = self.rotation[v]
        return ns[(self._pos[(v, u)] - 1) % len(ns)]

    def ccw_from(self, v, u) -> list:
        """Neighbors of v counterclockwise starting right after u; u comes last."""
        ns = self.rotation[v]
        i = self._pos[(v, u)]
        return list(ns[i + 1:]) + list(ns[:i + 1])

    # -- faces
    def face_walk(self, dart) -> tuple:
        walk = [dart]
        x, y = dart
        while True:
            nxt = (y, self.cw_succ(y, x))
            if nxt == dart:
                return tuple(walk)
            walk.append(nxt)
            x, y = nxt

    def faces(self) -> list:
        seen = set()
        out = []
        for dart in sorted(self._pos):
            if dart in seen:
                continue
            walk = self.face_walk(dart)
            seen.update(walk)
            out.append(walk)
        if not out and self.rotation:
            out.append(())
        return out

    def face_of(self, dart) -> int:
        for i, walk in enumerate(self.faces()):
            if dart in walk:
                return i
        raise NotOnFace(f"dart {dart} is not part of the embedding")

    @property
    def outer_face(self) -> int | None:
        return None if self.outer is None else self.face_of(self.outer)

    def outer_walk(self) -> tuple:
        return self.face_walk(self.outer) if self.outer is not None else ()

    def rh_walk(self, dart) -> tuple:
        """Walk that always takes the counterclockwise successor of the incoming link."""
        walk = [dart]
        x, y = dart
        while True:
            nxt = (y, self.ccw_succ(y, x))
            if nxt == dart:
                return tuple(walk)
            walk.append(nxt)
            x, y = nxt

    def outer_rh_walk(self) -> tuple:
        """The outer face as traversed by counterclockwise-successor steps."""
        if self.outer is None:
            return ()
        x, y = self.outer
        return self.rh_walk((y, x))

    def components(self) -> int:
        g = nx.Graph()
        g.add_nodes_from(self.rotation)
        g.add_edges_from(self.links())
        return nx.number_connected_components(g)

    def euler_ok(self) -> bool:
        n = len(self.rotation)
        if n == 0:
            return True
        m = len(self.links())
        isolated = sum(1 for ns in self.rotation.values() if not ns)
        f = sum(1 for walk in self.faces() if walk) + isolated
        # every component is embedded on its own sphere
        return n - m + f == 2 * self.components()

    def mirrored(self) -> "RotationSystem":
        outer = None if self.outer is None else (self.outer[1], self.outer[0])
        return RotationSystem({v: tuple(reversed(ns)) for v, ns in self.rotation.items()}, outer)

    def dump(self) -> str:
        lines = []
        for v in sorted(self.rotation):
            lines.append(f"rot {v}: " + ",".join(f"{v}-{u}" for u in self.rotation[v]))
        for k, walk in enumerate(self.faces()):
            if walk:
                nodes = [d[0] for d in walk] + [walk[0][0]]
                lines.append(f"face {k}: " + " ".join(map(str, nodes)))
        return "\n".join(lines) + "\n"


def default_outer(rotation: dict, t) -> tuple | None:
    """Dart at t towards its smallest neighbor, or the smallest dart overall."""
    if t in rotation and rotation[t]:
        return (t, min(rotation[t]))
    darts = sorted((v, u) for v, ns in rotation.items() for u in ns)
    return darts[0] if darts else None


def _from_nx_embedding(emb: nx.PlanarEmbedding, nodes) -> dict:
    return {v: tuple(reversed(list(emb.neighbors_cw_order(v)))) if v in emb else () for v in nodes}


def planarity_embed(g: RootedGraph) -> RotationSystem | None:
    """Planar rotation system of g, or None when g is not planar."""
    if not is_connected(g):
        raise NotConnected("planarity embedding needs a connected graph")
    ok, emb = nx.check_planarity(g.to_nx())
    if not ok:
        return None
    rotation = _from_nx_embedding(emb, g.nodes)
    return RotationSystem(rotation, default_outer(rotation, g.target))


def outerplanar_embed(g: RootedGraph) -> RotationSystem | None:
    """Embedding with every node on the outer face, or None if g is not outerplanar."""
    if not is_connected(g):
        raise NotConnected("outerplanarity test needs a connected graph")
    if g.m == 0:
        return RotationSystem({v: () for v in g.nodes}, None)
    apex = max(g.nodes) + 1
    h = g.to_nx()
    h.add_edges_from((apex, v) for v in g.nodes)
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    rotation = {v: tuple(u for u in ns if u != apex) for v, ns in _from_nx_embedding(emb, g.nodes).items()}
    rot = RotationSystem(rotation)
    everyone = set(g.nodes)
    for walk in rot.faces():
        if {d[0] for d in walk} == everyone:
            return RotationSystem(rotation, min(walk))
    raise AssertionError("apex face not recovered")


def is_outerplanar(g: RootedGraph) -> bool:
    return outerplanar_embed(g) is not None


def insert_link_in_face(rot: RotationSystem, u, v, face: int) -> RotationSystem:
    """Add link {u, v} inside the given face, splitting it in two."""
    if v in rot.rotation.get(u, ()):
        raise LinkExists(f"link {u}-{v} already embedded")
    walks = rot.faces()
    if not 0 <= face < len(walks):
        raise NotOnFace(f"no face {face}")
    walk = walks[face]
    rotation = dict(rot.rotation)
    for x in (u, v):
        if x not in rotation:
            raise NotOnFace(f"node {x} is not embedded")
        y = v if x == u else u
        if not rotation[x]:
            rotation[x] = (y,)
            continue
        corner = next(((a, b) for a, b in zip(walk, walk[1:] + walk[:1]) if a[1] == x), None)
        if corner is None:
            raise NotOnFace(f"node {x} is not on face {face}")
        before = corner[0][0]  # arrived from here; the new link goes just counterclockwise-before it
        ns = list(rotation[x])
        i = ns.index(before)
        ns.insert(i, y)
        rotation[x] = tuple(ns)
    return RotationSystem(rotation, rot.outer)


def separation_candidates(rot: RotationSystem) -> set:
    """Links whose endpoints share at least three faces.

    In a biconnected plane graph every separating link passes this filter,
    because each of the (at least three) bridges at the separation pair is
    followed by its own face through both endpoints.
    """
    faces_at = {v: set() for v in rot.rotation}
    for k, walk in enumerate(rot.faces()):
        for x, _ in walk:
            faces_at[x].add(k)
    return {e for e in rot.links() if len(faces_at[e[0]] & faces_at[e[1]]) >= 3}
