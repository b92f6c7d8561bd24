"""Hierarchical embeddings: two arcs per link, with separating links wrapped around what they cut off."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import MarkedArcsNotContiguous, NotBiconnected, PreconditionViolated
from .graph import RootedGraph, SeparatorReport, link, separating_links
from .patterns import route


@dataclass(frozen=True)
class HierEmbedding:
    graph: RootedGraph
    arcs: dict       # node -> tuple of arcs (a, b), counterclockwise
    enclosure: dict  # link -> frozenset of links it encloses (only non-empty entries)

    def dump(self) -> str:
        lines = []
        for v in sorted(self.arcs):
            lines.append(f"rot {v}: " + ",".join(f"{a}->{b}" for a, b in self.arcs[v]))
        return "\n".join(lines) + "\n"


def symmetric_orientation(rot, g: RootedGraph, check: bool = True) -> HierEmbedding:
    """Replace every link at position i by its outgoing arc followed by its incoming arc."""
    if check and separating_links(g).all:
        raise PreconditionViolated("symmetric orientation needs a graph without separating links")
    arcs = {}
    for v in g.nodes:
        seq = []
        for u in rot.rotation.get(v, ()):
            seq.append((v, u))
            seq.append((u, v))
        arcs[v] = tuple(seq)
    return HierEmbedding(g, arcs, {})


def insert_separating_link(h: HierEmbedding, e, sep_e) -> HierEmbedding:
    u, v = e = link(*e)
    sep_e = frozenset(sep_e)
    if e in h.graph.links:
        raise PreconditionViolated(f"{e} is already embedded")
    arcs = dict(h.arcs)
    for x, y in ((u, v), (v, u)):
        seq = list(arcs[x])
        unmarked = [w for w in h.graph.neighbors(x) if link(x, w) not in sep_e]
        if not unmarked:
            raise NotBiconnected(f"every link at {x} is separated by {e}")
        ref = (x, min(unmarked))
        i = seq.index(ref)
        seq = seq[i:] + seq[:i]
        marked = [k for k, arc in enumerate(seq) if link(*arc) in sep_e]
        if not marked:
            raise PreconditionViolated(f"no link at {x} is separated by {e}")
        lo, hi = marked[0], marked[-1]
        if hi - lo + 1 != len(marked):
            raise MarkedArcsNotContiguous(f"arcs separated by {e} are not contiguous around {x}")
        seq = seq[:lo] + [(x, y)] + seq[lo:hi + 1] + [(y, x)] + seq[hi + 1:]
        arcs[x] = tuple(seq)
    enclosure = dict(h.enclosure)
    enclosure[e] = sep_e
    return HierEmbedding(h.graph.plus_link(u, v), arcs, enclosure)


def build_hier_embedding(g: RootedGraph, rot0, order, report: SeparatorReport | None = None,
                         check: bool = True) -> HierEmbedding:
    """Symmetric orientation of g minus its separators, then re-insert them innermost first."""
    if report is None:
        report = separating_links(g)
    if report.sep_t:
        raise PreconditionViolated("separating links incident to t must be removed first")
    base = g.without_links(order)
    h = symmetric_orientation(rot0, base, check=check)
    for e in reversed(order):
        h = insert_separating_link(h, e, report.s(e))
    return h


def iter_insertions(g: RootedGraph, rot0, order, report: SeparatorReport):
    """Yield (index, separator, embedding before inserting it) for every step, then the final one."""
    h = symmetric_orientation(rot0, g.without_links(order), check=False)
    for i, e in enumerate(reversed(order)):
        yield i, e, h
        h = insert_separating_link(h, e, report.s(e))
    yield len(order), None, h


# ---------------------------------------------------------------- arc geometry

def _arc_faces(h: HierEmbedding):
    """Faces of the arc structure, treating every arc as its own edge.

    A dart is (arc, start node). Walks take the clockwise successor so the
    face lies on the left of each dart.
    """
    pos = {}
    for x, seq in h.arcs.items():
        for i, arc in enumerate(seq):
            pos[(x, arc)] = i
    face_of = {}
    faces = []
    for x in sorted(h.arcs):
        for arc in h.arcs[x]:
            d = (arc, x)
            if d in face_of:
                continue
            k = len(faces)
            walk = []
            cur = d
            while cur not in face_of:
                face_of[cur] = k
                walk.append(cur)
                a, start = cur
                y = a[1] if a[0] == start else a[0]
                seq = h.arcs[y]
                nxt = seq[(pos[(y, a)] - 1) % len(seq)]
                cur = (nxt, y)
            faces.append(walk)
    return faces, face_of


def arc_euler_ok(h: HierEmbedding) -> bool:
    faces, _ = _arc_faces(h)
    n = len(h.arcs)
    return n - 2 * h.graph.m + len(faces) == 2


def geometric_enclosure(h: HierEmbedding) -> dict:
    """For every link, the links lying in the region to the left of its arc (u, v)."""
    faces, face_of = _arc_faces(h)
    out = {}
    for e in sorted(h.graph.links):
        u, v = e
        wall = {(u, v), (v, u)}
        start = face_of[((u, v), u)]
        region = {start}
        queue = deque([start])
        inside = set()
        while queue:
            k = queue.popleft()
            for arc, x in faces[k]:
                if arc in wall:
                    continue
                inside.add(link(*arc))
                y = arc[1] if arc[0] == x else arc[0]
                j = face_of[(arc, y)]
                if j not in region:
                    region.add(j)
                    queue.append(j)
        out[e] = frozenset(inside)
    return out


# ---------------------------------------------------------------- exit node of a separator

def interior_path(g: RootedGraph, e, sep_e) -> list:
    """Shortest u-v path using only links of S_e; ties go to smaller node ids."""
    u, v = e
    adj = {}
    for a, b in sep_e:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {u: None}
    queue = deque([u])
    while queue and v not in prev:
        x = queue.popleft()
        for y in sorted(adj.get(x, ())):
            if y in prev:
                continue
            prev[y] = x
            if y == v:
                break
            queue.append(y)
    if v not in prev:
        raise PreconditionViolated(f"no path inside S_e between the endpoints of {e}")
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return path[::-1]


def mu(g_prev: RootedGraph, pattern_prev, e, sep_e):
    """Endpoint of e through which a routing started inside S_e first leaves S_e.

    The routing runs on the graph before e is inserted, with the t-links of
    both endpoints failed.
    """
    u, v = e = link(*e)
    t = g_prev.target
    if set(g_prev.neighbors(t)) == {u, v}:
        raise PreconditionViolated("both t-neighbors are endpoints of the separator")
    path = interior_path(g_prev, e, sep_e)
    w = path[1]
    failed = {f for f in (link(u, t), link(v, t)) if f in g_prev.links}
    r = route(g_prev, pattern_prev, w, failed)
    for a, b in zip(r.trace, r.trace[1:]):
        if link(a, b) not in sep_e:
            if a not in e:
                raise PreconditionViolated(f"routing left S_e at {a}, not at an endpoint of {e}")
            return a
    raise PreconditionViolated(f"routing from {w} never left the links separated by {e} ({r.verdict})")
