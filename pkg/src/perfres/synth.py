"""Decision and synthesis pipeline.

Reduce to t's component, test planarity, split into biconnected blocks, strip
separating links and classify each block. Synthesis then lifts the class
pattern back through every reduction step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classes import NONE, classify_nice, synthesize_class
from .errors import MissingComponentPattern, PreconditionViolated
from .graph import (BiconnectedDecomposition, RootedGraph, SeparatorReport, biconnected_decomposition,
                    component_of_target, other, separating_links, separating_order)
from .patterns import SkippingPattern, hier_list, hier_right_hand, updated_right_hand_pattern
from .planar import RotationSystem, planarity_embed, separation_candidates
from .separators import iter_insertions, mu

YES, NO = "YES", "NO"
NON_PLANAR = "NonPlanarComponent"
UNCLASSIFIABLE = "ReducedInstanceUnclassifiable"
CLASSIFIED = "Classified"

# above this many links the face filter picks the candidates for separating links
FILTER_ABOVE = 200


@dataclass
class BlockInfo:
    index: int
    graph: RootedGraph
    report: SeparatorReport
    kind: str
    verdict: object = None
    mu: dict = field(default_factory=dict)


@dataclass
class Decision:
    verdict: str
    reason: str
    blocks: list = field(default_factory=list)
    failed_block: int | None = None
    outside: frozenset = frozenset()

    @property
    def yes(self) -> bool:
        return self.verdict == YES

    def describe(self) -> str:
        if self.reason == UNCLASSIFIABLE:
            return f"{self.verdict} ({self.reason}: block {self.failed_block})"
        return f"{self.verdict} ({self.reason})"


@dataclass
class SynthesisResult:
    decision: Decision
    pattern: SkippingPattern | None

    @property
    def resilient(self) -> bool:
        return self.pattern is not None


def _restrict(rot: RotationSystem, g: RootedGraph) -> RotationSystem:
    keep = g.nodes
    return RotationSystem({v: tuple(u for u in rot.rotation[v] if u in keep and g.has_link(u, v))
                           for v in keep})


def block_separators(block: RootedGraph, rot: RotationSystem | None = None) -> SeparatorReport:
    if block.m > FILTER_ABOVE and rot is not None:
        return separating_links(block, separation_candidates(_restrict(rot, block)))
    return separating_links(block)


def _analyse(g: RootedGraph):
    comp, outside = component_of_target(g)
    if comp.n == 1:
        return Decision(YES, CLASSIFIED, outside=outside), comp, None
    rot = planarity_embed(comp)
    if rot is None:
        return Decision(NO, NON_PLANAR, outside=outside), comp, None
    decomp = biconnected_decomposition(comp)
    blocks = []
    for i, (block, _) in enumerate(decomp.components):
        report = block_separators(block, rot)
        reduced = block.without_links(report.all)
        verdict = classify_nice(reduced, check=False)
        blocks.append(BlockInfo(i, block, report, verdict.kind, verdict))
        if verdict.kind == NONE:
            return Decision(NO, UNCLASSIFIABLE, blocks, failed_block=i, outside=outside), comp, decomp
    return Decision(YES, CLASSIFIED, blocks, outside=outside), comp, decomp


def decide(g: RootedGraph) -> Decision:
    return _analyse(g)[0]


def decide_all_targets(g: RootedGraph) -> dict:
    return {t: decide(g.with_target(t)) for t in sorted(g.nodes)}


def synthesize(g: RootedGraph) -> SynthesisResult:
    decision, comp, decomp = _analyse(g)
    if not decision.yes:
        return SynthesisResult(decision, None)
    if decomp is None:
        return SynthesisResult(decision, lift_component(SkippingPattern({}), g))
    patterns = []
    for info in decision.blocks:
        patterns.append(synthesize_block(info))
    p = lift_cut_nodes(decomp, patterns)
    return SynthesisResult(decision, lift_component(p, g))


def synthesize_block(info: BlockInfo) -> SkippingPattern:
    block, report = info.graph, info.report
    reduced = block.without_links(report.all)
    rot0, e_map = synthesize_class(reduced, info.verdict)
    inner = block.without_links(report.sep_t)
    inner_report = SeparatorReport(frozenset(), report.sep_other, report.separated_by)
    order = separating_order(inner, inner_report)
    p = lift_sep_links(inner, rot0, e_map, inner_report, order, mu_out=info.mu)
    return lift_sep_links_t(block, p, report.sep_t)


# ---------------------------------------------------------------- lifts

class _LazyTables(dict):
    """Priority tables computed on first access; μ only touches a few nodes."""

    def __init__(self, h, e_map, priority, unrestricted):
        super().__init__()
        self.h, self.e_map, self.priority, self.unrestricted = h, e_map, priority, unrestricted

    def __missing__(self, v):
        g = self.h.graph
        table = {y: tuple(hier_list(self.h, v, y, self.priority.get((v, y), ()), self.unrestricted))
                 for y in g.neighbors(v)}
        table[None] = table[self.e_map[v]]
        self[v] = table
        return table


def _priority(h, order, report, mu_of, special) -> dict:
    """Priority parts: separators prepended innermost first, so the outermost ends up in front."""
    present = h.graph.links
    priority = {}
    for e in reversed(order):
        if e not in present:
            continue
        if e == special:
            for x in e:
                y0 = other(e, x)
                for y in h.graph.neighbors(x):
                    if y != y0:
                        priority[(x, y)] = (y0,) + priority.get((x, y), ())
            continue
        x = other(e, mu_of[e])
        for f in report.s(e):
            if x in f:
                y = other(f, x)
                priority[(x, y)] = (other(e, x),) + priority.get((x, y), ())
    return priority


def lift_sep_links(g: RootedGraph, rot0: RotationSystem, e_map: dict, report: SeparatorReport,
                   order: list, mu_out: dict | None = None) -> SkippingPattern:
    """Pattern for g (no separating t-links) from the right-hand pattern of g minus its separators."""
    if report.sep_t:
        raise PreconditionViolated("separating links incident to t must be lifted separately")
    base = g.without_links(order)
    if not order:
        return updated_right_hand_pattern(base, rot0, e_map)
    t = g.target
    nt = set(g.neighbors(t))
    special = next((e for e in order if set(e) == nt), None)
    unrestricted = frozenset([special]) if special else frozenset()
    mu_of = {} if mu_out is None else mu_out
    h = None
    for _, e, h in iter_insertions(g, rot0, order, report):
        if e is None or e == special:
            continue
        prio = _priority(h, order, report, mu_of, special)
        lazy = SkippingPattern(_LazyTables(h, e_map, prio, unrestricted))
        mu_of[e] = mu(h.graph, lazy, e, report.s(e))
    return hier_right_hand(h, e_map, _priority(h, order, report, mu_of, special), unrestricted)


def lift_sep_links_t(g: RootedGraph, p: SkippingPattern, sep_t) -> SkippingPattern:
    """Put each separating t-link first everywhere at its endpoint."""
    t = g.target
    lists = dict(p.lists)
    for e in sorted(sep_t):
        v = other(e, t)
        table = {f: (t,) + tuple(x for x in lst if x != t) for f, lst in lists[v].items()}
        table[t] = (t,) + tuple(x for x in sorted(g.neighbors(v)) if x != t)
        lists[v] = table
    return SkippingPattern(lists)


def lift_cut_nodes(decomp: BiconnectedDecomposition, patterns: list) -> SkippingPattern:
    if len(patterns) != len(decomp.components):
        raise MissingComponentPattern(f"{len(decomp.components)} blocks but {len(patterns)} patterns")
    dist = decomp.distance_to_t
    member = {}
    for i, (block, _) in enumerate(decomp.components):
        for x in block.nodes:
            member.setdefault(x, []).append(i)
    lists = {}
    for x, idx in member.items():
        if dist[x] == 0:
            continue
        if len(idx) == 1:
            lists[x] = dict(patterns[idx[0]].lists[x])
            continue
        # the block leading towards t is the one holding a neighbor closer to t
        home = next(i for i in idx
                    if any(dist[y] < dist[x] for y in decomp.components[i][0].neighbors(x)))
        home_nbrs = set(decomp.components[home][0].neighbors(x))
        rest = sorted(y for i in idx if i != home for y in decomp.components[i][0].neighbors(x))
        own = patterns[home].lists[x]
        table = {None: own[None] + tuple(rest)}
        for y in sorted(home_nbrs):
            table[y] = own[y] + tuple(rest)
        for y in rest:
            table[y] = own[None] + tuple(rest)
        lists[x] = table
    return SkippingPattern(lists)


def lift_component(p: SkippingPattern, g: RootedGraph) -> SkippingPattern:
    """Give every node outside t's component ascending lists for all in-ports."""
    lists = dict(p.lists)
    for v in g.nodes:
        if v == g.target or v in lists:
            continue
        ns = tuple(sorted(g.neighbors(v)))
        table = {None: ns}
        for y in ns:
            table[y] = ns
        lists[v] = table
    return SkippingPattern(lists)
