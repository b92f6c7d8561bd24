"""Deciding and synthesizing perfectly resilient forwarding patterns for planar rooted graphs."""
from .graph import RootedGraph, parse_rooted_graph, format_rooted_graph
from .patterns import SkippingPattern, Routing, route, parse_pattern, format_pattern
from .synth import Decision, SynthesisResult, decide, synthesize
from .verify import Ok, Counterexample, verify_exhaustive, rooted_minor_bruteforce, gadget

__all__ = [
    "RootedGraph", "parse_rooted_graph", "format_rooted_graph",
    "SkippingPattern", "Routing", "route", "parse_pattern", "format_pattern",
    "Decision", "SynthesisResult", "decide", "synthesize",
    "Ok", "Counterexample", "verify_exhaustive", "rooted_minor_bruteforce", "gadget",
]
__version__ = "0.1.0"
