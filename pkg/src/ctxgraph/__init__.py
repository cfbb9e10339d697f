"""Exclusivity graphs and quantum contextuality.

Exact independence numbers, certified Lovasz numbers, isomorph-free search
for the largest theta/alpha ratio, exact orthonormal representations and a
Monte Carlo model of the sequential measurement protocol.
"""

from ctxgraph.alpha import AlphaResult, independence_number
from ctxgraph.enumerate import enumerate_connected
from ctxgraph.graph import Graph, are_isomorphic, canonical_form, emit_graph6, parse_graph6
from ctxgraph.search import SearchResult, max_ratio_search
from ctxgraph.theta import ThetaResult, lovasz_theta

__all__ = [
    "AlphaResult",
    "Graph",
    "SearchResult",
    "ThetaResult",
    "are_isomorphic",
    "canonical_form",
    "emit_graph6",
    "enumerate_connected",
    "independence_number",
    "lovasz_theta",
    "max_ratio_search",
    "parse_graph6",
]

__version__ = "0.1.0"
