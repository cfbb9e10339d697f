"""Exhaustive maximisation of theta(G)/alpha(G) over connected n-vertex graphs.

Restricting to connected graphs loses nothing: both invariants add over
disjoint unions, and a mediant never exceeds the larger of its fractions.

Work is split into chunks (subtrees of the augmentation tree rooted at a
fixed level).  Each chunk keeps its own running best, so the outcome of a
chunk, including how many SDPs it solves, does not depend on which worker
runs it or in what order; merging chunks is an associative max.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ctxgraph.alpha import greedy_clique_cover, independence_number
from ctxgraph.enumerate import generate, level
from ctxgraph.graph import CanonicalForm, Graph, canonical_form, emit_graph6, parse_graph6
from ctxgraph.theta import ThetaResult, lovasz_theta, recognize_algebraic

log = logging.getLogger(__name__)

PRUNE_MARGIN = 1e-9


@dataclass
class Candidate:
    graph: Graph
    alpha: int
    theta: ThetaResult
    canonical: Optional[CanonicalForm] = None

    @property
    def ratio_lower(self) -> float:
        return self.theta.lower / self.alpha

    @property
    def ratio_upper(self) -> float:
        return self.theta.upper / self.alpha


@dataclass
class SearchResult:
    n: int
    best_ratio_lower: float
    best_ratio_upper: float
    argmax_graphs: list[Candidate]
    graphs_scanned: int
    sdp_solves: int
    wall_time: float = 0.0
    unconverged: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "best_ratio_lower": self.best_ratio_lower,
            "best_ratio_upper": self.best_ratio_upper,
            "argmax_graphs": [
                {
                    "graph": emit_graph6(c.graph),
                    "canonical_form": c.canonical.canon.decode("ascii"),
                    "alpha": c.alpha,
                    "theta": {
                        "lower": c.theta.lower,
                        "upper": c.theta.upper,
                        "iterations": c.theta.iterations,
                        "converged": c.theta.converged,
                    },
                }
                for c in self.argmax_graphs
            ],
            "graphs_scanned": self.graphs_scanned,
            "sdp_solves": self.sdp_solves,
            "unconverged": list(self.unconverged),
            "timing": {"wall_time": self.wall_time},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def milestone_row(self) -> str:
        form = recognize_algebraic(0.5 * (self.best_ratio_lower + self.best_ratio_upper))
        label = form.text if form else "?"
        return (f"n={self.n}  graphs={self.graphs_scanned}  max theta/alpha="
                f"{self.best_ratio_lower:.10f}  ~ {label}  argmax classes={len(self.argmax_graphs)}")


class _Accumulator:
    """Running best for one chunk of graphs."""

    def __init__(self, gap_tol: float, prune: bool):
        self.gap_tol = gap_tol
        self.prune = prune
        self.best_lower = 0.0
        self.candidates: list[Candidate] = []
        self.scanned = 0
        self.sdp_solves = 0
        self.unconverged: list[str] = []

    def __call__(self, g: Graph) -> None:
        self.scanned += 1
        a = independence_number(g).alpha
        threshold = self.best_lower - PRUNE_MARGIN
        if self.prune and self.best_lower > 0 and greedy_clique_cover(g) / a <= threshold:
            return
        stop = self.best_lower * a if self.prune and self.best_lower > 0 else None
        th = lovasz_theta(g, self.gap_tol, stop_below=stop)
        self.sdp_solves += 1
        if th.stopped_early:
            return
        if not th.converged:
            self.unconverged.append(emit_graph6(g))
        cand = Candidate(g, a, th)
        if cand.ratio_lower > self.best_lower:
            self.best_lower = cand.ratio_lower
            self.candidates = [c for c in self.candidates if c.ratio_upper >= self.best_lower]
        if cand.ratio_upper >= self.best_lower:
            self.candidates.append(cand)

    def summary(self) -> tuple:
        return (self.best_lower, self.candidates, self.scanned, self.sdp_solves, self.unconverged)


def _split_level(n: int) -> int:
    return max(1, n - 3)


def _run_chunk(args) -> tuple:
    n, root_g6, gap_tol, prune = args
    acc = _Accumulator(gap_tol, prune)
    generate(n, acc, connected=True, root=parse_graph6(root_g6))
    return acc.summary()


def _merge(n: int, parts: Iterable[tuple], wall: float) -> SearchResult:
    parts = list(parts)
    best_lower = max((p[0] for p in parts), default=0.0)
    argmax: dict[bytes, Candidate] = {}
    for _, cands, *_rest in parts:
        for c in cands:
            if c.ratio_upper >= best_lower:
                c.canonical = c.canonical or canonical_form(c.graph)
                key = c.canonical.canon
                # keep the tightest certificate per isomorphism class
                if key not in argmax or c.theta.gap < argmax[key].theta.gap:
                    argmax[key] = c
    ordered = [argmax[k] for k in sorted(argmax)]
    best_upper = max((c.ratio_upper for c in ordered), default=0.0)
    return SearchResult(
        n=n,
        best_ratio_lower=best_lower,
        best_ratio_upper=best_upper,
        argmax_graphs=ordered,
        graphs_scanned=sum(p[2] for p in parts),
        sdp_solves=sum(p[3] for p in parts),
        wall_time=wall,
        unconverged=[g6 for p in parts for g6 in p[4]],
    )


def default_threads() -> int:
    env = os.environ.get("CTXGRAPH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def max_ratio_search(n: int, gap_tol: float = 1e-8, prune: bool = True,
                     threads: Optional[int] = None) -> SearchResult:
    """Maximum of theta/alpha over all connected ``n``-vertex graphs, 3 <= n <= 10."""
    if not 3 <= n <= 10:
        raise ValueError("n must be in 3..10")
    threads = threads or default_threads()
    start = time.perf_counter()
    roots = [emit_graph6(g) for g in level(_split_level(n))]
    jobs = [(n, r, gap_tol, prune) for r in roots]
    log.info("n=%d: %d chunks on %d worker(s)", n, len(jobs), threads)
    if threads == 1:
        parts = [_run_chunk(j) for j in jobs]
    else:
        import multiprocessing

        with multiprocessing.get_context("spawn").Pool(threads) as pool:
            parts = pool.map(_run_chunk, jobs, chunksize=1)
    return _merge(n, parts, time.perf_counter() - start)


def search_graph6_stream(lines: Iterable[str], gap_tol: float = 1e-8, prune: bool = True) -> SearchResult:
    """Same maximisation over externally supplied graph6 lines (one graph each)."""
    start = time.perf_counter()
    acc = _Accumulator(gap_tol, prune)
    n = None
    for line in lines:
        line = line.strip()
        if not line or line.startswith(">>"):
            continue
        g = parse_graph6(line)
        if n is None:
            n = g.n
        elif g.n != n:
            raise ValueError(f"mixed vertex counts in graph6 stream ({n} and {g.n})")
        acc(g)
    if n is None:
        raise ValueError("graph6 stream contains no graphs")
    return _merge(n, [acc.summary()], time.perf_counter() - start)
