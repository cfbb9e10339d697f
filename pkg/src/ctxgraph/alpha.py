"""Exact independence number by bitset branch and bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ctxgraph.graph import Graph, iter_bits, popcount


@dataclass(frozen=True)
class AlphaResult:
    alpha: int
    witness: int  # bitmask of one maximum independent set
    all_maximum_sets: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def witness_set(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.witness))


def _clique_partition_size(adj, cand: int) -> int:
    """Number of cliques in a greedy partition of ``cand`` (bounds any independent subset)."""
    count = 0
    while cand:
        count += 1
        clique_cand = cand
        while clique_cand:
            v = (clique_cand & -clique_cand).bit_length() - 1
            cand &= ~(1 << v)
            clique_cand &= adj[v]
    return count


def greedy_clique_cover(g: Graph) -> int:
    """Size of a greedy clique partition of ``g``; an upper bound on the Lovasz number.

    Vertices are taken in order of decreasing degree; each new clique is grown
    greedily from the remaining vertices.
    """
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    remaining = set(order)
    count = 0
    while remaining:
        count += 1
        members = 0
        allowed = (1 << g.n) - 1
        for v in order:
            if v in remaining and allowed >> v & 1:
                remaining.discard(v)
                members |= 1 << v
                allowed &= g.adj[v]
    return count


def independence_number(g: Graph, all_sets: bool = False) -> AlphaResult:
    adj = g.adj
    best = [0, 0]  # size, mask

    def branch(cand: int, chosen: int, size: int) -> None:
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + _clique_partition_size(adj, cand) <= best[0]:
            return
        # maximum-degree vertex inside the candidate set, lowest index on ties
        pivot, pdeg = -1, -1
        for v in iter_bits(cand):
            d = popcount(adj[v] & cand)
            if d > pdeg:
                pivot, pdeg = v, d
        if pdeg == 0:
            total = size + popcount(cand)
            if total > best[0]:
                best[0], best[1] = total, chosen | cand
            return
        bit = 1 << pivot
        branch(cand & ~adj[pivot] & ~bit, chosen | bit, size + 1)
        branch(cand & ~bit, chosen, size)

    branch((1 << g.n) - 1, 0, 0)
    alpha, witness = best
    sets = tuple(enumerate_sets_of_size(g, alpha)) if all_sets else None
    return AlphaResult(alpha, witness, sets)


def enumerate_sets_of_size(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All independent sets of exactly ``k`` vertices, in lexicographic order."""
    adj = g.adj
    out: list[tuple[int, ...]] = []

    def walk(cand: int, chosen: list[int]) -> None:
        need = k - len(chosen)
        if need == 0:
            out.append(tuple(chosen))
            return
        if popcount(cand) < need or _clique_partition_size(adj, cand) < need:
            return
        for v in iter_bits(cand):
            rest = cand & ~((2 << v) - 1)
            chosen.append(v)
            walk(rest & ~adj[v], chosen)
            chosen.pop()
            if popcount(rest) < need:
                break

    walk((1 << g.n) - 1, [])
    return out


def enumerate_maximum_sets(g: Graph) -> list[tuple[int, ...]]:
    return enumerate_sets_of_size(g, independence_number(g).alpha)
