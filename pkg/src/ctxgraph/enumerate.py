"""Isomorph-free generation of graphs by canonical augmentation.

Each graph on ``k + 1`` vertices is produced from exactly one parent on ``k``
vertices: the child is kept only if the new vertex lies in the orbit chosen
by an isomorphism-invariant deletion rule (maximum degree, then the largest
canonical label among those).  Neighbour sets of the new vertex are first
reduced to orbits under the parent's automorphism group, so siblings are
never isomorphic.  Memory use is one DFS path.
"""

from __future__ import annotations

from typing import Callable, Iterator, Optional

from ctxgraph.graph import Graph, _canonical_search, _orbits, iter_bits, popcount, components


def _subset_orbit_reps(k: int, generators) -> list[int]:
    """Smallest member of each orbit of vertex subsets of ``range(k)``."""
    size = 1 << k
    if not generators:
        return list(range(size))
    images = []
    for gen in generators:
        img = [0] * size
        for s in range(1, size):
            low = s & -s
            img[s] = img[s ^ low] | (1 << gen[low.bit_length() - 1])
        images.append(img)
    seen = bytearray(size)
    reps = []
    for s in range(size):
        if seen[s]:
            continue
        reps.append(s)
        seen[s] = 1
        stack = [s]
        while stack:
            t = stack.pop()
            for img in images:
                u = img[t]
                if not seen[u]:
                    seen[u] = 1
                    stack.append(u)
    return reps


def _accept(adj: tuple[int, ...], new: int):
    """Decide whether ``new`` is in the canonical deletion orbit.

    Returns ``(accepted, generators_or_None)``; generators are returned when a
    canonical labelling had to be computed.
    """
    degs = [popcount(a) for a in adj]
    top = max(degs)
    if degs[new] < top:
        return False, None
    tied = [v for v, d in enumerate(degs) if d == top]
    if len(tied) == 1:
        return True, None
    # second invariant: sum of neighbour degrees
    sums = {v: sum(degs[u] for u in iter_bits(adj[v])) for v in tied}
    best = max(sums.values())
    if sums[new] < best:
        return False, None
    tied = [v for v in tied if sums[v] == best]
    if len(tied) == 1:
        return True, None
    _, pos, gens = _canonical_search(Graph._trusted(len(adj), adj))
    chosen = max(tied, key=lambda v: pos[v])
    orb = _orbits(len(adj), gens)
    return orb[new] == orb[chosen], gens


def children(g: Graph, generators, connected_only: bool = False) -> Iterator[tuple[Graph, Optional[tuple]]]:
    """Accepted one-vertex extensions of ``g`` as ``(child, generators or None)``."""
    k = g.n
    bit = 1 << k
    comps = [sum(1 << v for v in c) for c in components(g)] if connected_only else []
    for s in _subset_orbit_reps(k, generators):
        if connected_only and any(not (s & c) for c in comps):
            continue
        adj = tuple(a | bit if s >> v & 1 else a for v, a in enumerate(g.adj)) + (s,)
        ok, gens = _accept(adj, k)
        if ok:
            yield Graph._trusted(k + 1, adj), gens


def _automorphisms(g: Graph, gens):
    if gens is None:
        _, _, gens = _canonical_search(g)
    return gens


def generate(n: int, visit: Callable[[Graph], None], connected: bool = True,
             root: Optional[Graph] = None) -> int:
    """Visit one representative per isomorphism class of ``n``-vertex graphs.

    With ``root`` given, only descendants of that graph in the augmentation
    tree are visited.  Returns the number of graphs visited.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    start = root if root is not None else Graph.empty(1)
    if start.n > n:
        raise ValueError("root has more vertices than n")
    count = 0

    def walk(g: Graph, gens) -> None:
        nonlocal count
        if g.n == n:
            if not connected or g.n == 1 or _is_connected_adj(g.adj):
                visit(g)
                count += 1
            return
        last = g.n + 1 == n
        gens = _automorphisms(g, gens)
        for child, cgens in children(g, gens, connected_only=connected and last):
            walk(child, cgens)

    walk(start, None)
    return count


def level(k: int) -> list[Graph]:
    """All graphs on ``k`` vertices in generation order (connected or not)."""
    out: list[Graph] = []
    generate(k, out.append, connected=False)
    return out


def _is_connected_adj(adj) -> bool:
    seen = frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << len(adj)) - 1


def enumerate_connected(n: int, visitor: Callable[[Graph], None]) -> int:
    """Visit each connected ``n``-vertex graph once up to isomorphism."""
    if not 1 <= n <= 10:
        raise ValueError("n must be in 1..10")
    return generate(n, visitor, connected=True)
