"""Small simple graphs stored as per-vertex neighbour bitmasks.

Includes graph6 I/O, complements, clique listing, an exact canonical form
(individualization-refinement with automorphism pruning) and the catalog
of named graphs used throughout the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from ctxgraph import _vectors

MAX_VERTICES = 32


class GraphError(ValueError):
    """Raised for invalid graph data (bad vertices, malformed encodings)."""


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is a bitmask of the neighbours of ``v``.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        adj = tuple(int(a) for a in self.adj)
        object.__setattr__(self, "adj", adj)
        if len(adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise GraphError(f"vertex {v} has a neighbour >= n")
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> Graph:
        # skips validation; callers guarantee a well-formed adjacency tuple
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def num_edges(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u]) if u < v]

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation of the vertices")
        new = [0] * self.n
        for v in range(self.n):
            row = 0
            for u in iter_bits(self.adj[v]):
                row |= 1 << perm[u]
            new[perm[v]] = row
        return Graph(self.n, tuple(new))

    def subgraph(self, vertices: Iterable[int]) -> Graph:
        """Induced subgraph; vertices are renumbered in the given order."""
        vs = list(vertices)
        index = {v: i for i, v in enumerate(vs)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return from_edge_list(len(vs), edges)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from vertex pairs; duplicates collapse."""
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
    adj = [0] * n
    for e in edges:
        u, v = (int(x) for x in e)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def from_json(data: dict | str) -> Graph:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return from_edge_list(int(data["n"]), data["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"edge-list JSON needs 'n' and 'edges': {exc}") from None


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    return Graph(g.n + h.n, g.adj + tuple(a << shift for a in h.adj))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ a ^ (1 << v) for v, a in enumerate(g.adj)))


def is_connected(g: Graph) -> bool:
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << g.n) - 1


def components(g: Graph) -> list[list[int]]:
    remaining = (1 << g.n) - 1
    out = []
    while remaining:
        start = remaining & -remaining
        seen = frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        out.append(list(iter_bits(seen)))
        remaining &= ~seen
    return out


def cliques_of_size(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All k-cliques as sorted vertex tuples, in lexicographic order."""
    if not 1 <= k <= g.n:
        raise GraphError(f"clique size must be in 1..{g.n}")
    out: list[tuple[int, ...]] = []

    def extend(chosen: list[int], candidates: int) -> None:
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        for v in iter_bits(candidates):
            # only larger vertices keep the listing lexicographic and duplicate-free
            later = g.adj[v] & candidates & ~((2 << v) - 1)
            if popcount(later) >= k - len(chosen) - 1:
                chosen.append(v)
                extend(chosen, later)
                chosen.pop()

    extend([], (1 << g.n) - 1)
    return out


# ---------------------------------------------------------------------------
# graph6

def emit_graph6(g: Graph) -> str:
    bits = [g.adj[j] >> i & 1 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        chars.append(chr(value + 63))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphError("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(not 0 <= c <= 63 for c in codes):
        raise GraphError(f"graph6 contains characters outside '?'..'~': {text!r}")
    if codes[0] == 63:
        raise GraphError("graph6 graphs with more than 62 vertices are not supported (n > 32)")
    n = codes[0]
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"graph6 header gives n={n}; supported range is 1..{MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = codes[1:]
    if len(body) != nchars:
        raise GraphError(f"graph6 body has {len(body)} chars, expected {nchars} for n={n}")
    bits = []
    for c in body:
        bits.extend((c >> s_) & 1 for s_ in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphError("graph6 padding bits are not zero")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, tuple(adj))


# ---------------------------------------------------------------------------
# canonical form

@dataclass(frozen=True)
class CanonicalForm:
    """``canon`` is the graph6 encoding of the canonically relabelled graph;
    ``relabeling[v]`` is the canonical position of input vertex ``v``."""

    canon: bytes
    relabeling: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def orbits(self) -> list[int]:
        """Orbit representative (smallest member) for each vertex under Aut(G)."""
        return _orbits(len(self.relabeling), self.generators)


def _refine(adj: Sequence[int], cells: list[int], splitters: list[int]) -> list[int]:
    """Refine an ordered partition (cells are bitmasks) until equitable.

    Cells are split by neighbour counts into each splitter; sub-cells are
    ordered by count, so the result does not depend on vertex names.  The
    input partition must already be equitable with respect to every cell
    not covered by ``splitters``.
    """
    cells = list(cells)
    queue = list(splitters)
    while queue:
        w = queue.pop(0)
        k = 0
        while k < len(cells):
            cell = cells[k]
            if cell & (cell - 1) == 0:
                k += 1
                continue
            groups: dict[int, int] = {}
            for v in iter_bits(cell):
                c = bin(adj[v] & w).count("1")
                groups[c] = groups.get(c, 0) | (1 << v)
            if len(groups) == 1:
                k += 1
                continue
            parts = [groups[c] for c in sorted(groups)]
            cells[k:k + 1] = parts
            if cell in queue:
                i = queue.index(cell)
                queue[i:i + 1] = parts
            else:
                sizes = [bin(p).count("1") for p in parts]
                skip = sizes.index(max(sizes))
                queue.extend(p for i, p in enumerate(parts) if i != skip)
            k += len(parts)
            if len(cells) == len(adj):
                return cells
    return cells


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _orbits(n: int, generators: Iterable[Sequence[int]]) -> list[int]:
    parent = list(range(n))
    for gen in generators:
        for v in range(n):
            a, b = _find(parent, v), _find(parent, gen[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [_find(parent, v) for v in range(n)]


def _leaf_code(adj: Sequence[int], cells: list[int]) -> tuple[tuple[int, ...], list[int]]:
    order = [c.bit_length() - 1 for c in cells]
    pos = [0] * len(order)
    for p, v in enumerate(order):
        pos[v] = p
    rows = []
    for v in order:
        row = 0
        for u in iter_bits(adj[v]):
            row |= 1 << pos[u]
        rows.append(row)
    return tuple(rows), pos


def _canonical_search(g: Graph):
    """Return (best rows, best relabeling, automorphism generators)."""
    n, adj = g.n, g.adj
    first: list = []   # [code, pos, path]
    best: list = []
    generators: list[tuple[int, ...]] = []

    def common_prefix(a: list[int], b: list[int]) -> int:
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        return k

    def leaf(cells: list[int], path: list[int]):
        code, pos = _leaf_code(adj, cells)
        if not first:
            first[:] = [code, pos, list(path)]
            best[:] = [code, pos, list(path)]
            return None
        for ref_code, ref_pos, ref_path in (first, best):
            if code == ref_code:
                inv = [0] * n
                for v, p in enumerate(ref_pos):
                    inv[p] = v
                gen = tuple(inv[pos[v]] for v in range(n))
                if gen not in generators and any(gen[v] != v for v in range(n)):
                    generators.append(gen)
                # the subtree below the divergence point mirrors one already seen
                return common_prefix(path, ref_path)
        if code < best[0]:
            best[:] = [code, pos, list(path)]
        return None

    def explore(cells: list[int], path: list[int]):
        if len(cells) == n:
            return leaf(cells, path)
        depth = len(path)
        k = next(i for i, c in enumerate(cells) if c & (c - 1))
        target = cells[k]
        done: list[int] = []
        for v in iter_bits(target):
            if done:
                fixing = [gen for gen in generators if all(gen[p] == p for p in path)]
                if fixing:
                    orb = _orbits(n, fixing)
                    if any(orb[v] == orb[u] for u in done):
                        continue
            done.append(v)
            bit = 1 << v
            child = _refine(adj, cells[:k] + [bit, target ^ bit] + cells[k + 1:], [bit])
            jump = explore(child, path + [v])
            if jump is not None and jump < depth:
                return jump
        return None

    explore(_refine(adj, [(1 << n) - 1], [(1 << n) - 1]), [])
    return best[0], tuple(best[1]), tuple(generators)


def canonical_form(g: Graph) -> CanonicalForm:
    """Exact canonical form: isomorphic graphs, and only those, share ``canon``."""
    _, pos, gens = _canonical_search(g)
    canon = emit_graph6(g.relabel(pos)).encode("ascii")
    return CanonicalForm(canon, pos, gens)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges == h.num_edges and canonical_form(g).canon == canonical_form(h).canon


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class GraphCatalogEntry:
    name: str
    graph: Graph
    notes: str = ""


# 1-based edge list as drawn: outer hexagon 1-6, inner triangle 7-9, six spokes.
F9_DRAWN_EDGES = (
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1),
    (7, 8), (8, 9), (9, 7),
    (1, 9), (2, 8), (3, 7), (4, 9), (5, 8), (6, 7),
)


def _orthogonality_graph(vectors) -> Graph:
    return from_edge_list(len(vectors), _vectors.orthogonal_pairs(vectors))


def f9() -> Graph:
    """Orthogonality graph of the nine four-dimensional F9 vectors."""
    return _orthogonality_graph(_vectors.F9_VECTORS)


def x16() -> Graph:
    """Orthogonality graph of F9's vectors plus the seven basis-completing ones."""
    return _orthogonality_graph(_vectors.F9_VECTORS + _vectors.EXTENSION_VECTORS)


def catalog() -> list[GraphCatalogEntry]:
    return [
        GraphCatalogEntry("c5", Graph.cycle(5), "KCBS pentagon; theta/alpha = sqrt(5)/2 is the n=5..7 maximum"),
        GraphCatalogEntry(
            "f9", f9(),
            "Fisher 9: orthogonality graph of the dimension-4 Lovasz-optimum vectors u1..u9; "
            "hexagon 1-6, triangle 7-9, spokes 1-9 2-8 3-7 4-9 5-8 6-7; alpha=3, theta=11/3",
        ),
        GraphCatalogEntry("x16", x16(), "F9 extended by u10..u16 so every measurement lies in an orthonormal basis"),
    ]


def catalog_graph(name: str) -> Graph:
    for entry in catalog():
        if entry.name == name.lower():
            return entry.graph
    raise GraphError(f"unknown catalog graph {name!r}; known: {[e.name for e in catalog()]}")
