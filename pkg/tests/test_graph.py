import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctxgraph.graph import (
    Graph,
    GraphError,
    are_isomorphic,
    canonical_form,
    catalog,
    catalog_graph,
    cliques_of_size,
    complement,
    emit_graph6,
    f9,
    from_edge_list,
    from_json,
    is_connected,
    parse_graph6,
    x16,
)
from ctxgraph.scenario import f9_vectors
from oracles import brute_isomorphic, random_graph


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return from_edge_list(n, [p for p, c in zip(pairs, chosen) if c])


def test_edge_list_examples():
    c5 = from_edge_list(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert c5 == Graph.cycle(5) and c5.num_edges == 5
    assert from_edge_list(3, [(0, 1), (0, 1)]).edges() == [(0, 1)]


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 2)]])
def test_edge_list_rejects_bad_pairs(edges):
    with pytest.raises(GraphError):
        from_edge_list(3, edges)


def test_graph_validates_symmetry():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0b00))
    with pytest.raises(GraphError):
        Graph(2, (0b01, 0b00))


@given(graphs())
def test_constructed_graphs_are_symmetric_and_irreflexive(g):
    for u in range(g.n):
        assert not g.has_edge(u, u)
        for v in range(g.n):
            assert g.has_edge(u, v) == g.has_edge(v, u)


def test_graph6_examples():
    assert emit_graph6(parse_graph6("D?{")) == "D?{"
    assert emit_graph6(Graph.empty(1)) == "@"
    assert parse_graph6("Bw") == Graph.complete(3)


@pytest.mark.parametrize("text", ["", "B", "Bww", "B~", "~??~", "B\x7f", "Bx"])
def test_graph6_rejects_malformed(text):
    with pytest.raises(GraphError):
        parse_graph6(text)


def test_graph6_round_trip_random(rng):
    for _ in range(10_000):
        g = random_graph(rng, int(rng.integers(1, 13)))
        assert parse_graph6(emit_graph6(g)) == g


def test_complement_examples():
    assert complement(Graph.complete(5)) == Graph.empty(5)
    assert are_isomorphic(complement(Graph.cycle(5)), Graph.cycle(5))
    assert complement(f9()).num_edges == 21


@given(graphs())
def test_complement_is_involution(g):
    assert complement(complement(g)) == g


def test_connectivity_examples():
    assert is_connected(Graph.cycle(5))
    assert not is_connected(Graph.empty(2))
    assert is_connected(f9())


def test_cliques_examples():
    assert cliques_of_size(Graph.complete(4), 4) == [(0, 1, 2, 3)]
    assert cliques_of_size(Graph.cycle(5), 3) == []
    assert (6, 7, 8, 9) in cliques_of_size(x16(), 4)


def test_canonical_form_examples():
    relabelled = from_edge_list(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)])
    assert canonical_form(Graph.cycle(5)).canon == canonical_form(relabelled).canon
    p3 = from_edge_list(3, [(0, 1), (1, 2)])
    assert canonical_form(p3).canon != canonical_form(Graph.complete(3)).canon


def test_canonical_form_invariant_under_permutation(rng):
    base = canonical_form(f9()).canon
    for _ in range(100):
        assert canonical_form(f9().relabel(list(rng.permutation(9)))).canon == base


@settings(max_examples=200)
@given(graphs(max_n=12), st.randoms(use_true_random=False))
def test_canonical_form_permutation_property(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    cf = canonical_form(g)
    assert cf.canon == canonical_form(g.relabel(perm)).canon
    # the relabelling really maps g onto the canonical graph
    assert emit_graph6(g.relabel(cf.relabeling)).encode() == cf.canon
    for gen in cf.generators:
        assert g.relabel(gen) == g


def test_canonical_form_separates_small_graphs(rng):
    for _ in range(400):
        n = int(rng.integers(1, 7))
        g, h = random_graph(rng, n), random_graph(rng, n)
        same = canonical_form(g).canon == canonical_form(h).canon
        assert same == brute_isomorphic(g, h)


def test_canonical_form_classes_match_brute_force_at_n5():
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    canons = set()
    for mask in range(1 << len(pairs)):
        canons.add(canonical_form(from_edge_list(5, [p for k, p in enumerate(pairs) if mask >> k & 1])).canon)
    assert len(canons) == 34


def test_f9_catalog_structure():
    g = f9()
    assert g.num_edges == 15
    assert g.degrees() == [3, 3, 3, 3, 3, 3, 4, 4, 4]
    ortho = [(i, j) for i, j in itertools.combinations(range(9), 2)
             if sum(a * b for a, b in zip(f9_vectors()[i].components, f9_vectors()[j].components)) == 0]
    assert g.edges() == ortho


def test_x16_restricts_to_f9():
    assert x16().subgraph(range(9)) == f9()


def test_catalog_lookup():
    names = [e.name for e in catalog()]
    assert names == ["c5", "f9", "x16"]
    assert catalog_graph("C5") == Graph.cycle(5)
    with pytest.raises(GraphError):
        catalog_graph("petersen")


def test_json_round_trip():
    assert from_json(f9().to_json()) == f9()
    with pytest.raises(GraphError):
        from_json({"edges": []})
