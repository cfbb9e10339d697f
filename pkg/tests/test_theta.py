import math

import numpy as np
import pytest

from ctxgraph.alpha import greedy_clique_cover, independence_number
from ctxgraph.graph import Graph, complement, disjoint_union, f9
from ctxgraph.theta import certified_lower, lovasz_theta, odd_cycle_theta, recognize_algebraic
from oracles import random_graph

GAP = 1e-8


def contains(res, value, slack=0.0):
    return res.lower - slack <= value <= res.upper + slack


def test_examples():
    for n in range(1, 8):
        assert contains(lovasz_theta(Graph.complete(n)), 1.0)
    assert contains(lovasz_theta(Graph.empty(4)), 4.0)
    assert contains(lovasz_theta(Graph.cycle(5)), math.sqrt(5))
    th = lovasz_theta(f9())
    assert 11 / 3 - 1e-7 <= th.lower <= th.upper <= 11 / 3 + 1e-7
    assert th.value / 3 == pytest.approx(11 / 9, abs=1e-7)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_odd_cycles(n):
    res = lovasz_theta(Graph.cycle(n))
    assert contains(res, odd_cycle_theta(n))
    assert res.gap <= GAP


def test_edgeless_graphs():
    for n in range(1, 11):
        assert contains(lovasz_theta(Graph.empty(n)), float(n))


def test_bounds_certify_a_feasible_point(rng):
    g = random_graph(rng, 8)
    res = lovasz_theta(g)
    value, x = certified_lower(g, res.x_opt)
    assert np.trace(x) == pytest.approx(1.0)
    for u, v in g.edges():
        assert x[u, v] == 0.0
    assert np.linalg.eigvalsh(x)[0] >= 0
    assert value <= res.upper


def test_sandwich_on_random_graphs(rng):
    for _ in range(2000):
        g = random_graph(rng, int(rng.integers(2, 11)))
        res = lovasz_theta(g)
        a = independence_number(g).alpha
        assert res.converged and res.gap <= GAP
        # the upper bound is certified; the lower one is within the gap of the true value
        assert res.upper >= a and a <= res.lower + GAP
        assert res.upper <= greedy_clique_cover(g) + GAP and res.upper <= g.n


def test_product_bound(rng):
    for _ in range(300):
        g = random_graph(rng, int(rng.integers(2, 11)))
        assert lovasz_theta(g).upper * lovasz_theta(complement(g)).upper >= g.n - 1e-6
    c5 = lovasz_theta(Graph.cycle(5)).value * lovasz_theta(complement(Graph.cycle(5))).value
    assert c5 == pytest.approx(5.0, abs=1e-6)


def test_additive_over_disjoint_union(rng):
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(1, 7)))
        h = random_graph(rng, int(rng.integers(1, 7)))
        total = lovasz_theta(disjoint_union(g, h)).value
        assert total == pytest.approx(lovasz_theta(g).value + lovasz_theta(h).value, abs=2 * GAP)


def test_permutation_invariance(rng):
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(2, 11)))
        a = lovasz_theta(g).value
        b = lovasz_theta(g.relabel(list(rng.permutation(g.n)))).value
        assert a == pytest.approx(b, abs=2 * GAP)


def test_stop_below_reports_early_exit():
    res = lovasz_theta(Graph.cycle(5), stop_below=3.0)
    assert res.stopped_early and res.upper < 3.0 and res.lower <= math.sqrt(5) <= res.upper


def test_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        lovasz_theta(Graph.cycle(5), gap_tol=0)


@pytest.mark.parametrize("value,text", [
    (2.23606797, "sqrt(5)"),
    (3.66666667, "11/3"),
    (1.17157287, "4 - 2*sqrt(2)"),
    (1.11803399, "sqrt(5)/2"),
    (11 / 9, "11/9"),
])
def test_recognize_algebraic(value, text):
    assert recognize_algebraic(value).text == text


def test_recognize_algebraic_misses():
    assert recognize_algebraic(math.pi) is None
