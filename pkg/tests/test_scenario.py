import json
import math
from fractions import Fraction

import numpy as np
import pytest

from ctxgraph.graph import f9, x16
from ctxgraph.scenario import (
    OrthonormalRepresentation,
    RealVector,
    ScenarioError,
    compute_perp,
    dump_representation,
    extended_vectors,
    f9_representation,
    f9_scenario,
    kcbs_representation,
    load_representation,
    overlap_sq,
    printed_perp_vectors,
    verify_basis_cover,
    verify_representation,
)

PSI = RealVector.exact((1, 1, 1, 0), 3)


def test_handle_overlaps_are_exact():
    vs = f9_representation().vectors
    assert overlap_sq(vs[0], PSI) == Fraction(4, 9)
    assert overlap_sq(vs[6], PSI) == Fraction(1, 3)
    assert sum(overlap_sq(v, PSI) for v in vs[:6]) == 6 * Fraction(4, 9)
    assert sum(overlap_sq(v, PSI) for v in vs[6:]) == 3 * Fraction(1, 3)


def test_extension_vectors():
    ext = extended_vectors()
    assert len(ext) == 16 and all(v.is_unit() for v in ext)
    assert ext[9].integer_form() == ((0, 0, 0, 1), 1)
    assert ext[10].integer_form() == ((0, -1, 1, 1), 3)


def test_perp_examples():
    u7 = RealVector.exact((1, 0, 0, 0), 1)
    assert compute_perp(PSI, u7).integer_form() == ((0, 1, 1, 0), 2)
    u1 = f9_representation().vectors[0]
    assert compute_perp(PSI, u1).integer_form() == ((1, 1, 3, -2), 15)
    orth = RealVector.exact((1, -1, 0, 0), 2)
    assert compute_perp(PSI, orth).integer_form() == PSI.integer_form()


def test_perp_states_match_printed_list():
    sc = f9_scenario()
    assert [p.integer_form() for p in sc.perp_states] == [p.integer_form() for p in printed_perp_vectors()]


def test_perp_properties():
    sc = f9_scenario()
    for u, perp in zip(sc.vectors, sc.perp_states):
        assert perp.is_unit()
        assert overlap_sq(u, perp) == 0
        assert sum(a * b for a, b in zip(perp.components, PSI.components)) > 0
        # perp lies in span{psi, u}: the 3x4 integer matrix has rank 2
        m = np.array([[float(c) for c in x.components] for x in (PSI, u, perp)])
        assert np.linalg.matrix_rank(m) == 2


def test_perp_rescaling_invariance():
    u = f9_representation().vectors[2]
    scaled_psi = RealVector.exact((3, 3, 3, 0), 27)
    scaled_u = RealVector.exact([2 * c for c in u.components], 4 * u.scale)
    assert compute_perp(scaled_psi, scaled_u).integer_form() == compute_perp(PSI, u).integer_form()


def test_perp_float_path_matches_exact():
    u = f9_representation().vectors[4]
    exact = compute_perp(PSI, u).real
    approx = compute_perp(RealVector.from_real(PSI.real), RealVector.from_real(u.real)).real
    assert np.allclose(exact, approx, atol=1e-12)


def test_perp_rejects_parallel():
    with pytest.raises(ScenarioError):
        compute_perp(PSI, PSI)
    with pytest.raises(ScenarioError):
        compute_perp(RealVector.from_real(PSI.real), RealVector.from_real(-PSI.real))


def test_no_signalling_decomposition_exact():
    sc = f9_scenario()
    for i, j in f9().edges() + [(b, a) for a, b in f9().edges()]:
        lhs = overlap_sq(sc.vectors[j], sc.perp_states[i])
        rhs = overlap_sq(sc.vectors[j], sc.psi) / (1 - overlap_sq(sc.vectors[i], sc.psi))
        assert lhs == rhs


def test_f9_representation_report():
    report = verify_representation(f9_representation())
    assert report.exact and report.edges_ok and len(report.edge_checks) == 15
    assert all(c.inner == 0 for c in report.edge_checks)
    assert report.handle_sum == Fraction(11, 3)
    assert report.within_theta and report.passed


def test_perturbed_vector_is_flagged():
    rep = f9_representation()
    vecs = list(rep.vectors)
    vecs[6] = RealVector.exact((1, 1, 0, 0), 2)  # breaks 7-8 and 7-9 style orthogonalities
    report = verify_representation(OrthonormalRepresentation(rep.graph, tuple(vecs), rep.handle))
    failed = [(c.i, c.j) for c in report.edge_checks if not c.passed]
    assert failed and all(6 in e for e in failed)
    assert not report.passed


def test_kcbs_umbrella_reaches_sqrt5():
    report = verify_representation(kcbs_representation())
    assert report.edges_ok
    assert report.handle_sum == pytest.approx(math.sqrt(5), abs=1e-10)
    assert report.passed


def test_basis_cover_on_x16():
    report = verify_basis_cover(extended_vectors(), x16())
    assert (6, 7, 8, 9) in report.bases
    assert not report.uncovered and report.restriction_matches and report.passed
    assert report.assignment[0] == (0, 1, 10, 11)
    assert report.assignment[6] == (6, 7, 8, 9)
    # every 4-clique of the orthogonality graph is an orthonormal basis
    assert report.bases == report.cliques


def test_representation_json_round_trip():
    rep = f9_representation()
    text = json.dumps(dump_representation(rep))
    assert load_representation(text) == rep
    with pytest.raises(ScenarioError):
        load_representation({"n": 1, "edges": []})


def test_representation_needs_one_vector_per_vertex():
    rep = f9_representation()
    with pytest.raises(ScenarioError):
        OrthonormalRepresentation(rep.graph, rep.vectors[:8], rep.handle)
