"""Orthonormal representations with exact arithmetic, and the F9 scenario.

A :class:`RealVector` is stored as ``components / sqrt(scale)``.  When the
components and scale are rationals, inner products squared are exact
:class:`~fractions.Fraction` values and orthogonality is decided by an exact
zero test; float vectors (``scale is None``) fall back to a tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

import numpy as np

from ctxgraph import _vectors
from ctxgraph.graph import Graph, cliques_of_size, f9, from_edge_list, x16
from ctxgraph.theta import ThetaResult, lovasz_theta

Number = Union[Fraction, float]
FLOAT_TOL = 1e-12


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class RealVector:
    components: tuple
    scale: Optional[Fraction] = None  # None marks a plain float vector

    @classmethod
    def exact(cls, components: Sequence, scale=1) -> RealVector:
        comps = tuple(Fraction(c) for c in components)
        sc = Fraction(scale)
        if sc <= 0:
            raise ScenarioError("scale must be positive")
        return cls(comps, sc)

    @classmethod
    def from_real(cls, values: Sequence[float]) -> RealVector:
        return cls(tuple(float(v) for v in values), None)

    @property
    def is_exact(self) -> bool:
        return self.scale is not None

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def real(self) -> np.ndarray:
        arr = np.array([float(c) for c in self.components])
        return arr / math.sqrt(self.scale) if self.is_exact else arr

    def norm_sq(self) -> Number:
        if self.is_exact:
            return sum(c * c for c in self.components) / self.scale
        return float(np.dot(self.real, self.real))

    def is_unit(self) -> bool:
        n = self.norm_sq()
        return n == 1 if self.is_exact else abs(n - 1.0) <= FLOAT_TOL

    def integer_form(self) -> tuple[tuple[int, ...], int]:
        """Primitive integer components with their squared norm (exact vectors only)."""
        if not self.is_exact:
            raise ScenarioError("float vector has no integer form")
        den = reduce(math.lcm, (c.denominator for c in self.components), 1)
        ints = [int(c * den) for c in self.components]
        g = reduce(math.gcd, ints, 0) or 1
        ints = [i // g for i in ints]
        return tuple(ints), sum(i * i for i in ints)

    def __str__(self) -> str:
        if not self.is_exact:
            return "(" + ", ".join(f"{c:.6g}" for c in self.components) + ")"
        ints, norm = self.integer_form()
        body = "(" + ", ".join(str(i) for i in ints) + ")"
        return body if norm == 1 else f"{body}/sqrt({norm})"


def dot(a: RealVector, b: RealVector) -> Number:
    """Raw component dot product (exact for exact vectors, ignores scales)."""
    if a.dim != b.dim:
        raise ScenarioError("dimension mismatch")
    if a.is_exact and b.is_exact:
        return sum(x * y for x, y in zip(a.components, b.components))
    return float(np.dot(a.real, b.real))


def orthogonal(a: RealVector, b: RealVector) -> bool:
    d = dot(a, b)
    return d == 0 if a.is_exact and b.is_exact else abs(d) <= FLOAT_TOL


def overlap_sq(a: RealVector, b: RealVector) -> Number:
    """|<a|b>|^2, exact when both vectors are exact."""
    if a.is_exact and b.is_exact:
        d = dot(a, b)
        return d * d / (a.scale * b.scale)
    return float(np.dot(a.real, b.real) ** 2)


def compute_perp(psi: RealVector, u: RealVector) -> RealVector:
    """Normalised ``(1 - |u><u|) psi`` with positive overlap on ``psi``."""
    if psi.is_exact and u.is_exact:
        p, v = psi.components, u.components
        vp = sum(x * y for x, y in zip(v, p))
        usq = sum(x * x for x in v)
        w = [usq * x - vp * y for x, y in zip(p, v)]
        if all(c == 0 for c in w):
            raise ScenarioError("psi is parallel to u; the projection vanishes")
        # w . p = usq*|p|^2 - (v.p)^2 > 0 by Cauchy-Schwarz, so the sign is already right
        ints, norm = RealVector.exact(w, 1).integer_form()
        return RealVector.exact(ints, norm)
    ps, uv = psi.real, u.real / np.linalg.norm(u.real)
    w = ps - np.dot(uv, ps) * uv
    nrm = np.linalg.norm(w)
    if nrm <= 1e-12 * max(np.linalg.norm(ps), 1.0):
        raise ScenarioError("psi is parallel to u; the projection vanishes")
    w = w / nrm
    if np.dot(w, ps) < 0:
        w = -w
    return RealVector.from_real(w)


@dataclass(frozen=True)
class OrthonormalRepresentation:
    graph: Graph
    vectors: tuple[RealVector, ...]
    handle: RealVector

    def __post_init__(self):
        if len(self.vectors) != self.graph.n:
            raise ScenarioError("need one vector per vertex")
        dims = {v.dim for v in self.vectors} | {self.handle.dim}
        if len(dims) != 1:
            raise ScenarioError("vectors and handle must share one dimension")

    @property
    def dim(self) -> int:
        return self.handle.dim

    def handle_sum(self) -> Number:
        return sum((overlap_sq(u, self.handle) for u in self.vectors),
                   Fraction(0) if self._exact() else 0.0)

    def _exact(self) -> bool:
        return self.handle.is_exact and all(v.is_exact for v in self.vectors)


@dataclass(frozen=True)
class Scenario:
    representation: OrthonormalRepresentation
    perp_states: tuple[RealVector, ...]

    @property
    def graph(self) -> Graph:
        return self.representation.graph

    @property
    def psi(self) -> RealVector:
        return self.representation.handle

    @property
    def vectors(self) -> tuple[RealVector, ...]:
        return self.representation.vectors


def _exact_list(entries) -> tuple[RealVector, ...]:
    return tuple(RealVector.exact(c, s) for c, s in entries)


def f9_vectors() -> tuple[RealVector, ...]:
    return _exact_list(_vectors.F9_VECTORS)


def extended_vectors() -> tuple[RealVector, ...]:
    """The sixteen vectors u1..u16 (index 0 is u1)."""
    return _exact_list(_vectors.F9_VECTORS + _vectors.EXTENSION_VECTORS)


def printed_perp_vectors() -> tuple[RealVector, ...]:
    return _exact_list(_vectors.PERP_VECTORS)


def f9_representation() -> OrthonormalRepresentation:
    return OrthonormalRepresentation(f9(), f9_vectors(), RealVector.exact(*_vectors.HANDLE))


def make_scenario(rep: OrthonormalRepresentation) -> Scenario:
    return Scenario(rep, tuple(compute_perp(rep.handle, u) for u in rep.vectors))


def f9_scenario() -> Scenario:
    return make_scenario(f9_representation())


def kcbs_representation() -> OrthonormalRepresentation:
    """Pentagon with the umbrella vectors around handle (0, 0, 1)."""
    c = math.cos(math.pi / 5)
    cos_sq = c / (1 + c)
    sin_a, cos_a = math.sqrt(1 - cos_sq), math.sqrt(cos_sq)
    vecs = tuple(
        RealVector.from_real([sin_a * math.cos(4 * math.pi * j / 5), sin_a * math.sin(4 * math.pi * j / 5), cos_a])
        for j in range(5)
    )
    return OrthonormalRepresentation(Graph.cycle(5), vecs, RealVector.from_real([0.0, 0.0, 1.0]))


# ---------------------------------------------------------------------------
# reports

@dataclass
class EdgeCheck:
    i: int
    j: int
    inner: Number
    passed: bool


@dataclass
class RepresentationReport:
    edge_checks: list[EdgeCheck]
    unit_norm_failures: list[int]
    handle_sum: Number
    theta: Optional[ThetaResult]
    exact: bool

    @property
    def edges_ok(self) -> bool:
        return all(c.passed for c in self.edge_checks)

    @property
    def within_theta(self) -> bool:
        if self.theta is None:
            return True
        s = float(self.handle_sum)
        slack = 0.0 if self.exact else 1e-9
        return self.theta.lower - slack <= s <= self.theta.upper + slack

    @property
    def passed(self) -> bool:
        return self.edges_ok and not self.unit_norm_failures and self.within_theta

    def lines(self) -> list[str]:
        out = []
        for c in self.edge_checks:
            out.append(f"edge {c.i + 1}-{c.j + 1}: <u|v> = {c.inner}  {'PASS' if c.passed else 'FAIL'}")
        for v in self.unit_norm_failures:
            out.append(f"vector {v + 1}: not unit norm  FAIL")
        out.append(f"handle sum = {self.handle_sum}" + (f" = {float(self.handle_sum):.12f}" if self.exact else ""))
        if self.theta is not None:
            out.append(f"theta in [{self.theta.lower:.10f}, {self.theta.upper:.10f}]: "
                       f"{'PASS' if self.within_theta else 'FAIL'}")
        return out


def verify_representation(rep: OrthonormalRepresentation, gap_tol: float = 1e-8,
                          with_theta: bool = True) -> RepresentationReport:
    checks = [EdgeCheck(i, j, dot(rep.vectors[i], rep.vectors[j]), orthogonal(rep.vectors[i], rep.vectors[j]))
              for i, j in rep.graph.edges()]
    bad_norms = [k for k, v in enumerate(rep.vectors) if not v.is_unit()]
    if not rep.handle.is_unit():
        bad_norms.append(-1)
    theta = lovasz_theta(rep.graph, gap_tol) if with_theta else None
    return RepresentationReport(checks, bad_norms, rep.handle_sum(), theta, rep._exact())


@dataclass
class BasisCoverReport:
    cliques: list[tuple[int, ...]]           # all 4-cliques of the graph
    bases: list[tuple[int, ...]]             # those whose vectors are pairwise orthogonal
    membership: dict[int, list[tuple[int, ...]]]  # vertex -> bases containing it (covered vertices)
    assignment: dict[int, tuple[int, ...]]   # vertex -> lowest-index basis
    uncovered: list[int]
    restriction_matches: bool

    @property
    def passed(self) -> bool:
        return not self.uncovered and self.restriction_matches

    def lines(self) -> list[str]:
        def lab(c):
            return "{" + ",".join(str(v + 1) for v in c) + "}"
        out = [f"orthonormal-basis 4-cliques: {', '.join(lab(c) for c in self.bases)}"]
        for v in sorted(self.membership):
            m = self.membership[v]
            out.append(f"vertex {v + 1}: in {len(m)} basis clique(s) {' '.join(lab(c) for c in m)}; "
                       f"measured in {lab(self.assignment[v])}")
        for v in self.uncovered:
            out.append(f"vertex {v + 1}: in no basis clique  FAIL")
        out.append(f"graph restricted to 1..9 equals F9: {'PASS' if self.restriction_matches else 'FAIL'}")
        return out


def verify_basis_cover(vectors: Sequence[RealVector], g: Optional[Graph] = None,
                       covered: Sequence[int] = tuple(range(9))) -> BasisCoverReport:
    """Check that every vertex in ``covered`` lies in an orthonormal-basis 4-clique."""
    g = g if g is not None else x16()
    if len(vectors) != g.n:
        raise ScenarioError("need one vector per vertex")
    dim = vectors[0].dim
    cliques = cliques_of_size(g, dim)
    bases = [c for c in cliques
             if all(orthogonal(vectors[a], vectors[b]) for k, a in enumerate(c) for b in c[k + 1:])
             and all(vectors[a].is_unit() for a in c)]
    membership = {v: [c for c in bases if v in c] for v in covered}
    uncovered = [v for v in covered if not membership[v]]
    assignment = {v: m[0] for v, m in membership.items() if m}
    membership = {v: m for v, m in membership.items() if m}
    restriction = g.n >= 9 and g.subgraph(range(9)) == f9()
    return BasisCoverReport(cliques, bases, membership, assignment, uncovered, restriction)


# ---------------------------------------------------------------------------
# representation files

def _parse_vector(entry) -> RealVector:
    try:
        comps, scale = entry
    except (TypeError, ValueError):
        raise ScenarioError(f"vector entry must be [components, squared-norm], got {entry!r}") from None
    if any(isinstance(c, float) for c in comps) or isinstance(scale, float):
        return RealVector.from_real(np.array(comps, dtype=float) / math.sqrt(float(scale)))
    return RealVector.exact([Fraction(c) for c in comps], Fraction(scale))


def _vector_json(v: RealVector):
    if v.is_exact:
        comps = [int(c) if c.denominator == 1 else str(c) for c in v.components]
        scale = int(v.scale) if v.scale.denominator == 1 else str(v.scale)
        return [comps, scale]
    return [list(v.components), 1]


def load_representation(data: Union[dict, str]) -> OrthonormalRepresentation:
    """Read ``{"n", "edges", "vectors": [[comps, scale], ...], "handle": [comps, scale]}``."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        g = from_edge_list(int(data["n"]), data["edges"])
        vecs = tuple(_parse_vector(e) for e in data["vectors"])
        handle = _parse_vector(data["handle"])
    except KeyError as exc:
        raise ScenarioError(f"representation file is missing {exc}") from None
    return OrthonormalRepresentation(g, vecs, handle)


def dump_representation(rep: OrthonormalRepresentation) -> dict:
    return {
        "n": rep.graph.n,
        "edges": [list(e) for e in rep.graph.edges()],
        "vectors": [_vector_json(v) for v in rep.vectors],
        "handle": _vector_json(rep.handle),
    }
