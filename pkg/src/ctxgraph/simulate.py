"""Predictions and Monte Carlo runs of the two-step sequential protocol.

For each vertex ``i`` the handle state is measured in a fixed four-outcome
basis containing ``u_i``.  For each ordered edge ``(i, j)`` two further runs
prepare ``u_i`` (post-measurement state after outcome 1) and ``u_i^perp``
(after outcome 0) and measure them in the basis of ``j``.  Joint
probabilities are assembled from these conditionals.

Estimates are exact fractions ``N(k) / N``, so identities that hold by
construction (such as the vanishing of the first-measurement no-signalling
terms) hold exactly on simulated data too.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from ctxgraph.graph import Graph, f9, x16
from ctxgraph.scenario import (
    RealVector,
    Scenario,
    ScenarioError,
    extended_vectors,
    overlap_sq,
    verify_basis_cover,
)

Number = Union[Fraction, float]


class SimulationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# source and slit encoding

@dataclass(frozen=True)
class SourceStats:
    mu: float
    p_nonnull: float
    p_single_given_nonnull: float
    p_multi: float


def source_stats(mu: float) -> SourceStats:
    """Poisson photon-number statistics of an attenuated laser pulse."""
    if not mu >= 0:
        raise SimulationError("mu must be non-negative")
    nonnull = -math.expm1(-mu)
    single = mu * math.exp(-mu)
    single_given = single / nonnull if nonnull > 0 else 1.0
    return SourceStats(mu, nonnull, single_given, max(0.0, nonnull - single))


@dataclass(frozen=True)
class SlitEncoding:
    transmissivity: tuple[float, ...]
    phase: tuple[float, ...]
    norm: float  # C, the sum of the transmissivities

    def state(self) -> np.ndarray:
        amp = np.sqrt(np.array(self.transmissivity)) * np.exp(1j * np.array(self.phase))
        return amp / math.sqrt(self.norm)


def slit_encode(state: RealVector) -> SlitEncoding:
    """Slit transmissivities (largest equal to 1) and phases encoding a real state."""
    if not state.is_unit():
        raise SimulationError("state must be a unit vector")
    # the common scale cancels in the ratios, so exact components give exact ratios
    sq = [c * c for c in state.components]
    top = max(sq)
    t = tuple(float(s / top) for s in sq)
    phase = tuple(math.pi if c < 0 else 0.0 for c in state.components)
    return SlitEncoding(t, phase, sum(t))


# ---------------------------------------------------------------------------
# noise and probabilities

@dataclass(frozen=True)
class NoiseModel:
    dark_rate: float = 0.0
    misalignment: float = 0.0

    def __post_init__(self):
        for name in ("dark_rate", "misalignment"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise SimulationError(f"{name} must lie in [0, 1]")

    def apply(self, ideal: Sequence[Number]) -> list[Number]:
        """White-noise mixing, then uniformly assigned dark counts."""
        k = len(ideal)
        e, d = Fraction(self.misalignment), Fraction(self.dark_rate)
        if e == 0 and d == 0:
            return list(ideal)
        return [(1 - d) * ((1 - e) * p + e / k) + d / k for p in ideal]


@dataclass(frozen=True)
class Basis:
    """A measurement basis; ``labels`` name the outcomes (vertex indices)."""
    labels: tuple[int, ...]
    vectors: tuple[RealVector, ...]

    def distribution(self, state: RealVector) -> list[Number]:
        return [overlap_sq(b, state) for b in self.vectors]


def f9_bases() -> dict[int, Basis]:
    """For each F9 vertex, the lowest-index orthonormal-basis 4-clique of X16 containing it."""
    vecs = extended_vectors()
    report = verify_basis_cover(vecs, x16())
    if not report.passed:
        raise ScenarioError("X16 basis cover check failed")
    return {v: Basis(c, tuple(vecs[k] for k in c)) for v, c in report.assignment.items()}


def completed_bases(sc: Scenario) -> dict[int, Basis]:
    """Generic fallback: complete each ``u_i`` to an orthonormal basis numerically."""
    out = {}
    for i, u in enumerate(sc.vectors):
        d = u.dim
        q, _ = np.linalg.qr(np.column_stack([u.real, np.eye(d)]))
        cols = [u] + [RealVector.from_real(q[:, k]) for k in range(1, d)]
        out[i] = Basis((i,) + tuple(-k for k in range(1, d)), tuple(cols))
    return out


def bases_for(sc: Scenario) -> dict[int, Basis]:
    if sc.graph == f9() and all(v.is_exact for v in sc.vectors):
        return f9_bases()
    return completed_bases(sc)


@dataclass
class ProbabilityTable:
    """Single-outcome probabilities the protocol estimates.

    ``p1[i]`` is P(1|i) on the handle; ``given_u[(i, j)]`` and
    ``given_perp[(i, j)]`` are P(1|j) after preparing ``u_i`` and
    ``u_i^perp``.  The ``var_*`` dicts hold estimator variances (empty for
    exact predictions).
    """
    p1: dict[int, Number]
    given_u: dict[tuple[int, int], Number]
    given_perp: dict[tuple[int, int], Number]
    var_p1: dict[int, float] = field(default_factory=dict)
    var_u: dict[tuple[int, int], float] = field(default_factory=dict)
    var_perp: dict[tuple[int, int], float] = field(default_factory=dict)


def ordered_edges(g: Graph) -> list[tuple[int, int]]:
    return sorted([(u, v) for u, v in g.edges()] + [(v, u) for u, v in g.edges()])


def _target_probability(basis: Basis, target: int, state: RealVector, noise: NoiseModel) -> Number:
    dist = noise.apply(basis.distribution(state))
    return dist[basis.labels.index(target)]


def expected_probabilities(sc: Scenario, noise: NoiseModel = NoiseModel(),
                           bases: Optional[dict[int, Basis]] = None) -> ProbabilityTable:
    """Closed-form probabilities under ``noise`` (exact for exact vectors)."""
    bases = bases or bases_for(sc)
    p1 = {i: _target_probability(bases[i], i, sc.psi, noise) for i in range(sc.graph.n)}
    given_u, given_perp = {}, {}
    for i, j in ordered_edges(sc.graph):
        given_u[(i, j)] = _target_probability(bases[j], j, sc.vectors[i], noise)
        given_perp[(i, j)] = _target_probability(bases[j], j, sc.perp_states[i], noise)
    return ProbabilityTable(p1, given_u, given_perp)


def ideal_probabilities(sc: Scenario) -> ProbabilityTable:
    """Noise-free probabilities: squared overlaps, independent of the basis completion."""
    p1 = {i: overlap_sq(u, sc.psi) for i, u in enumerate(sc.vectors)}
    given_u, given_perp = {}, {}
    for i, j in ordered_edges(sc.graph):
        given_u[(i, j)] = overlap_sq(sc.vectors[j], sc.vectors[i])
        given_perp[(i, j)] = overlap_sq(sc.vectors[j], sc.perp_states[i])
    return ProbabilityTable(p1, given_u, given_perp)


# ---------------------------------------------------------------------------
# joints, S and no-signalling terms

def _check_unit_interval(*values) -> None:
    for v in values:
        if not 0 <= v <= 1:
            raise SimulationError(f"probability {v} outside [0, 1]")


def joint_probabilities(p1_i: Number, p0_i: Number, p1j_given_ui: Number,
                        p1j_given_uiperp: Number) -> dict[tuple[int, int], Number]:
    """The four joints P(a, b | i, j) keyed by outcome pair ``(a, b)``."""
    _check_unit_interval(p1_i, p0_i, p1j_given_ui, p1j_given_uiperp)
    p11 = p1_i * p1j_given_ui
    p01 = p0_i * p1j_given_uiperp
    return {(1, 1): p11, (0, 1): p01, (1, 0): p1_i - p11, (0, 0): p0_i - p01}


@dataclass
class JointTable:
    """P(1|i) per vertex and P(1,1|i,j) per ordered (or unordered) pair."""
    p1: dict[int, Number]
    p11: dict[tuple[int, int], Number]

    @classmethod
    def from_probabilities(cls, table: ProbabilityTable) -> JointTable:
        p11 = {(i, j): table.p1[i] * q for (i, j), q in table.given_u.items()}
        return cls(dict(table.p1), p11)

    @classmethod
    def deterministic(cls, g: Graph, assignment: Sequence[int]) -> JointTable:
        """Noncontextual point: outcome 1 exactly on vertices with ``assignment[v] == 1``."""
        p1 = {v: Fraction(assignment[v]) for v in range(g.n)}
        p11 = {(u, v): p1[u] * p1[v] for u, v in g.edges()}
        return cls(p1, p11)


def _graph(sc_or_graph) -> Graph:
    return sc_or_graph.graph if isinstance(sc_or_graph, Scenario) else sc_or_graph


def s_statistic(sc_or_graph, joints: JointTable) -> Number:
    """Sum of P(1|i) over vertices minus P(1,1|i,j) over edges (directions averaged)."""
    g = _graph(sc_or_graph)
    try:
        total = sum((joints.p1[v] for v in range(g.n)), Fraction(0))
    except KeyError as exc:
        raise SimulationError(f"missing P(1|i) for vertex {exc.args[0] + 1}") from None
    for u, v in g.edges():
        vals = [joints.p11[k] for k in ((u, v), (v, u)) if k in joints.p11]
        if not vals:
            raise SimulationError(f"missing joint for edge {u + 1}-{v + 1}")
        total -= sum(vals, Fraction(0)) / len(vals)
    return total


def s_standard_error(sc_or_graph, table: ProbabilityTable) -> float:
    """First-order error of S from independent per-setting variances."""
    g = _graph(sc_or_graph)
    grad_p1 = {v: 1.0 for v in range(g.n)}
    var = 0.0
    for u, v in g.edges():
        pairs = [k for k in ((u, v), (v, u)) if k in table.given_u]
        w = 1.0 / len(pairs)
        for i, j in pairs:
            grad_p1[i] -= w * float(table.given_u[(i, j)])
            var += (w * float(table.p1[i])) ** 2 * table.var_u.get((i, j), 0.0)
    var += sum(grad_p1[v] ** 2 * table.var_p1.get(v, 0.0) for v in range(g.n))
    return math.sqrt(var)


@dataclass(frozen=True)
class EpsilonRow:
    i: int
    j: int
    blank0: Fraction   # |P(0|j) - P(0,0|i,j) - P(1,0|i,j)|
    blank1: Fraction   # |P(1|j) - P(0,1|i,j) - P(1,1|i,j)|
    zero_blank: Fraction  # |P(0|i) - P(0,0|i,j) - P(0,1|i,j)|
    one_blank: Fraction   # |P(1|i) - P(1,0|i,j) - P(1,1|i,j)|
    err_second: float  # standard error of blank0 and blank1
    err_first: float   # standard error of zero_blank and one_blank

    @property
    def label(self) -> str:
        return f"{self.i + 1}:{self.j + 1}"


def epsilon_table(sc_or_graph, table: ProbabilityTable) -> list[EpsilonRow]:
    """No-signalling estimators for every ordered edge, in exact arithmetic."""
    g = _graph(sc_or_graph)
    rows = []
    for i, j in ordered_edges(g):
        p1i, p1j = Fraction(table.p1[i]), Fraction(table.p1[j])
        q, qp = Fraction(table.given_u[(i, j)]), Fraction(table.given_perp[(i, j)])
        jt = joint_probabilities(p1i, 1 - p1i, q, qp)
        blank0 = abs((1 - p1j) - jt[(0, 0)] - jt[(1, 0)])
        blank1 = abs(p1j - jt[(0, 1)] - jt[(1, 1)])
        zero_blank = abs((1 - p1i) - jt[(0, 0)] - jt[(0, 1)])
        one_blank = abs(p1i - jt[(1, 0)] - jt[(1, 1)])
        # blank1 = P1j - (1 - P1i) qp - P1i q; the first-measurement terms have zero gradient
        var = (table.var_p1.get(j, 0.0)
               + float(qp - q) ** 2 * table.var_p1.get(i, 0.0)
               + float(1 - p1i) ** 2 * table.var_perp.get((i, j), 0.0)
               + float(p1i) ** 2 * table.var_u.get((i, j), 0.0))
        rows.append(EpsilonRow(i, j, blank0, blank1, zero_blank, one_blank, math.sqrt(var), 0.0))
    return rows


# ---------------------------------------------------------------------------
# Monte Carlo protocol

@dataclass(frozen=True)
class Setting:
    index: int
    kind: str            # "psi", "u" or "perp"
    first: int           # vertex whose state is prepared (or measured, for "psi")
    second: Optional[int]  # vertex measured second, None for "psi"
    basis: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def target(self) -> int:
        return self.first if self.second is None else self.second

    def estimate(self) -> Fraction:
        return Fraction(self.counts[self.basis.index(self.target)], sum(self.counts))


def setting_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for one setting."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


@dataclass
class ExperimentRecord:
    seed: int
    shots: int
    noise: NoiseModel
    graph: Graph
    settings: list[Setting]

    def probabilities(self) -> ProbabilityTable:
        p1, given_u, given_perp = {}, {}, {}
        var_p1, var_u, var_perp = {}, {}, {}
        for s in self.settings:
            p = s.estimate()
            var = float(p * (1 - p)) / self.shots
            if s.kind == "psi":
                p1[s.first], var_p1[s.first] = p, var
            elif s.kind == "u":
                given_u[(s.first, s.second)], var_u[(s.first, s.second)] = p, var
            else:
                given_perp[(s.first, s.second)], var_perp[(s.first, s.second)] = p, var
        return ProbabilityTable(p1, given_u, given_perp, var_p1, var_u, var_perp)

    def s_value(self) -> tuple[float, float]:
        table = self.probabilities()
        return float(s_statistic(self.graph, JointTable.from_probabilities(table))), \
            s_standard_error(self.graph, table)

    def violation_sigma(self, bound: float = 3.0) -> float:
        s, err = self.s_value()
        return (s - bound) / err if err > 0 else math.inf

    def epsilons(self) -> list[EpsilonRow]:
        return epsilon_table(self.graph, self.probabilities())

    def to_json(self) -> dict:
        table = self.probabilities()
        s, err = self.s_value()
        eps = self.epsilons()
        return {
            "seed": self.seed,
            "shots_per_setting": self.shots,
            "noise": {"dark_rate": self.noise.dark_rate, "misalignment": self.noise.misalignment},
            "settings": [
                {"index": st.index, "kind": st.kind, "first": st.first + 1,
                 "second": None if st.second is None else st.second + 1,
                 "basis": [b + 1 for b in st.basis], "counts": list(st.counts)}
                for st in self.settings
            ],
            "probabilities": {
                "p1": {str(i + 1): [float(p), math.sqrt(table.var_p1[i])] for i, p in sorted(table.p1.items())},
                "given_u": {f"{i + 1}:{j + 1}": [float(p), math.sqrt(table.var_u[(i, j)])]
                            for (i, j), p in sorted(table.given_u.items())},
                "given_perp": {f"{i + 1}:{j + 1}": [float(p), math.sqrt(table.var_perp[(i, j)])]
                               for (i, j), p in sorted(table.given_perp.items())},
            },
            "S": {"value": s, "error": err, "violation_sigma": (s - 3.0) / err if err > 0 else None},
            "epsilon": [_eps_json(r) for r in eps],
            "epsilon_mean": float(sum(r.blank0 for r in eps) / len(eps)) if eps else 0.0,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pair", "eps_blank0", "eps_blank1", "eps_0blank", "eps_1blank", "err_blank", "err_first"])
        for r in self.epsilons():
            w.writerow([r.label, repr(float(r.blank0)), repr(float(r.blank1)), repr(float(r.zero_blank)),
                        repr(float(r.one_blank)), repr(r.err_second), repr(r.err_first)])
        return buf.getvalue()


def _eps_json(r: EpsilonRow) -> dict:
    return {"pair": r.label, "blank0": float(r.blank0), "blank1": float(r.blank1),
            "zero_blank": float(r.zero_blank), "one_blank": float(r.one_blank),
            "err_blank": r.err_second, "err_first": r.err_first}


def protocol_settings(sc: Scenario) -> list[tuple[str, int, Optional[int]]]:
    """Settings in their fixed order: handle runs per vertex, then u and u^perp per ordered edge."""
    out: list[tuple[str, int, Optional[int]]] = [("psi", i, None) for i in range(sc.graph.n)]
    for i, j in ordered_edges(sc.graph):
        out.append(("u", i, j))
        out.append(("perp", i, j))
    return out


def run_protocol(sc: Scenario, shots_per_setting: int, noise: NoiseModel = NoiseModel(), seed: int = 1,
                 bases: Optional[dict[int, Basis]] = None) -> ExperimentRecord:
    """Sample every setting ``shots_per_setting`` times; reproducible from ``seed``."""
    if shots_per_setting < 1:
        raise SimulationError("shots must be at least 1")
    bases = bases or bases_for(sc)
    settings = []
    for index, (kind, first, second) in enumerate(protocol_settings(sc)):
        if kind == "psi":
            basis, state = bases[first], sc.psi
        else:
            basis = bases[second]
            state = sc.vectors[first] if kind == "u" else sc.perp_states[first]
        probs = np.array([float(p) for p in noise.apply(basis.distribution(state))])
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        counts = setting_rng(seed, index).multinomial(shots_per_setting, probs)
        settings.append(Setting(index, kind, first, second, basis.labels, tuple(int(c) for c in counts)))
    return ExperimentRecord(seed, shots_per_setting, noise, sc.graph, settings)
