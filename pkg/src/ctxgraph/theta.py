"""Lovasz number of a graph with certified two-sided bounds.

The primal program is

    maximize  sum(X)  subject to  trace(X) = 1,  X[i, j] = 0 for edges ij,  X >= 0,

whose dual is ``min lambda_max(J + sum_e y_e A_e)`` over edge multipliers ``y``.
A primal-dual path-following method (HKM search direction) drives both to
the optimum.  On exit the primal iterate is projected onto the feasible set
and mixed with ``I/n`` until it is provably PSD (lower bound), and the dual
value is recomputed as an explicit largest eigenvalue (upper bound), so the
returned interval brackets the true value despite rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import linalg as sla

from ctxgraph.graph import Graph
from ctxgraph.numerics import NumericsError, cholesky

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ThetaResult:
    lower: float
    upper: float
    x_opt: np.ndarray
    iterations: int
    converged: bool = True
    stopped_early: bool = False

    @property
    def value(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def gap(self) -> float:
        return self.upper - self.lower


class _Problem:
    def __init__(self, g: Graph):
        self.n = n = g.n
        edges = g.edges()
        self.m = len(edges)
        self.I = np.array([e[0] for e in edges], dtype=int)
        self.J = np.array([e[1] for e in edges], dtype=int)
        self.ones = np.ones((n, n))

    def dual_slack(self, y0: float, ye: np.ndarray) -> np.ndarray:
        # Z = C - A^T y with C = -J, A_0 = I, A_e = e_i e_j^T + e_j e_i^T
        z = -self.ones - y0 * np.eye(self.n)
        z[self.I, self.J] -= ye
        z[self.J, self.I] -= ye
        return z

    def a_op(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(self.m + 1)
        out[0] = np.trace(x)
        out[1:] = x[self.I, self.J] + x[self.J, self.I]
        return out

    def at_op(self, dy: np.ndarray) -> np.ndarray:
        out = dy[0] * np.eye(self.n)
        out[self.I, self.J] += dy[1:]
        out[self.J, self.I] += dy[1:]
        return out

    def schur(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        """M[k, l] = trace(A_k X A_l H) for the HKM direction."""
        I, J = self.I, self.J
        m = np.empty((self.m + 1, self.m + 1))
        hx = h @ x
        m[0, 0] = np.trace(hx)
        row = hx[J, I] + hx[I, J]
        m[0, 1:] = row
        m[1:, 0] = row
        if self.m:
            xi, xj, hi, hj = x[I], x[J], h[I], h[J]
            m[1:, 1:] = (xj[:, I] * hi[:, J] + xj[:, J] * hi[:, I]
                         + xi[:, I] * hj[:, J] + xi[:, J] * hj[:, I])
        return m


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest t with x + t*dx PSD (inf if dx keeps it PSD for all t)."""
    L = sla.cholesky(x, lower=True, check_finite=False)
    w = sla.solve_triangular(L, dx, lower=True, check_finite=False)
    w = sla.solve_triangular(L, w.T, lower=True, check_finite=False)
    lam = np.linalg.eigvalsh(0.5 * (w + w.T))[0]
    return math.inf if lam >= 0 else -1.0 / lam


def certified_lower(g: Graph, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Project ``x`` onto {trace 1, zero on edges, PSD}; return (objective, point)."""
    n = g.n
    xf = 0.5 * (x + x.T)
    for u, v in g.edges():
        xf[u, v] = xf[v, u] = 0.0
    tr = np.trace(xf)
    if not tr > 0:
        xf, tr = np.eye(n), float(n)
    xf = xf / tr
    lam = np.linalg.eigvalsh(xf)[0]
    floor = 1e-12
    if lam < floor:
        theta = (floor - lam) / (1.0 / n - lam)
        xf = (1.0 - theta) * xf + theta * np.eye(n) / n
    value = float(np.sum(xf)) - 4.0 * n * n * _EPS
    return value, xf


def certified_upper(g: Graph, ye: np.ndarray) -> float:
    """lambda_max(J + sum_e y_e A_e) plus a rounding allowance: a valid upper bound."""
    n = g.n
    edges = g.edges()
    b = np.ones((n, n))
    for (u, v), y in zip(edges, ye):
        b[u, v] += y
        b[v, u] += y
    lam = np.linalg.eigvalsh(b)[-1]
    return float(lam) + 16.0 * n * _EPS * (np.linalg.norm(b) + 1.0)


def lovasz_theta(
    g: Graph,
    gap_tol: float = 1e-8,
    *,
    stop_below: Optional[float] = None,
    max_iter: int = 500,
    step_fraction: float = 0.95,
) -> ThetaResult:
    """Lovasz number of ``g`` as a certified interval ``[lower, upper]``.

    ``stop_below`` ends the solve as soon as the certified upper bound drops
    below that value (used by the ratio search to drop uninteresting graphs);
    such results have ``stopped_early`` set.  If the iteration cap is hit or
    the iteration breaks down, one retry with shorter steps is made; failing
    that the best bounds found are returned with ``converged=False``.
    """
    if not 0 < gap_tol <= 1:
        raise ValueError("gap_tol must lie in (0, 1]")
    if g.n == 1:
        return ThetaResult(1.0, 1.0, np.ones((1, 1)), 0)
    result = _solve(g, gap_tol, stop_below, max_iter, step_fraction)
    if not result.converged and not result.stopped_early:
        retry = _solve(g, gap_tol, stop_below, max_iter, 0.7)
        if retry.converged or retry.stopped_early or retry.gap < result.gap:
            result = retry
    return result


def _solve(g, gap_tol, stop_below, max_iter, step_fraction) -> ThetaResult:
    p = _Problem(g)
    n, m = p.n, p.m
    b = np.zeros(m + 1)
    b[0] = 1.0
    eye = np.eye(n)
    x = eye / n
    y0, ye = -(n + 1.0), np.zeros(m)
    z = p.dual_slack(y0, ye)
    best_lower, best_x = certified_lower(g, x)
    best_upper = certified_upper(g, ye)
    it = 0
    converged = stopped = False
    while it < max_iter:
        gap = float(np.sum(x * z))
        # -y0 and sum(X) are the current dual and primal objective values
        if gap <= 0.5 * gap_tol:
            lo, xl = certified_lower(g, x)
            if lo > best_lower:
                best_lower, best_x = lo, xl
            best_upper = min(best_upper, certified_upper(g, ye))
            if best_upper - best_lower <= gap_tol:
                converged = True
                break
        if stop_below is not None and -y0 < stop_below - 1e-9:
            best_upper = min(best_upper, certified_upper(g, ye))
            if best_upper < stop_below:
                stopped = True
                break
        it += 1
        mu = gap / n
        try:
            lz = sla.cholesky(z, lower=True, check_finite=False)
            h = sla.cho_solve((lz, True), eye, check_finite=False)
            h = 0.5 * (h + h.T)
            schur = _factor(p.schur(x, h))
            rp = b - p.a_op(x)

            def direction(target: np.ndarray):
                # target is the complementarity residual to cancel: dX Z + X dZ = target
                tz = target @ h
                dy = schur(rp - p.a_op(tz))
                dz = -p.at_op(dy)
                dx = tz - x @ dz @ h
                return 0.5 * (dx + dx.T), dy, dz

            # predictor (affine scaling)
            xz = x @ z
            dxa, dya, dza = direction(-xz)
            apa = min(1.0, _max_step(x, dxa))
            ada = min(1.0, _max_step(z, dza))
            mu_aff = float(np.sum((x + apa * dxa) * (z + ada * dza))) / n
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
            # corrector with second-order term
            dx, dy, dz = direction(sigma * mu * eye - xz - dxa @ dza)
            ap = min(1.0, step_fraction * _max_step(x, dx))
            ad = min(1.0, step_fraction * _max_step(z, dz))
        except (NumericsError, np.linalg.LinAlgError, ValueError):
            break
        x = x + ap * dx
        y0 += ad * dy[0]
        ye = ye + ad * dy[1:]
        z = p.dual_slack(y0, ye)
    if not converged and not stopped:
        lo, xl = certified_lower(g, x)
        if lo > best_lower:
            best_lower, best_x = lo, xl
        best_upper = min(best_upper, certified_upper(g, ye))
        converged = best_upper - best_lower <= gap_tol
    # theta never exceeds n, so the clamp keeps the bound valid
    best_upper = min(best_upper, float(n))
    return ThetaResult(best_lower, best_upper, best_x, it, converged, stopped)


def _factor(mat: np.ndarray):
    """Return a solver for ``mat``; diagonal scaling tames near-degenerate optima."""
    d = 1.0 / np.sqrt(np.diag(mat))
    scaled = mat * d[:, None] * d[None, :]
    try:
        factor = cholesky(scaled)
        return lambda rhs: d * sla.cho_solve((factor, True), d * rhs, check_finite=False)
    except NumericsError:
        return lambda rhs: d * np.linalg.lstsq(scaled, d * rhs, rcond=None)[0]


# ---------------------------------------------------------------------------
# closed-form recognition for reports

@dataclass(frozen=True)
class ClosedForm:
    text: str
    value: float


def _surd_text(a: int, b: int, c: int, d: int) -> str:
    terms = []
    for coef, root in ((a, ""), (b, "sqrt(2)"), (c, "sqrt(5)")):
        if coef == 0:
            continue
        mag = abs(coef)
        body = root if root and mag == 1 else (f"{mag}*{root}" if root else str(mag))
        sign = "-" if coef < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    if d != 1:
        text = f"({text})/{d}" if len(terms) > 1 else f"{text}/{d}"
    return text


def recognize_algebraic(value: float, tol: float = 1e-6) -> Optional[ClosedForm]:
    """Match ``value`` to a small rational ``p/q`` or ``(a + b*sqrt2 + c*sqrt5)/d``.

    Rationals (q <= 12, |p| <= 144) are tried first, then surds with
    |a|, |b|, |c| <= 12 and d <= 12, simplest first.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    for q in range(1, 13):
        p = round(value * q)
        if abs(p) <= 144 and abs(value - p / q) <= tol:
            f = Fraction(p, q)
            text = str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
            return ClosedForm(text, float(f))
    r2, r5 = math.sqrt(2.0), math.sqrt(5.0)
    best = None
    for d in range(1, 13):
        for b in range(-12, 13):
            for c in range(-12, 13):
                if b == 0 and c == 0:
                    continue
                a = round(value * d - b * r2 - c * r5)
                if abs(a) > 12:
                    continue
                if math.gcd(math.gcd(abs(a), abs(b)), math.gcd(abs(c), d)) != 1:
                    continue
                exact = (a + b * r2 + c * r5) / d
                if abs(exact - value) <= tol:
                    cost = (d, abs(a) + abs(b) + abs(c))
                    if best is None or cost < best[0]:
                        best = (cost, ClosedForm(_surd_text(a, b, c, d), exact))
        if best is not None:
            return best[1]
    return None


def odd_cycle_theta(n: int) -> float:
    """Closed form for the Lovasz number of an odd cycle."""
    c = math.cos(math.pi / n)
    return n * c / (1.0 + c)
