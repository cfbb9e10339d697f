"""Dense symmetric linear algebra for the SDP solver.

Matrices are plain ``numpy`` arrays; :func:`sym_matrix` validates and
symmetrizes.  ``eigen_sym`` defaults to a cyclic Jacobi sweep, which is
accurate to working precision on the small (<= 16) matrices used here;
``method="lapack"`` dispatches to ``numpy.linalg.eigh`` for hot loops.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg as sla


class NumericsError(ArithmeticError):
    """Raised when an iteration fails to converge or a matrix is not SPD."""


def sym_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return 0.5 * (m + m.T)


def _jacobi(a: np.ndarray, max_sweeps: int = 64, rel_tol: float = 1e-13):
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= rel_tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) * 1e150 < abs(diff):
                    t = apq / diff  # theta huge; first-order rotation, avoids overflow
                else:
                    theta = diff / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/columns p and q
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NumericsError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def eigen_sym(m, method: str = "jacobi") -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""
    a = sym_matrix(m)
    if method == "jacobi":
        w, v = _jacobi(a)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown eigen method {method!r}")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def min_eigenvalue(m) -> float:
    return float(np.linalg.eigvalsh(sym_matrix(m))[0])


def is_psd(m, tol: float = 0.0, method: str = "jacobi") -> bool:
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    w, _ = eigen_sym(m, method=method)
    return bool(w[-1] >= -tol)


def cholesky(m) -> np.ndarray:
    """Lower Cholesky factor; raises on a pivot <= 1e-12 * max|m|."""
    a = sym_matrix(m)
    limit = 1e-12 * np.max(np.abs(a))
    try:
        L = sla.cholesky(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        L = None
    if L is None or limit == 0 or np.min(np.diag(L)) ** 2 <= limit:
        raise NumericsError("matrix is not positive definite within tolerance")
    return L


def solve_spd(m, rhs) -> np.ndarray:
    """Solve ``m x = rhs`` for symmetric positive definite ``m``."""
    L = cholesky(m)
    y = sla.solve_triangular(L, np.asarray(rhs, dtype=float), lower=True, check_finite=False)
    return sla.solve_triangular(L.T, y, lower=False, check_finite=False)
