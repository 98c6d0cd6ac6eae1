"""Adjacency spectra: lambda(G), signed spectral radius, full spectra.

Small graphs go through dense ``eigh``; above ``dense_threshold`` vertices
the extremal eigenvalues come from ARPACK's implicitly restarted Lanczos
(``scipy.sparse.linalg.eigsh``) applied matrix-free.  For connected regular
graphs the all-ones eigenvector is deflated before searching for lambda_2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import SizeExceededError, SolverError
from .graph import Graph, is_connected, regular_degree

DENSE_THRESHOLD = 3000
DENSE_TOL = 1e-8
ITERATIVE_TOL = 1e-6


def ramanujan_bound(d: int) -> float:
    return 2 * math.sqrt(d - 1)


@dataclass
class SpectralSummary:
    lambda1: float
    lambda2: float
    lambda_min: float
    method: str
    residual: float
    tolerance: float

    @property
    def lam(self) -> float:
        """``max(lambda_2, |lambda_min|)``."""
        return max(self.lambda2, abs(self.lambda_min))

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1, "lambda2": self.lambda2, "lambda_min": self.lambda_min,
            "lambda": self.lam, "method": self.method,
            "residual": self.residual, "tolerance": self.tolerance,
        }


def signed_adjacency_matrix(g: Graph, w) -> sp.csr_matrix:
    """Adjacency with entry (u, v) = sum of signs over the u-v edges (loops: 2w)."""
    w = check_signing(g, w)
    indptr, dst, eid = g.incidence_arrays()
    mat = sp.csr_matrix((w[eid].astype(np.float64), dst, indptr), shape=(g.n, g.n))
    mat.sum_duplicates()
    return mat


def check_signing(g: Graph, w) -> np.ndarray:
    w = np.asarray(w)
    if w.shape != (g.m,):
        raise ValueError(f"signing has {w.size} entries but the graph has {g.m} edges")
    if not np.all((w == 1) | (w == -1)):
        raise ValueError("signing entries must be +1 or -1")
    return w.astype(np.int8)


def _residual(A, vals, vecs) -> float:
    vecs = np.atleast_2d(vecs.T).T
    r = A @ vecs - vecs * np.asarray(vals)
    return float(np.max(np.linalg.norm(r, axis=0))) if r.size else 0.0


def _eigsh(op, k, which, tol, maxiter):
    n = op.shape[0]
    ncv = min(n, max(2 * k + 1, 40))
    v0 = np.random.default_rng(12345).standard_normal(n)
    try:
        return eigsh(op, k=k, which=which, tol=tol, ncv=ncv, maxiter=maxiter, v0=v0)
    except ArpackNoConvergence as exc:
        res = math.nan
        if len(exc.eigenvalues):
            res = _residual(op, exc.eigenvalues, exc.eigenvectors)
        raise SolverError(f"eigsh ({which}) did not converge", residual=res) from exc


def _dense(A) -> np.ndarray:
    return A.toarray() if sp.issparse(A) else np.asarray(A)


def _dense_summary(A, tol):
    vals, vecs = np.linalg.eigh(_dense(A))
    n = len(vals)
    picks = [n - 1, max(n - 2, 0), 0]
    res = _residual(A, vals[picks], vecs[:, picks])
    lam2 = vals[-2] if n >= 2 else vals[0]
    return SpectralSummary(float(vals[-1]), float(lam2), float(vals[0]), "dense", res, tol)


def spectrum_summary(g: Graph, tol: float | None = None,
                     dense_threshold: int = DENSE_THRESHOLD, maxiter: int | None = None) -> SpectralSummary:
    """Extremal adjacency eigenvalues of ``g``.

    Raises:
        SolverError: the iterative path failed to converge.
    """
    if g.n < 1:
        raise ValueError("spectrum of an empty graph is undefined")
    A = g.adjacency_matrix()
    if g.n <= dense_threshold:
        return _dense_summary(A, DENSE_TOL if tol is None else tol)
    tol = ITERATIVE_TOL if tol is None else tol
    maxiter = maxiter or 20 * g.n
    top_val, top_vec = _eigsh(A, 1, "LA", tol, maxiter)
    low_val, low_vec = _eigsh(A, 1, "SA", tol, maxiter)
    d = regular_degree(g)
    if d is not None and is_connected(g):
        n = g.n
        deflated = LinearOperator((n, n), dtype=np.float64,
                                  matvec=lambda x: A @ x - d * np.mean(x, axis=0))
        sec_val, sec_vec = _eigsh(deflated, 1, "LA", tol, maxiter)
        lam2 = float(sec_val[0])
    else:
        sec_val, sec_vec = _eigsh(A, 2, "LA", tol, maxiter)
        order = np.argsort(sec_val)
        sec_val, sec_vec = sec_val[order][:1], sec_vec[:, order][:, :1]
        lam2 = float(sec_val[0])
    res = max(_residual(A, top_val, top_vec), _residual(A, low_val, low_vec),
              _residual(A, sec_val, sec_vec))
    return SpectralSummary(float(top_val[0]), lam2, float(low_val[0]), "iterative", res, tol)


def lambda_of(g: Graph, tol: float | None = None) -> float:
    return spectrum_summary(g, tol=tol).lam


def signed_spectral_radius(g: Graph, w, tol: float | None = None,
                           dense_threshold: int = DENSE_THRESHOLD, maxiter: int | None = None) -> float:
    """Largest absolute eigenvalue of the signed adjacency matrix."""
    S = signed_adjacency_matrix(g, w)
    if g.n == 0:
        return 0.0
    if g.n <= dense_threshold:
        vals = np.linalg.eigvalsh(_dense(S))
        return float(np.max(np.abs(vals)))
    tol = ITERATIVE_TOL if tol is None else tol
    maxiter = maxiter or 20 * g.n
    hi, _ = _eigsh(S, 1, "LA", tol, maxiter)
    lo, _ = _eigsh(S, 1, "SA", tol, maxiter)
    return float(max(abs(hi[0]), abs(lo[0])))


def full_spectrum(g: Graph, w=None, dense_threshold: int = DENSE_THRESHOLD) -> np.ndarray:
    """All eigenvalues in descending order (of the signed matrix when ``w`` is given)."""
    if g.n > dense_threshold:
        raise SizeExceededError(f"full spectrum limited to n <= {dense_threshold}, got n={g.n}")
    A = g.adjacency_matrix() if w is None else signed_adjacency_matrix(g, w)
    return np.linalg.eigvalsh(_dense(A))[::-1]
