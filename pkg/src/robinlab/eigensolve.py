"""Lowest eigenpairs of the sparse symmetric pencil Q x = mu M x.

Q is the shifted Robin form matrix (positive definite once the shift has
been chosen), M the mass matrix. Shift-invert Lanczos at zero with a sparse
LU factorization computes the lowest eigenvalues; mu converts back to the
physical eigenvalue through lambda = mu - c_alpha.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import eigsh

__all__ = ["Spectrum", "lowest_eigenpairs", "align_sign", "detect_simplicity"]


@dataclass
class Spectrum:
    """Sorted eigenpairs with residuals, gaps, and multiplicity flags.

    ``mu`` are the shifted eigenvalues, ``lam = mu - c_alpha`` the physical
    ones; ``vecs[:, j]`` is M-normalized. Gap j is relative between pairs
    (j, j+1); a pair is flagged numerically multiple when its gap to either
    neighbor falls below ``gap_tol``.
    """
    mu: np.ndarray
    lam: np.ndarray
    vecs: np.ndarray
    residuals: np.ndarray
    gaps: np.ndarray
    multiplicity_flags: np.ndarray
    c_alpha: float
    gap_tol: float = 1e-6

    def __len__(self):
        return len(self.mu)

    def pair(self, j):
        """1-based access: (mu_j, lam_j, vec_j)."""
        return self.mu[j - 1], self.lam[j - 1], self.vecs[:, j - 1]


def lowest_eigenpairs(Q, M, m, tol=1e-10, c_alpha=0.0, gap_tol=1e-6):
    """m lowest eigenpairs of Q x = mu M x, Q and M symmetric positive definite.

    Uses ARPACK shift-invert at zero (sparse LU of Q) with the deterministic
    all-ones start vector; falls back to a dense solve for small systems.
    Residuals ||Q u - mu M u|| / ||M u|| are checked against ``tol`` scaled
    by |mu|.
    """
    n = Q.shape[0]
    if m < 1:
        raise ValueError("need at least one eigenpair")
    if n <= max(3 * m, 60):
        w, v = linalg.eigh(Q.toarray(), M.toarray())
        mu, vecs = w[:m], v[:, :m]
    else:
        v0 = np.ones(n)
        mu, vecs = eigsh(Q, k=m, M=M, sigma=0.0, which="LM", v0=v0,
                         tol=min(tol * 1e-2, 1e-10), maxiter=5000)
    order = np.argsort(mu)
    mu, vecs = mu[order], vecs[:, order]
    # M-normalize and fix sign deterministically (largest entry positive)
    for j in range(vecs.shape[1]):
        u = vecs[:, j]
        nrm = float(u @ (M @ u))
        u /= np.sqrt(nrm)
        k = int(np.argmax(np.abs(u)))
        if u[k] < 0:
            u = -u
        vecs[:, j] = u
    Mv = M @ vecs
    Qv = Q @ vecs
    residuals = np.array([
        np.linalg.norm(Qv[:, j] - mu[j] * Mv[:, j]) / np.linalg.norm(Mv[:, j])
        for j in range(len(mu))
    ])
    scale = np.maximum(1.0, np.abs(mu))
    if np.any(residuals > tol * scale * 10.0):
        raise RuntimeError(
            f"eigensolver residual {residuals.max():.3e} exceeds tolerance")
    gaps = np.abs(np.diff(mu)) / np.abs(mu[:-1])
    flags = np.zeros(len(mu), dtype=bool)
    for j in range(len(mu)):
        lo = gaps[j - 1] if j > 0 else np.inf
        hi = gaps[j] if j < len(gaps) else np.inf
        flags[j] = min(lo, hi) < gap_tol
    return Spectrum(mu=mu, lam=mu - c_alpha, vecs=vecs, residuals=residuals,
                    gaps=gaps, multiplicity_flags=flags, c_alpha=c_alpha,
                    gap_tol=gap_tol)


def align_sign(u, ref, M):
    """Return u or -u so that the M-inner product with ref is nonnegative.

    If the inner product is negligible (below 1e-12 ||u|| ||ref|| in the
    M-norm) the vector is returned unchanged and a RuntimeWarning is issued.
    """
    u = np.asarray(u, dtype=float)
    ref = np.asarray(ref, dtype=float)
    ip = float(u @ (M @ ref))
    nu = np.sqrt(float(u @ (M @ u)))
    nr = np.sqrt(float(ref @ (M @ ref)))
    if abs(ip) < 1e-12 * nu * nr:
        warnings.warn("alignment reference is orthogonal to the eigenvector",
                      RuntimeWarning, stacklevel=2)
        return u
    return u if ip >= 0.0 else -u


def detect_simplicity(spectrum, j, gap_tol=1e-6):
    """True iff the 1-based j-th eigenvalue is simple at tolerance gap_tol."""
    if not 1 <= j <= len(spectrum):
        raise IndexError("eigenvalue index out of range")
    if j == len(spectrum):
        raise IndexError("need at least one eigenvalue above j to decide")
    lo = spectrum.gaps[j - 2] if j >= 2 else np.inf
    hi = spectrum.gaps[j - 1]
    return bool(min(lo, hi) >= gap_tol)
