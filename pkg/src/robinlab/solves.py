"""Linear solves on the assembled forms: flux (torsion) problems, resolvents,
harmonic extension into the hole, and extremal trace constants.

All solves share one sparse LU factorization of the coercive matrix Q per
(mesh, shift) pair; a factorization is immutable and reusable across right-
hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh, splu

from .assembly import AssembledForms, FluxLoad

__all__ = [
    "QFactorization",
    "TorsionResult",
    "solve_flux_problem",
    "torsion_sup_check",
    "solve_resolvent",
    "harmonic_extension",
    "trace_constant",
]


@dataclass
class QFactorization:
    """Sparse LU of Q = K + c M + alpha B for a fixed forms object."""
    forms: AssembledForms
    Q: sparse.csr_matrix = field(default=None, repr=False)
    _lu: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.forms.c_alpha is None:
            raise ValueError("forms carry no shift; run choose_c_alpha first")
        self.Q = self.forms.q_matrix()
        self._lu = splu(self.Q.tocsc())

    def solve(self, rhs):
        return self._lu.solve(np.asarray(rhs, dtype=float))


def _as_factorization(forms):
    if isinstance(forms, QFactorization):
        return forms
    return QFactorization(forms)


@dataclass
class TorsionResult:
    """Solution of q(V, v) = L(v) and its torsional rigidity.

    ``T_eps`` is the load pairing L(V); ``energy`` the quadratic form value
    q(V, V). The two agree to solver precision, which the harness asserts.
    """
    V: np.ndarray
    T_eps: float
    energy: float
    L_of_V: float
    data_description: str = ""


def solve_flux_problem(forms, load: FluxLoad):
    """Solve Q V = ell for the flux data in ``load``; returns TorsionResult."""
    fac = _as_factorization(forms)
    if len(load.vec) != fac.Q.shape[0]:
        raise ValueError("load vector does not match the factorized system")
    V = fac.solve(load.vec)
    l_of_v = float(load.vec @ V)
    energy = float(V @ (fac.Q @ V))
    return TorsionResult(V=V, T_eps=l_of_v, energy=energy, L_of_V=l_of_v,
                         data_description=load.description)


def torsion_sup_check(forms, load: FluxLoad, trials=200, seed=0, result=None):
    """Max of (L(u))^2 / q(u, u) over random vectors and the solution itself.

    By the variational characterization the sup equals T_eps and is attained
    at V; the returned maximum therefore equals T_eps up to rounding, and
    every random ratio must stay below it.
    """
    fac = _as_factorization(forms)
    if result is None:
        result = solve_flux_problem(fac, load)
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(int(trials)):
        u = rng.standard_normal(fac.Q.shape[0])
        qu = float(u @ (fac.Q @ u))
        lu = float(load.vec @ u)
        best = max(best, lu * lu / qu)
    ratio_v = (result.L_of_V ** 2 / result.energy) if result.energy > 0 else 0.0
    return max(best, ratio_v)


def solve_resolvent(forms, f):
    """Solve Q u = M f; ``f`` is a nodal vector or a callable f(x, y)."""
    fac = _as_factorization(forms)
    mesh = fac.forms.mesh
    if callable(f):
        if mesh is None:
            raise ValueError("callable data needs forms assembled from a mesh")
        f = f(mesh.vertices[:, 0], mesh.vertices[:, 1])
    f = np.asarray(f, dtype=float)
    return fac.solve(fac.forms.M @ f)


def harmonic_extension(hole_mesh, trace):
    """Discrete harmonic extension of boundary data into a meshed hole.

    ``trace`` is a full-length nodal array whose boundary entries carry the
    Dirichlet data (interior entries are ignored). Returns the extension and
    its gradient energy int |grad u|^2.
    """
    from .assembly import assemble

    forms = assemble(hole_mesh, alpha=0.0)
    K = forms.K.tocsr()
    nb = hole_mesh.boundary_vertices()
    interior = np.setdiff1d(np.arange(len(hole_mesh.vertices)), nb)
    if len(interior) == 0:
        raise ValueError("hole mesh has no interior vertices")
    u = np.zeros(len(hole_mesh.vertices))
    u[nb] = np.asarray(trace, dtype=float)[nb]
    Kii = K[interior][:, interior].tocsc()
    Kib = K[interior][:, nb]
    u[interior] = splu(Kii).solve(-Kib @ u[nb])
    energy = float(u @ (K @ u))
    return u, energy


def trace_constant(forms):
    """Best constant tau in int_{hole boundary} u^2 <= tau ||u||_{H1}^2.

    Computed as the largest eigenvalue of B_hole x = tau (K + M) x. Returns
    0 when the mesh has no HOLE edges.
    """
    B = forms.B_hole
    if B.nnz == 0:
        return 0.0
    A = (forms.K + forms.M).tocsc()
    n = A.shape[0]
    v0 = np.ones(n)
    w = eigsh(B, k=1, M=A, which="LA", v0=v0, return_eigenvectors=False,
              maxiter=5000)
    return float(w[0])
