"""P1 finite-element matrices for the shifted Robin bilinear form.

The discrete form is Q = K + c M + alpha (B_outer + B_hole): stiffness, mass,
and the two boundary-mass matrices over the tagged boundary components.
Interior integrals are exact for P1; boundary masses are exact on straight
edges; flux loads use 2-point Gauss per edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import eigsh

from .geometry import HOLE, OUTER

__all__ = [
    "AssembledForms",
    "FluxLoad",
    "assemble",
    "assemble_flux_load",
    "choose_c_alpha",
    "dump_matrix",
]


@dataclass
class AssembledForms:
    """Sparse symmetric matrices of one mesh, plus the Robin data.

    ``c_alpha`` is None until a coercive shift has been chosen; ``q_matrix``
    then assembles Q = K + c M + alpha (B_outer + B_hole).
    """
    K: sparse.csr_matrix
    M: sparse.csr_matrix
    B_outer: sparse.csr_matrix
    B_hole: sparse.csr_matrix
    alpha: float
    c_alpha: float = None
    mesh: object = None

    @property
    def n(self):
        return self.K.shape[0]

    def q_matrix(self, c=None):
        c = self.c_alpha if c is None else c
        if c is None:
            raise ValueError("no shift set; run choose_c_alpha or pass c")
        return (self.K + c * self.M + self.alpha * (self.B_outer + self.B_hole)).tocsr()

    def with_shift(self, c):
        return AssembledForms(self.K, self.M, self.B_outer, self.B_hole,
                              self.alpha, c_alpha=float(c), mesh=self.mesh)


@dataclass
class FluxLoad:
    """Load vector ell_i = int_Gamma g phi_i over one tagged boundary."""
    vec: np.ndarray
    tag: str
    description: str = ""


def _edge_normals(mesh):
    """Outward unit normal per boundary edge, from the adjacent triangle.

    The normal points away from the triangle that owns the edge, i.e. out of
    the meshed domain; on HOLE edges this is into the hole.
    """
    owner_third = {}
    for tri in mesh.triangles:
        for a, b, c in ((tri[0], tri[1], tri[2]), (tri[1], tri[2], tri[0]),
                        (tri[2], tri[0], tri[1])):
            owner_third[(min(a, b), max(a, b))] = c
    normals = np.empty((len(mesh.boundary_edges), 2))
    for i, (a, b) in enumerate(mesh.boundary_edges):
        pa, pb = mesh.vertices[a], mesh.vertices[b]
        c = owner_third[(min(a, b), max(a, b))]
        t = pb - pa
        n = np.array([t[1], -t[0]])
        n /= math.hypot(n[0], n[1])
        mid = 0.5 * (pa + pb)
        if np.dot(n, mesh.vertices[c] - mid) > 0.0:
            n = -n
        normals[i] = n
    return normals


def assemble(mesh, alpha):
    """Assemble K, M, B_outer, B_hole for a mesh (no shift chosen yet)."""
    p = mesh.vertices[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    # edge vectors opposite each local vertex: b_i = y_j - y_k, c_i = x_k - x_j
    bvec = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    cvec = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area2 = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    if np.any(area2 <= 0.0):
        raise ValueError("degenerate or inverted triangle in assembly")
    area = 0.5 * area2
    ke = (bvec[:, :, None] * bvec[:, None, :] + cvec[:, :, None] * cvec[:, None, :])
    ke = ke / (4.0 * area)[:, None, None]
    me_ref = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0
    me = area[:, None, None] * me_ref[None, :, :]

    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = len(mesh.vertices)
    K = sparse.coo_matrix((ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((me.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    def boundary_mass(tag):
        idx = [i for i, t in enumerate(mesh.tags) if t == tag]
        if not idx:
            return sparse.csr_matrix((n, n))
        e = mesh.boundary_edges[idx]
        d = mesh.vertices[e[:, 1]] - mesh.vertices[e[:, 0]]
        L = np.hypot(d[:, 0], d[:, 1])
        be_ref = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
        be = L[:, None, None] * be_ref[None, :, :]
        r = np.repeat(e, 2, axis=1).ravel()
        c = np.tile(e, (1, 2)).ravel()
        return sparse.coo_matrix((be.ravel(), (r, c)), shape=(n, n)).tocsr()

    return AssembledForms(K, M, boundary_mass(OUTER), boundary_mass(HOLE),
                          float(alpha), mesh=mesh)


_GAUSS2 = (-1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0))


def assemble_flux_load(mesh, tag, g, description=""):
    """Load vector for boundary data g over the edges of one tag.

    ``g(points, normals)`` receives (q, 2) arrays of quadrature points and
    outward unit normals (outward for the meshed domain: into the hole on
    HOLE edges) and returns (q,) values. 2-point Gauss per edge, exact for
    data varying cubically along an edge.
    """
    if tag not in (OUTER, HOLE):
        raise ValueError(f"unknown boundary tag {tag!r}")
    n = len(mesh.vertices)
    vec = np.zeros(n)
    normals = _edge_normals(mesh)
    idx = [i for i, t in enumerate(mesh.tags) if t == tag]
    for i in idx:
        a, b = mesh.boundary_edges[i]
        pa, pb = mesh.vertices[a], mesh.vertices[b]
        L = math.hypot(*(pb - pa))
        mid = 0.5 * (pa + pb)
        half = 0.5 * (pb - pa)
        pts = np.array([mid + s * half for s in _GAUSS2])
        nrm = np.tile(normals[i], (2, 1))
        gv = np.asarray(g(pts, nrm), dtype=float)
        w = 0.5 * L  # each Gauss point carries half the edge length
        for q, s in enumerate(_GAUSS2):
            vec[a] += w * gv[q] * 0.5 * (1.0 - s)
            vec[b] += w * gv[q] * 0.5 * (1.0 + s)
    return FluxLoad(vec=vec, tag=tag, description=description)


def smallest_mu(Q, M, v0=None, dense_cutoff=800):
    """Smallest eigenvalue of the symmetric pencil (Q, M), M positive definite.

    Dense for small problems. For larger ones the pencil is made positive
    definite by a diagonal-bound shift, then shift-invert Lanczos at zero
    targets its smallest eigenvalue.
    """
    n = Q.shape[0]
    if n <= dense_cutoff:
        w = linalg.eigh(Q.toarray(), M.toarray(), eigvals_only=True,
                        subset_by_index=(0, 0))
        return float(w[0])
    tau = 1.0 + 4.0 * float(np.abs(Q).sum(axis=1).max()) / float(M.diagonal().min())
    v0 = np.ones(n) if v0 is None else v0
    w = eigsh(Q + tau * M, k=1, M=M, sigma=0.0, which="LM", v0=v0,
              return_eigenvectors=False)
    return float(w[0]) - tau


def choose_c_alpha(forms, threshold=1.05, max_doublings=60):
    """Smallest shift c in 1, 2, 4, ... making the q-form safely coercive.

    Returns ``(c, mu_1)`` where mu_1 > threshold is the smallest eigenvalue
    of (K + c M + alpha B) x = mu M x, recorded as a coercivity certificate.
    """
    c = 1.0
    for _ in range(max_doublings):
        mu1 = smallest_mu(forms.q_matrix(c), forms.M)
        if mu1 > threshold:
            return c, mu1
        c *= 2.0
    raise RuntimeError("no coercive shift within the doubling budget")


def dump_matrix(mat, path):
    """Write a sparse matrix as 'row col value' text lines."""
    coo = sparse.coo_matrix(mat)
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as f:
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            f.write(f"{r} {c} {float(v)!r}\n")
