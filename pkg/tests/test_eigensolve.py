"""Generalized eigensolver contracts, alignment, and simplicity detection."""

import numpy as np
import pytest
from scipy import sparse

from robinlab import assembly, eigensolve, geometry, oracle, ratefit

DISK_ALPHA1_M0_J1 = 1.5769927308086067


def _disk_spectrum(n, m=6, alpha=1.0, c=1.0):
    mesh = geometry.build_disk_mesh(1.0, n, 4 * n)
    forms = assembly.assemble(mesh, alpha).with_shift(c)
    return eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M, m, c_alpha=c)


class TestLowestEigenpairs:
    def test_diagonal_pencil(self):
        Q = sparse.diags([1.0, 2.0, 3.0]).tocsr()
        M = sparse.identity(3, format="csr")
        spec = eigensolve.lowest_eigenpairs(Q, M, 3)
        assert np.allclose(spec.mu, [1.0, 2.0, 3.0], atol=1e-12)
        assert np.allclose(np.abs(spec.vecs), np.eye(3), atol=1e-12)

    def test_neumann_ground_state_is_shift(self):
        # alpha = 0: K 1 = 0, so mu_1 = c exactly up to rounding
        c = 2.0
        mesh = geometry.build_rect_mesh(1.0, 0.2, 12)
        forms = assembly.assemble(mesh, 0.0).with_shift(c)
        spec = eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M, 3,
                                            c_alpha=c)
        assert spec.mu[0] == pytest.approx(c, abs=1e-10)
        assert spec.lam[0] == pytest.approx(0.0, abs=1e-10)

    def test_disk_extrapolated_matches_oracle(self):
        vals = [_disk_spectrum(n).lam[0] for n in (16, 32)]
        lam = ratefit.richardson(vals).value
        assert lam == pytest.approx(DISK_ALPHA1_M0_J1, abs=1e-6)

    def test_rayleigh_consistency_and_residuals(self):
        tol = 1e-10
        mesh = geometry.build_annulus_mesh(1.0, 0.3, 6, 32)
        forms = assembly.assemble(mesh, 1.0).with_shift(1.0)
        Q, M = forms.q_matrix(), forms.M
        spec = eigensolve.lowest_eigenpairs(Q, M, 5, tol=tol, c_alpha=1.0)
        for j in range(5):
            u = spec.vecs[:, j]
            rq = float(u @ (Q @ u)) / float(u @ (M @ u))
            assert abs(rq - spec.mu[j]) <= 10 * tol * max(1.0, abs(spec.mu[j]))
        assert np.all(spec.residuals <= 10 * tol * np.maximum(1.0, np.abs(spec.mu)))

    def test_m_orthonormality(self):
        mesh = geometry.build_annulus_mesh(1.0, 0.3, 6, 32)
        forms = assembly.assemble(mesh, 1.0).with_shift(1.0)
        spec = eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M, 5,
                                            c_alpha=1.0)
        G = spec.vecs.T @ (forms.M @ spec.vecs)
        assert np.abs(G - np.eye(5)).max() < 1e-8

    def test_monotone_convergence_under_refinement(self):
        # conforming P1 eigenvalues decrease toward the limit as h -> 0
        vals = [_disk_spectrum(n).lam[0] for n in (8, 16, 32)]
        assert vals[0] >= vals[1] - 1e-10
        assert vals[1] >= vals[2] - 1e-10
        assert vals[2] >= DISK_ALPHA1_M0_J1 - 1e-10

    def test_bad_count(self):
        Q = sparse.identity(3, format="csr")
        with pytest.raises(ValueError):
            eigensolve.lowest_eigenpairs(Q, Q, 0)


class TestAlignSign:
    def setup_method(self):
        self.M = sparse.identity(4, format="csr")
        self.u = np.array([1.0, 2.0, 0.0, -1.0])

    def test_identity(self):
        out = eigensolve.align_sign(self.u, self.u, self.M)
        assert np.array_equal(out, self.u)

    def test_flip(self):
        out = eigensolve.align_sign(self.u, -self.u, self.M)
        assert np.array_equal(out, -self.u)

    def test_orthogonal_warns(self):
        ref = np.array([2.0, -1.0, 0.0, 0.0])
        assert abs(self.u @ ref) < 1e-14
        with pytest.warns(RuntimeWarning):
            out = eigensolve.align_sign(self.u, ref, self.M)
        assert np.array_equal(out, self.u)


class TestSimplicity:
    def test_disk_ground_state_simple(self):
        spec = _disk_spectrum(12)
        assert eigensolve.detect_simplicity(spec, 1)

    def test_disk_m1_pair_multiple(self):
        # the m = 1 eigenvalue is double; the structured mesh preserves the
        # degeneracy to rounding, so the pair is flagged numerically multiple
        spec = _disk_spectrum(12)
        assert not eigensolve.detect_simplicity(spec, 2)
        assert not eigensolve.detect_simplicity(spec, 3)
        assert spec.multiplicity_flags[1] and spec.multiplicity_flags[2]

    def test_rectangle_modes_all_simple(self):
        mesh = geometry.build_rect_mesh(1.0, 0.79, 24)
        forms = assembly.assemble(mesh, 1.0).with_shift(1.0)
        spec = eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M, 6,
                                            c_alpha=1.0)
        for j in range(1, 6):
            assert eigensolve.detect_simplicity(spec, j)

    def test_index_errors(self):
        spec = _disk_spectrum(8, m=3)
        with pytest.raises(IndexError):
            eigensolve.detect_simplicity(spec, 0)
        with pytest.raises(IndexError):
            eigensolve.detect_simplicity(spec, 3)

    def test_pair_accessor(self):
        spec = _disk_spectrum(8, m=3)
        mu, lam, vec = spec.pair(1)
        assert mu == spec.mu[0] and lam == spec.lam[0]
        assert np.array_equal(vec, spec.vecs[:, 0])


def test_rectangle_fem_matches_separable_oracle():
    # 5 lowest modes of the 2.0 x 1.58 Robin rectangle (alpha = 1): the
    # h-extrapolated FEM values agree with the 1D-product oracle to 1e-5
    ax, ay, alpha = 1.0, 0.79, 1.0
    oracle_vals = sorted(
        oracle.interval_robin_eigen(p, alpha, 2 * ax)[0]
        + oracle.interval_robin_eigen(q, alpha, 2 * ay)[0]
        for p in range(1, 4) for q in range(1, 4))[:5]
    levels = []
    for n in (24, 48, 96):
        mesh = geometry.build_rect_mesh(ax, ay, n)
        forms = assembly.assemble(mesh, alpha).with_shift(1.0)
        spec = eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M, 7,
                                            c_alpha=1.0)
        levels.append(spec.lam[:5])
    for j in range(5):
        fem = ratefit.richardson([lv[j] for lv in levels]).value
        assert fem == pytest.approx(oracle_vals[j], rel=1e-5)
