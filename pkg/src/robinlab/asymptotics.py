"""Closed-form predictions for the eigenvalue variation and their ingredients.

Covers the leading coefficient and exponent of lambda_eps - lambda_0 for
each regime (hole off / on the nodal set, generic / round hole, N = 2 and
the N >= 3 formula evaluators), the explicit annulus solution of the
Neumann-data flux problem and its rigidity, the small-hole integrals of an
analytic field, and the residual of the eigenvalue-variation identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Disk, Rect
from .oracle import ConstantField, DiskModeField, HarmonicPolyField

__all__ = [
    "ExpansionPrediction",
    "HoleIntegrals",
    "predict",
    "ttilde_ball",
    "grad_pk_ball",
    "wer_eval",
    "torsion_wer",
    "hole_integrals",
    "expansion_residual",
    "residual_ratio",
]


@dataclass(frozen=True)
class ExpansionPrediction:
    """Leading term C * eps^p of one theorem's expansion.

    ``bound_only`` marks one-sided order bounds (no coefficient); the
    assumptions record keeps the inputs the formula was evaluated with.
    """
    theorem_id: str
    p: float
    C: float = None
    bound_only: bool = False
    assumptions: dict = field(default_factory=dict)

    def value(self, eps):
        if self.bound_only:
            raise ValueError(f"{self.theorem_id} is an order bound only")
        return self.C * float(eps) ** self.p


def _angular_sq_integral(k, a, b):
    """Integral over the unit circle of (a cos k t + (b/k) sin k t)^2."""
    return math.pi * (a * a + b * b / (k * k))


def predict(theorem_id, **inp):
    """Evaluate the closed-form leading term of one tagged expansion.

    Supported ids and required inputs (N defaults to 2):
      T2.2: alpha, perimeter, u0          -> C = alpha * perimeter * u0^2, p = N-1
      T2.9: k, r1, a, b                   -> C = -2 k pi r1^(2k) (a^2+b^2/k^2), p = 2k
      P6.7: k, r1, a, b                   -> C = +k pi r1^(2k) (a^2+b^2/k^2), p = 2k
      T2.8: N, k, r1, boundary_integral    -> round hole, N >= 3
      P6.1: N, k, r1, boundary_integral    -> exterior torsion of the ball
      T2.3: N, k, ttilde, grad_pk_sigma    -> C = -(ttilde + grad term), N >= 3
      T2.4: k, delta                       -> order bound eps^(2k - delta), N = 2

    Hypothesis violations (wrong k, wrong hole shape, N out of range) raise.
    """
    N = int(inp.get("N", 2))
    if theorem_id == "T2.2":
        k = int(inp.get("k", 0))
        if k != 0:
            raise ValueError("T2.2 requires a mode not vanishing at the center")
        C = inp["alpha"] * inp["perimeter"] * inp["u0"] ** 2
        return ExpansionPrediction("T2.2", p=N - 1, C=C, assumptions=dict(inp))
    if theorem_id in ("T2.9", "P6.7"):
        k, r1 = int(inp["k"]), float(inp["r1"])
        if k < 1:
            raise ValueError(f"{theorem_id} requires vanishing order k >= 1")
        if N != 2:
            raise ValueError(f"{theorem_id} is the N = 2 round-hole expansion")
        base = k * math.pi * r1 ** (2 * k) * (inp["a"] ** 2 + inp["b"] ** 2 / k ** 2)
        C = -2.0 * base if theorem_id == "T2.9" else base
        return ExpansionPrediction(theorem_id, p=2 * k, C=C, assumptions=dict(inp))
    if theorem_id == "T2.8":
        k, r1 = int(inp["k"]), float(inp["r1"])
        if N < 3 or k < 1:
            raise ValueError("T2.8 requires N >= 3 and k >= 1")
        I = float(inp["boundary_integral"])
        C = -k * (N + 2 * k - 2) / (N + k - 2) * r1 ** (N + 2 * k - 2) * I
        return ExpansionPrediction("T2.8", p=N + 2 * k - 2, C=C, assumptions=dict(inp))
    if theorem_id == "P6.1":
        val = ttilde_ball(N, int(inp["k"]), float(inp["r1"]),
                          float(inp["boundary_integral"]))
        return ExpansionPrediction("P6.1", p=N + 2 * int(inp["k"]) - 2, C=val,
                                   assumptions=dict(inp))
    if theorem_id == "T2.3":
        k = int(inp["k"])
        if N < 3 or k < 1:
            raise ValueError("T2.3 requires N >= 3 and k >= 1")
        C = -(float(inp["ttilde"]) + float(inp["grad_pk_sigma"]))
        return ExpansionPrediction("T2.3", p=N + 2 * k - 2, C=C, assumptions=dict(inp))
    if theorem_id == "T2.4":
        k = int(inp["k"])
        if k < 1:
            raise ValueError("T2.4 requires k >= 1")
        delta = float(inp.get("delta", 0.15))
        return ExpansionPrediction("T2.4", p=2 * k - delta, bound_only=True,
                                   assumptions=dict(inp))
    raise ValueError(f"unknown theorem id {theorem_id!r}")


def ttilde_ball(N, k, r1, boundary_integral):
    """Exterior torsion of the ball hole: k^2 r1^(N+2k-2)/(N+k-2) * int |P_k|^2.

    Only provided for N >= 3; the planar exterior problem has no such
    closed form and the N = 2 route goes through the annulus rigidity.
    """
    if N < 3:
        raise ValueError("exterior torsion formula requires N >= 3")
    if k < 1:
        raise ValueError("requires vanishing order k >= 1")
    return k * k * r1 ** (N + 2 * k - 2) / (N + k - 2) * boundary_integral


def grad_pk_ball(N, k, r1, boundary_integral):
    """int_{B_r1} |grad P_k|^2 = k r1^(N+2k-2) int_{bd B_1} |P_k|^2 (P_k harmonic)."""
    if k < 1:
        raise ValueError("requires k >= 1")
    return k * r1 ** (N + 2 * k - 2) * boundary_integral


# ----------------------------------------------------------------------------
# Explicit annulus solution with Neumann hole data
# ----------------------------------------------------------------------------

def _wer_radial(eps, R, r1, alpha, k, r):
    num = (alpha * R - k) * r ** k - (alpha * R + k) * R ** (2 * k) * r ** (-float(k))
    den = (alpha * R + k) * R ** (2 * k) + (alpha * R - k) * r1 ** (2 * k) * eps ** (2 * k)
    return r1 ** (2 * k) * num / den * eps ** (2 * k)


def _check_wer_args(eps, R, r1, alpha, k):
    if k < 1:
        raise ValueError("k must be >= 1")
    if eps <= 0 or r1 <= 0 or R <= eps * r1:
        raise ValueError("need 0 < eps*r1 < R")
    if abs(alpha * R + k) < 1e-12 * (abs(alpha * R) + k):
        raise ValueError("R = -k/alpha is excluded")


def wer_eval(eps, R, r1, alpha, k, a, b, r, theta):
    """Explicit harmonic solution on {eps r1 < r < R}: Robin outer, Neumann inner.

    The inner Neumann data is the normal derivative of the harmonic
    polynomial P_k(r, t) = r^k (a cos kt + (b/k) sin kt), with the normal of
    the perforated domain (pointing toward the center).
    """
    _check_wer_args(eps, R, r1, alpha, k)
    r = np.asarray(r, dtype=float)
    if np.any(r < eps * r1 * (1 - 1e-12)) or np.any(r > R * (1 + 1e-12)):
        raise ValueError("radius outside [eps*r1, R]")
    t = np.asarray(theta, dtype=float)
    f = a * np.cos(k * t) + (b / k) * np.sin(k * t)
    return _wer_radial(eps, R, r1, alpha, k, r) * f


def torsion_wer(eps, R, r1, alpha, k, a, b, n_quad=512):
    """Rigidity of the explicit solution: int over the hole circle of
    (d_nu P_k) W dsigma, by trapezoid quadrature in the angle (spectrally
    exact for trigonometric polynomials)."""
    _check_wer_args(eps, R, r1, alpha, k)
    rho = eps * r1
    t = 2.0 * math.pi * np.arange(n_quad) / n_quad
    f = a * np.cos(k * t) + (b / k) * np.sin(k * t)
    # d_nu P_k = -d_r P_k = -k rho^(k-1) f(theta) on the hole circle
    integrand = -k * rho ** (k - 1) * f * _wer_radial(eps, R, r1, alpha, k, rho) * f
    return float(np.sum(integrand) * rho * 2.0 * math.pi / n_quad)


# ----------------------------------------------------------------------------
# Small-hole integrals of an analytic field
# ----------------------------------------------------------------------------

@dataclass
class HoleIntegrals:
    """The three hole integrals and their leading-order predictions (N = 2)."""
    grad_sq: float
    mass_sq: float
    boundary_sq: float
    pred_grad_sq: float
    pred_mass_sq: float
    pred_boundary_sq: float


class _RadialQuad:
    """Taylor polynomial A (x^2 + y^2) of a radial mode around its center."""

    def __init__(self, A):
        self.A = float(A)

    def value(self, x, y):
        return self.A * (np.asarray(x) ** 2 + np.asarray(y) ** 2)

    def grad(self, x, y):
        return 2.0 * self.A * np.asarray(x), 2.0 * self.A * np.asarray(y)


def local_expansion(fld):
    """(u0, ell, P) of a field at the origin: u - u0 = P + O(|x|^{ell+1}).

    P is the first nonvanishing Taylor polynomial of u - u(0), the quantity
    steering the small-hole integrals. Supported for disk-mode, harmonic-
    polynomial, and constant fields.
    """
    if isinstance(fld, DiskModeField):
        td = fld.taylor_data()
        if td.k >= 1:
            return 0.0, td.k, HarmonicPolyField(td.k, td.a, td.b)
        # radial mode: u - u(0) = -c lam r^2 / 4 + O(r^4)
        return td.value, 2, _RadialQuad(-td.value * fld.lam / 4.0)
    if isinstance(fld, HarmonicPolyField):
        return 0.0, fld.k, fld
    if isinstance(fld, ConstantField):
        return fld.c, 0, None
    raise TypeError(f"no local expansion rule for {type(fld).__name__}")


def _hole_quadrature(hole, center, scale, n_ang=256, n_rad=64):
    """(points, weights) over the scaled hole and over its boundary."""
    cx, cy = center
    if isinstance(hole, Disk):
        radius = scale * hole.radius
        gx, gw = np.polynomial.legendre.leggauss(n_rad)
        r = 0.5 * radius * (gx + 1.0)
        wr = 0.5 * radius * gw
        t = 2.0 * math.pi * np.arange(n_ang) / n_ang
        wt = 2.0 * math.pi / n_ang
        rr, tt = np.meshgrid(r, t, indexing="ij")
        pts = np.column_stack([(cx + rr * np.cos(tt)).ravel(),
                               (cy + rr * np.sin(tt)).ravel()])
        w = (wr[:, None] * np.full(n_ang, wt)[None, :] * rr).ravel()
        bt = 2.0 * math.pi * np.arange(n_ang) / n_ang
        bpts = np.column_stack([cx + radius * np.cos(bt), cy + radius * np.sin(bt)])
        bw = np.full(n_ang, radius * 2.0 * math.pi / n_ang)
        return pts, w, bpts, bw
    if isinstance(hole, Rect):
        wx, wy = scale * hole.ax, scale * hole.ay
        gx, gw = np.polynomial.legendre.leggauss(n_rad)
        X = wx * gx
        Y = wy * gx
        WX, WY = wx * gw, wy * gw
        xx, yy = np.meshgrid(X, Y, indexing="ij")
        pts = np.column_stack([(cx + xx).ravel(), (cy + yy).ravel()])
        w = (WX[:, None] * WY[None, :]).ravel()
        bpts, bw = [], []
        for (px, py, wgt) in (
            (X, np.full_like(X, -wy), WX), (X, np.full_like(X, wy), WX),
            (np.full_like(Y, -wx), Y, WY), (np.full_like(Y, wx), Y, WY),
        ):
            bpts.append(np.column_stack([cx + px, cy + py]))
            bw.append(wgt)
        return pts, w, np.vstack(bpts), np.concatenate(bw)
    raise TypeError("hole must be Disk or Rect")


def hole_integrals(fld, spec, n_ang=256, n_rad=64):
    """Quadrature of |grad u|^2, u^2 over the scaled hole and u^2 over its
    boundary, together with the leading-order predictions driven by the
    local expansion of u at the hole center."""
    if spec.hole is None:
        raise ValueError("spec has no hole")
    eps = spec.eps
    pts, w, bpts, bw = _hole_quadrature(spec.hole, spec.hole_center, eps,
                                        n_ang=n_ang, n_rad=n_rad)
    gx, gy = fld.grad(pts[:, 0], pts[:, 1])
    vals = fld.value(pts[:, 0], pts[:, 1])
    bvals = fld.value(bpts[:, 0], bpts[:, 1])
    grad_sq = float(np.dot(w, gx * gx + gy * gy))
    mass_sq = float(np.dot(w, vals * vals))
    boundary_sq = float(np.dot(bw, bvals * bvals))

    # leading-order predictions from the unit-scale hole and P_ell
    u0, ell, P = local_expansion(fld)
    upts, uw, ubpts, ubw = _hole_quadrature(spec.hole, (0.0, 0.0), 1.0,
                                            n_ang=n_ang, n_rad=n_rad)
    area = float(np.sum(uw))
    perim = float(np.sum(ubw))
    if P is None:
        pg = pm2 = pm1 = pb2 = pb1 = 0.0
    else:
        pgx, pgy = P.grad(upts[:, 0], upts[:, 1])
        pv = P.value(upts[:, 0], upts[:, 1])
        pbv = P.value(ubpts[:, 0], ubpts[:, 1])
        pg = float(np.dot(uw, pgx * pgx + pgy * pgy))
        pm2 = float(np.dot(uw, pv * pv))
        pm1 = float(np.dot(uw, pv))
        pb2 = float(np.dot(ubw, pbv * pbv))
        pb1 = float(np.dot(ubw, pbv))
    N = 2
    pred_grad = eps ** (N + 2 * ell - 2) * pg if P is not None else 0.0
    pred_mass = (eps ** N * u0 ** 2 * area
                 + eps ** (N + 2 * ell) * pm2
                 + 2.0 * eps ** (N + ell) * u0 * pm1)
    pred_bnd = (eps ** (N - 1) * u0 ** 2 * perim
                + eps ** (N + 2 * ell - 1) * pb2
                + 2.0 * eps ** (N + ell - 1) * u0 * pb1)
    return HoleIntegrals(grad_sq=grad_sq, mass_sq=mass_sq,
                         boundary_sq=boundary_sq, pred_grad_sq=pred_grad,
                         pred_mass_sq=pred_mass, pred_boundary_sq=pred_bnd)


# ----------------------------------------------------------------------------
# Eigenvalue-variation identity
# ----------------------------------------------------------------------------

def expansion_residual(lambda_eps, lambda_0, T_eps, integrals, alpha):
    """Residual of lambda_eps - lambda_0 against its three driving terms.

    The identity predicts delta = -T - (int |grad u|^2 - lam0 int u^2)
    + alpha int_bd u^2, each term up to o(itself); the returned residual is
    the signed mismatch.
    """
    delta = lambda_eps - lambda_0
    body = integrals.grad_sq - lambda_0 * integrals.mass_sq
    rhs = -T_eps - body + alpha * integrals.boundary_sq
    return delta - rhs


def residual_ratio(lambda_eps, lambda_0, T_eps, integrals, alpha):
    """|residual| over the largest participating term (0 for all-zero input)."""
    res = expansion_residual(lambda_eps, lambda_0, T_eps, integrals, alpha)
    body = integrals.grad_sq - lambda_0 * integrals.mass_sq
    scale = max(abs(T_eps), abs(body), abs(alpha * integrals.boundary_sq),
                abs(lambda_eps - lambda_0))
    if scale == 0.0:
        return 0.0
    return abs(res) / scale
