"""Semi-analytic ground truth for disk, annulus, and rectangle Robin problems.

Everything here is mesh-free: Bessel evaluations, transcendental dispersion
relations solved by sign-scan + bisection, separable 1D modes, local Taylor
data of eigenmodes at the origin, and the closed-form radial solve for the
shifted flux problem on a concentric annulus.

Sign conventions. All boundary conditions are of Robin type
``du/dnu + alpha*u = 0`` with ``nu`` the normal pointing out of the domain.
On the boundary of an interior hole the outward normal of the perforated
domain points *into* the hole, so for a concentric circular hole of radius
``rho`` the radial condition reads ``-u'(rho) + alpha*u(rho) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = [
    "bessel",
    "disk_robin_eigen",
    "annulus_robin_eigen",
    "interval_robin_eigen",
    "ModeSpec",
    "VanishingOrderData",
    "taylor_data",
    "DiskModeField",
    "RectModeField",
    "HarmonicPolyField",
    "ConstantField",
    "annulus_torsion",
    "choose_shift_oracle",
]


# ----------------------------------------------------------------------------
# Bessel functions
# ----------------------------------------------------------------------------

_BESSEL_FUNCS = {
    "J": special.jv,
    "Y": special.yv,
    "I": special.iv,
    "K": special.kv,
}


def bessel(kind, m, x):
    """Evaluate a Bessel function and its derivative.

    Parameters
    ----------
    kind : {"J", "Y", "I", "K"}
    m : int >= 0, the order.
    x : float or array. Must be > 0 for kinds "Y" and "K".

    Returns
    -------
    (value, derivative) with respect to ``x``.

    Backed by the cephes routines in :mod:`scipy.special`; derivatives use
    the standard two-term recurrences, e.g. ``J_m' = (J_{m-1} - J_{m+1})/2``
    and ``I_m' = (I_{m-1} + I_{m+1})/2``.
    """
    if kind not in _BESSEL_FUNCS:
        raise ValueError(f"unknown Bessel kind {kind!r}")
    if not float(m).is_integer() or m < 0:
        raise ValueError("order must be a nonnegative integer")
    m = int(m)
    x = np.asarray(x, dtype=float)
    if kind in ("Y", "K") and np.any(x <= 0.0):
        raise ValueError(f"{kind}_m requires x > 0")
    f = _BESSEL_FUNCS[kind]
    val = f(m, x)
    if kind in ("J", "Y"):
        # Z_m' = (Z_{m-1} - Z_{m+1}) / 2, with Z_{-1} = -Z_1 for J, Y.
        lower = -f(1, x) if m == 0 else f(m - 1, x)
        der = 0.5 * (lower - f(m + 1, x))
    elif kind == "I":
        lower = f(1, x) if m == 0 else f(m - 1, x)
        der = 0.5 * (lower + f(m + 1, x))
    else:  # K
        lower = f(1, x) if m == 0 else f(m - 1, x)
        der = -0.5 * (lower + f(m + 1, x))
    if val.ndim == 0:
        return float(val), float(der)
    return val, der


# ----------------------------------------------------------------------------
# Root finding helpers
# ----------------------------------------------------------------------------

def _bisect(f, a, b, fa, fb, rtol=1e-13, maxit=200):
    """Plain bisection on a bracketed sign change."""
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ValueError("root not bracketed")
    for _ in range(maxit):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
        if b - a <= rtol * max(1.0, abs(mid)):
            break
    return 0.5 * (a + b)


def _scan_roots(f, grid, count, rtol=1e-13):
    """Collect up to ``count`` roots of ``f`` bracketed on ``grid`` (sorted)."""
    roots = []
    vals = [f(g) for g in grid]
    for i in range(len(grid) - 1):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(grid[i])
        elif fa * fb < 0.0:
            roots.append(_bisect(f, grid[i], grid[i + 1], fa, fb, rtol=rtol))
        if len(roots) >= count:
            break
    return roots


# ----------------------------------------------------------------------------
# Disk sector eigenvalues
# ----------------------------------------------------------------------------

def _disk_dispersion(m, alpha, R):
    """Dispersion F(lam) for the m-sector of the disk of radius R.

    Uses the radial solution normalized by (sqrt|lam|/2)^m so that F is
    continuous across lam = 0, where the solution degenerates to r^m.
    """

    def F(lam):
        if lam > 0.0:
            s = math.sqrt(lam)
            v, d = bessel("J", m, s * R)
            scale = (0.5 * s) ** (-m)
            return scale * (s * d + alpha * v)
        if lam < 0.0:
            t = math.sqrt(-lam)
            v, d = bessel("I", m, t * R)
            scale = (0.5 * t) ** (-m)
            return scale * (t * d + alpha * v)
        # lam == 0: solution r^m / m! (constant for m = 0)
        if m == 0:
            return alpha
        return (m / R + alpha) * R ** m / math.factorial(m)

    return F


def disk_robin_eigen(m, j, alpha, R):
    """j-th eigenvalue (j >= 1, ascending) of the m-sector Robin disk.

    Sector means angular dependence cos(m theta) or sin(m theta); within a
    sector all eigenvalues are simple. For alpha < 0 the scan covers the
    negative spectrum through the modified-Bessel branch.
    """
    if j < 1:
        raise ValueError("radial index j must be >= 1")
    if R <= 0:
        raise ValueError("R must be positive")
    F = _disk_dispersion(m, alpha, R)
    roots = []
    if alpha < 0.0:
        tmax = 3.0 * (abs(alpha) + 1.0) + 2.0 / R
        tgrid = np.linspace(tmax, 1e-9, 4001)
        roots += _scan_roots(F, [-t * t for t in tgrid], j)
    if alpha == 0.0:
        roots.append(0.0 if m == 0 else None)
        roots = [r for r in roots if r is not None]
    if len(roots) < j:
        need = j - len(roots)
        smax = (need + m + 4) * math.pi / R
        while True:
            sgrid = np.linspace(1e-9, smax, max(2000, int(80 * smax * R)))
            pos = _scan_roots(F, [s * s for s in sgrid], need)
            if len(pos) >= need:
                roots += pos[:need]
                break
            smax *= 2.0
            if smax > 1e4:
                raise RuntimeError("disk dispersion root not bracketed")
    return roots[j - 1]


# ----------------------------------------------------------------------------
# Annulus sector eigenvalues
# ----------------------------------------------------------------------------

def _annulus_dispersion(m, alpha, R, rho):
    """Normalized 2x2 dispersion determinant for the annulus rho < r < R.

    Rows: Robin at the outer circle (nu = +e_r) and at the inner circle
    (nu = -e_r). Each row is scaled to unit Euclidean norm so the sign-scan
    stays well conditioned when Y_m or K_m blow up at small rho.
    """

    def det(lam):
        if lam > 0.0:
            s = math.sqrt(lam)
            jR, djR = bessel("J", m, s * R)
            yR, dyR = bessel("Y", m, s * R)
            jr, djr = bessel("J", m, s * rho)
            yr, dyr = bessel("Y", m, s * rho)
            outer = np.array([s * djR + alpha * jR, s * dyR + alpha * yR])
            inner = np.array([-s * djr + alpha * jr, -s * dyr + alpha * yr])
        elif lam < 0.0:
            t = math.sqrt(-lam)
            iR, diR = bessel("I", m, t * R)
            kR, dkR = bessel("K", m, t * R)
            ir, dir_ = bessel("I", m, t * rho)
            kr, dkr = bessel("K", m, t * rho)
            outer = np.array([t * diR + alpha * iR, t * dkR + alpha * kR])
            inner = np.array([-t * dir_ + alpha * ir, -t * dkr + alpha * kr])
        else:
            # lam == 0 basis: {r^m, r^-m} for m >= 1, {1, log r} for m = 0
            if m == 0:
                outer = np.array([alpha, 1.0 / R + alpha * math.log(R)])
                inner = np.array([alpha, -1.0 / rho + alpha * math.log(rho)])
            else:
                outer = np.array([m * R ** (m - 1) + alpha * R ** m,
                                  -m * R ** (-m - 1) + alpha * R ** (-m)])
                inner = np.array([-m * rho ** (m - 1) + alpha * rho ** m,
                                  m * rho ** (-m - 1) + alpha * rho ** (-m)])
        outer = outer / np.hypot(outer[0], outer[1])
        inner = inner / np.hypot(inner[0], inner[1])
        return outer[0] * inner[1] - outer[1] * inner[0]

    return det


def annulus_robin_eigen(m, j, alpha, R, rho, near=None):
    """j-th eigenvalue of the m-sector on the annulus {rho < r < R}.

    The inner circle carries the Robin condition with the normal pointing
    toward the center (outward for the annulus). ``near`` warm-starts the
    scan with a window around a previously computed value, for sweeps in
    ``rho``.
    """
    if not 0 < rho < R:
        raise ValueError("need 0 < rho < R")
    if j < 1:
        raise ValueError("radial index j must be >= 1")
    det = _annulus_dispersion(m, alpha, R, rho)
    if near is not None:
        width = 0.2 * (abs(near) + 1.0)
        grid = np.linspace(near - width, near + width, 801)
        grid = grid[np.abs(grid) > 1e-12] if alpha != 0.0 else grid
        local = _scan_roots(det, list(grid), 8)
        if local:
            best = min(local, key=lambda r: abs(r - near))
            if abs(best - near) < width:
                return best
    roots = []
    if alpha < 0.0:
        tmax = 3.0 * (abs(alpha) + 1.0) + 2.0 / R
        tgrid = np.linspace(tmax, 1e-9, 4001)
        roots += _scan_roots(det, [-t * t for t in tgrid], j)
    if alpha == 0.0 and m == 0:
        roots.append(0.0)
    if len(roots) < j:
        need = j - len(roots)
        smax = (need + m + 4) * math.pi / (R - rho)
        while True:
            sgrid = np.linspace(1e-9, smax, max(4000, int(100 * smax * R)))
            pos = _scan_roots(det, [s * s for s in sgrid], need)
            if len(pos) >= need:
                roots += pos[:need]
                break
            smax *= 2.0
            if smax > 1e5:
                raise RuntimeError("annulus dispersion root not bracketed")
    return roots[j - 1]


# ----------------------------------------------------------------------------
# 1D Robin interval modes (rectangle factors)
# ----------------------------------------------------------------------------

def _cs(lam, x):
    """Entire-in-lambda basis C(lam,x)=cos(sqrt(lam) x), S(lam,x)=sin(.)/sqrt(lam).

    For lam < 0 these continue to cosh/sinh; for lam = 0 to (1, x). Both are
    entire functions of lam, which keeps the dispersion smooth across 0.
    """
    x = np.asarray(x, dtype=float)
    if lam > 0.0:
        w = math.sqrt(lam)
        return np.cos(w * x), np.sin(w * x) / w
    if lam < 0.0:
        k = math.sqrt(-lam)
        return np.cosh(k * x), np.sinh(k * x) / k
    return np.ones_like(x), x.copy()


def interval_robin_eigen(idx, alpha, L):
    """idx-th eigenvalue (idx >= 1) of -f'' = lam f on (0, L) with Robin ends.

    Conditions: -f'(0) + alpha f(0) = 0 and f'(L) + alpha f(L) = 0.
    Returns ``(lam, f, fprime)`` where f, fprime are vectorized closures of
    the (unnormalized) eigenfunction f(x) = C(lam,x) + alpha S(lam,x).
    """
    if idx < 1:
        raise ValueError("idx must be >= 1")
    if L <= 0:
        raise ValueError("L must be positive")

    def disp(lam):
        C, S = _cs(lam, L)
        return float((alpha * alpha - lam) * S + 2.0 * alpha * C)

    roots = []
    if alpha < 0.0:
        lam_lo = -9.0 * (alpha * alpha + 1.0)
        grid = [-t * t for t in np.linspace(math.sqrt(-lam_lo), 1e-9, 3001)]
        roots += _scan_roots(disp, grid, idx)
    if alpha == 0.0:
        roots.append(0.0)
    if len(roots) < idx:
        need = idx - len(roots)
        wmax = (need + 3) * math.pi / L
        while True:
            wgrid = np.linspace(1e-9, wmax, max(3000, int(60 * wmax * L)))
            pos = _scan_roots(disp, [w * w for w in wgrid], need)
            if len(pos) >= need:
                roots += pos[:need]
                break
            wmax *= 2.0
    lam = roots[idx - 1]

    def f(x, lam=lam):
        C, S = _cs(lam, x)
        return C + alpha * S

    def fprime(x, lam=lam):
        C, S = _cs(lam, x)
        return -lam * S + alpha * C

    return lam, f, fprime


# ----------------------------------------------------------------------------
# Mode specifications and normalized fields
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeSpec:
    """Which eigenmode the lab is talking about.

    family "disk": angular index m >= 0, radial index jrad >= 1, parity in
    {"cos", "sin"} (cos is mandatory for m = 0). family "rect": 1D indices
    p, q >= 1 of the separable factors.
    """
    family: str
    m: int = 0
    jrad: int = 1
    parity: str = "cos"
    p: int = 1
    q: int = 1

    def __post_init__(self):
        if self.family not in ("disk", "rect"):
            raise ValueError("family must be 'disk' or 'rect'")
        if self.family == "disk":
            if self.m < 0 or self.jrad < 1:
                raise ValueError("need m >= 0 and jrad >= 1")
            if self.parity not in ("cos", "sin"):
                raise ValueError("parity must be 'cos' or 'sin'")
            if self.m == 0 and self.parity != "cos":
                raise ValueError("m = 0 modes are radial; use parity 'cos'")
        else:
            if self.p < 1 or self.q < 1:
                raise ValueError("need p, q >= 1")


@dataclass(frozen=True)
class VanishingOrderData:
    """Vanishing order and leading angular coefficients of a mode at x0.

    ``k`` is the vanishing order, ``h = max(k, 1)``. For k >= 1 the leading
    Taylor polynomial, being harmonic and k-homogeneous, is

        P_k(r, theta) = r^k * (a cos(k theta) + (b / k) sin(k theta)),

    and (a, b) are the stored coefficients; (a, b) != (0, 0). For k = 0,
    ``value`` is u(x0) and a = b = 0. For k = 1 the pair (a, b) equals the
    gradient of u at x0; for k >= 2 it fixes P_k through the formula above.
    """
    k: int
    a: float
    b: float
    value: float = 0.0
    norm_const: float = 1.0

    @property
    def h(self):
        return max(self.k, 1)

    def angular(self, theta):
        """P_k restricted to the unit circle, as a function of theta."""
        theta = np.asarray(theta, dtype=float)
        if self.k == 0:
            return np.full_like(theta, self.value)
        return self.a * np.cos(self.k * theta) + (self.b / self.k) * np.sin(self.k * theta)

    def boundary_sq_integral(self):
        """Integral of |P_k|^2 over the unit circle."""
        if self.k == 0:
            return 2.0 * math.pi * self.value ** 2
        return math.pi * (self.a ** 2 + self.b ** 2 / self.k ** 2)


def _gauss_radial(f, a, b, n=240):
    """Gauss-Legendre integral of f(r) on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (b - a) * x + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.dot(w, f(r)))


class DiskModeField:
    """L2-normalized eigenmode of the Robin disk, c * J_m(sqrt(lam) r) trig(m theta).

    Exposes pointwise values and gradients (vectorized), the eigenvalue, and
    the local Taylor data at the center.  Only modes with lam > 0 have a
    Bessel-J radial factor; negative eigenvalues (possible for alpha < 0)
    use the modified branch I_m.
    """

    def __init__(self, m, jrad, alpha, R, parity="cos"):
        self.spec = ModeSpec("disk", m=m, jrad=jrad, parity=parity)
        self.m = int(m)
        self.jrad = int(jrad)
        self.parity = parity
        self.alpha = float(alpha)
        self.R = float(R)
        self.lam = disk_robin_eigen(m, jrad, alpha, R)
        ang = 2.0 * math.pi if m == 0 else math.pi
        radial_sq = _gauss_radial(lambda r: self._radial(r) ** 2 * r, 0.0, R)
        self.norm_const = 1.0 / math.sqrt(ang * radial_sq)

    # radial factor without normalization
    def _radial(self, r):
        r = np.asarray(r, dtype=float)
        if self.lam > 0.0:
            return special.jv(self.m, math.sqrt(self.lam) * r)
        if self.lam < 0.0:
            return special.iv(self.m, math.sqrt(-self.lam) * r)
        return r ** self.m if self.m > 0 else np.ones_like(r)

    def _radial_deriv(self, r):
        r = np.asarray(r, dtype=float)
        if self.lam > 0.0:
            s = math.sqrt(self.lam)
            _, d = bessel("J", self.m, s * r)
            return s * d
        if self.lam < 0.0:
            t = math.sqrt(-self.lam)
            _, d = bessel("I", self.m, t * r)
            return t * d
        if self.m == 0:
            return np.zeros_like(r)
        return self.m * r ** (self.m - 1)

    def _trig(self, theta):
        mt = self.m * np.asarray(theta, dtype=float)
        return np.cos(mt) if self.parity == "cos" else np.sin(mt)

    def _trig_deriv(self, theta):
        mt = self.m * np.asarray(theta, dtype=float)
        if self.parity == "cos":
            return -self.m * np.sin(mt)
        return self.m * np.cos(mt)

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        theta = np.arctan2(y, x)
        return self.norm_const * self._radial(r) * self._trig(theta)

    def grad(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        theta = np.arctan2(y, x)
        small = r < 1e-12
        rs = np.where(small, 1.0, r)
        du_dr = self.norm_const * self._radial_deriv(rs) * self._trig(theta)
        du_dth = self.norm_const * self._radial(rs) * self._trig_deriv(theta)
        gx = du_dr * np.cos(theta) - du_dth * np.sin(theta) / rs
        gy = du_dr * np.sin(theta) + du_dth * np.cos(theta) / rs
        if np.any(small):
            td = self.taylor_data()
            # gradient at the center from the leading polynomial (0 unless k = 1)
            g0x = td.a if td.k == 1 else 0.0
            g0y = td.b if td.k == 1 else 0.0
            gx = np.where(small, g0x, gx)
            gy = np.where(small, g0y, gy)
        if gx.ndim == 0:
            return float(gx), float(gy)
        return gx, gy

    def taylor_data(self):
        return taylor_data(self.spec, alpha=self.alpha, R=self.R, field=self)


class RectModeField:
    """Separable eigenmode f_p(x) g_q(y) of the Robin rectangle [-ax,ax]x[-ay,ay]."""

    def __init__(self, p, q, alpha, ax, ay):
        self.spec = ModeSpec("rect", p=p, q=q)
        self.alpha = float(alpha)
        self.ax, self.ay = float(ax), float(ay)
        lx, fx, fpx = interval_robin_eigen(p, alpha, 2.0 * ax)
        ly, fy, fpy = interval_robin_eigen(q, alpha, 2.0 * ay)
        self.lam = lx + ly
        nx = math.sqrt(_gauss_radial(lambda t: fx(t) ** 2, 0.0, 2.0 * ax))
        ny = math.sqrt(_gauss_radial(lambda t: fy(t) ** 2, 0.0, 2.0 * ay))
        self._fx = lambda t: fx(t) / nx
        self._fpx = lambda t: fpx(t) / nx
        self._fy = lambda t: fy(t) / ny
        self._fpy = lambda t: fpy(t) / ny

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self._fx(x + self.ax) * self._fy(y + self.ay)

    def grad(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = self._fpx(x + self.ax) * self._fy(y + self.ay)
        gy = self._fx(x + self.ax) * self._fpy(y + self.ay)
        return gx, gy

    def factors_at(self, x0):
        """(f(x0), f'(x0), g(y0), g'(y0)) for Taylor data at a point."""
        x, y = x0
        return (float(self._fx(x + self.ax)), float(self._fpx(x + self.ax)),
                float(self._fy(y + self.ay)), float(self._fpy(y + self.ay)))


class HarmonicPolyField:
    """The harmonic polynomial r^k (a cos k th + (b/k) sin k th), with gradient."""

    def __init__(self, k, a, b):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k, self.a, self.b = int(k), float(a), float(b)
        self.lam = 0.0

    def value(self, x, y):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        zk = z ** self.k
        return self.a * zk.real + (self.b / self.k) * zk.imag

    def grad(self, x, y):
        # d/dx Re z^k = k Re z^{k-1}, d/dy Re z^k = -k Im z^{k-1}; similarly Im.
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        zk1 = self.k * z ** (self.k - 1)
        gx = self.a * zk1.real + (self.b / self.k) * zk1.imag
        gy = -self.a * zk1.imag + (self.b / self.k) * zk1.real
        return gx, gy


class ConstantField:
    """Constant field; zero gradient."""

    def __init__(self, c=1.0):
        self.c = float(c)
        self.lam = 0.0

    def value(self, x, y):
        return np.full_like(np.asarray(x, dtype=float), self.c)

    def grad(self, x, y):
        z = np.zeros_like(np.asarray(x, dtype=float))
        return z, z.copy()


def taylor_data(mode, alpha=None, R=None, field=None, at=(0.0, 0.0)):
    """Vanishing order and leading coefficients of a mode at a point.

    Disk modes are evaluated at the center (k = m); the coefficients follow
    the convention of :class:`VanishingOrderData`, i.e. they parameterize
    P_k(theta) = a cos(k theta) + (b/k) sin(k theta) on the unit circle. For
    k <= 1 they coincide with the partial derivatives of u at the center.

    Rect modes are evaluated at ``at``; k is 0, 1 (single nodal line) or 2
    (nodal crossing, where a = 0 and b is the mixed second derivative).
    """
    if mode.family == "disk":
        if field is None:
            field = DiskModeField(mode.m, mode.jrad, alpha, R, parity=mode.parity)
        c = field.norm_const
        lam = field.lam
        k = mode.m
        if k == 0:
            return VanishingOrderData(k=0, a=0.0, b=0.0, value=c, norm_const=c)
        if lam <= 0.0:
            raise ValueError("Taylor data of non-positive disk modes not supported")
        amp = c * (0.5 * math.sqrt(lam)) ** k / math.factorial(k)
        if mode.parity == "cos":
            return VanishingOrderData(k=k, a=amp, b=0.0, norm_const=c)
        return VanishingOrderData(k=k, a=0.0, b=k * amp, norm_const=c)

    if field is None:
        raise ValueError("rect taylor data needs the instantiated field")
    f0, fp0, g0, gp0 = field.factors_at(at)
    tol = 1e-10
    fz, gz = abs(f0) < tol, abs(g0) < tol
    if not fz and not gz:
        return VanishingOrderData(k=0, a=0.0, b=0.0, value=f0 * g0)
    if fz and gz:
        # nodal crossing: P_2 = f'(x0) g'(y0) x y, harmonic of order 2
        return VanishingOrderData(k=2, a=0.0, b=fp0 * gp0)
    if fz:
        return VanishingOrderData(k=1, a=fp0 * g0, b=f0 * gp0)
    return VanishingOrderData(k=1, a=fp0 * g0, b=f0 * gp0)


# ----------------------------------------------------------------------------
# Closed-form shifted flux solve on the concentric annulus
# ----------------------------------------------------------------------------

@dataclass
class AnnulusTorsion:
    """Result of the radial flux solve; T is the torsional rigidity."""
    T: float
    boundary_value: float
    l2_sq: float
    radial: object = field(repr=False, default=None)


def annulus_torsion(m, alpha, c_shift, R, rho, g_m):
    """Solve the shifted Robin flux problem on {rho < r < R} in one sector.

    The solution has the form V = (A I_m(s r) + B K_m(s r)) trig(m theta)
    with s = sqrt(c_shift), boundary data 0 at the outer circle and
    ``-V' + alpha V = g_m`` at the inner circle (normal pointing inward).
    Returns the torsional rigidity T = int_{inner} g V dsigma, the radial
    boundary value V(rho), and the squared L2 norm of V on the annulus.
    """
    if c_shift <= 0:
        raise ValueError("shift must be positive")
    s = math.sqrt(c_shift)
    iR, diR = bessel("I", m, s * R)
    kR, dkR = bessel("K", m, s * R)
    ir, dir_ = bessel("I", m, s * rho)
    kr, dkr = bessel("K", m, s * rho)
    A2 = np.array([
        [s * diR + alpha * iR, s * dkR + alpha * kR],
        [-s * dir_ + alpha * ir, -s * dkr + alpha * kr],
    ])
    rhs = np.array([0.0, g_m])
    A, B = np.linalg.solve(A2, rhs)
    ang = 2.0 * math.pi if m == 0 else math.pi

    def radial(r):
        r = np.asarray(r, dtype=float)
        return A * special.iv(m, s * r) + B * special.kv(m, s * r)

    vb = float(radial(rho))
    T = g_m * vb * rho * ang
    l2 = ang * _gauss_radial(lambda r: radial(r) ** 2 * r, rho, R, n=400)
    return AnnulusTorsion(T=T, boundary_value=vb, l2_sq=l2, radial=radial)


def choose_shift_oracle(lambda_1, threshold=1.05):
    """Smallest c in 1, 2, 4, ... with lambda_1 + c > threshold."""
    c = 1.0
    for _ in range(60):
        if lambda_1 + c > threshold:
            return c
        c *= 2.0
    raise RuntimeError("no coercive shift within 60 doublings")
