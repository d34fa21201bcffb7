"""Power-law fits on sweep data and Richardson extrapolation in mesh size.

``fit_loglog`` does the global least-squares fit of log|value| against
log(eps). Asymptotic sweeps usually carry a visible next-order correction at
the largest eps, so two refinements are provided: ``tail_fit`` (line through
the two smallest-eps points) and ``leading_coefficient`` (fixes the exponent
to its theoretical value and extrapolates the prefactor to eps -> 0), which
is the estimator the acceptance checks use for coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RateFit",
    "RichardsonResult",
    "fit_loglog",
    "tail_fit",
    "leading_coefficient",
    "richardson",
    "CURVATURE_R2",
]

VALUE_FLOOR = 1e-14
CURVATURE_R2 = 0.9999


@dataclass
class RateFit:
    """Fitted slope and signed coefficient of value ~ C eps^p."""
    p: float
    C: float
    r2: float
    window: tuple
    n_used: int

    @property
    def curved(self):
        return self.r2 < CURVATURE_R2


def _usable(points, window):
    pts = [(float(e), float(v)) for e, v in points]
    if window is not None:
        pts = [pts[i] for i in window]
    pts = [(e, v) for e, v in pts if abs(v) > VALUE_FLOOR]
    if len(pts) < 3:
        raise ValueError("need at least 3 points above the value floor")
    signs = {math.copysign(1.0, v) for _, v in pts}
    if len(signs) > 1:
        raise ValueError("sign-mixed data: asymptotic regime not reached")
    return pts, signs.pop()


def fit_loglog(points, window=None):
    """Least squares of log|value| on log(eps) over the (optional) window.

    ``points`` is a sequence of (eps, value); all usable values must share a
    sign, which the returned coefficient carries.
    """
    pts, sign = _usable(points, window)
    x = np.log([e for e, _ in pts])
    y = np.log([abs(v) for _, v in pts])
    A = np.column_stack([x, np.ones_like(x)])
    (p, logc), res, *_ = np.linalg.lstsq(A, y, rcond=None)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(res[0]) if len(res) else float(np.sum((A @ [p, logc] - y) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    win = tuple(window) if window is not None else tuple(range(len(points)))
    return RateFit(p=float(p), C=sign * math.exp(logc), r2=float(r2),
                   window=win, n_used=len(pts))


def tail_fit(points):
    """Slope and intercept of the line through the two smallest-eps points."""
    pts = [(float(e), float(v)) for e, v in points if abs(v) > VALUE_FLOOR]
    if len(pts) < 2:
        raise ValueError("need at least 2 points above the value floor")
    pts.sort(key=lambda t: t[0])
    (e2, v2), (e1, v1) = pts[0], pts[1]  # e2 < e1
    if math.copysign(1.0, v1) != math.copysign(1.0, v2):
        raise ValueError("sign-mixed data: asymptotic regime not reached")
    p = math.log(abs(v1) / abs(v2)) / math.log(e1 / e2)
    C = math.copysign(abs(v2) / e2 ** p, v2)
    return RateFit(p=p, C=C, r2=1.0, window=(0, 1), n_used=2)


def leading_coefficient(points, exponent):
    """Coefficient of value ~ C eps^exponent, extrapolated to eps -> 0.

    Divides out the known exponent and removes the first-order-in-eps
    correction from the two smallest-eps prefactors: with c(eps) = C + g eps,
    C = (e1 c2 - e2 c1) / (e1 - e2) for e2 < e1.
    """
    pts = sorted(((float(e), float(v)) for e, v in points), key=lambda t: t[0])
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    (e2, v2), (e1, v1) = pts[0], pts[1]
    c2, c1 = v2 / e2 ** exponent, v1 / e1 ** exponent
    return (e1 * c2 - e2 * c1) / (e1 - e2)


@dataclass
class RichardsonResult:
    value: float
    error_estimate: float
    observed_order: float = None
    degraded: bool = False


def richardson(values, order=2, ratio=2.0):
    """Extrapolate a sequence computed at h, h/ratio, (h/ratio^2, ...).

    Standard elimination of the leading O(h^order) term using the two finest
    levels; with three levels the observed order is also reported. A
    non-monotone triple degrades to the raw finest value.
    """
    values = [float(v) for v in values]
    if len(values) == 1:
        return RichardsonResult(value=values[0], error_estimate=0.0)
    r = ratio ** order
    coarse, fine = values[-2], values[-1]
    extrap = (r * fine - coarse) / (r - 1.0)
    err = abs(extrap - fine)
    observed = None
    if len(values) >= 3:
        d1 = values[-2] - values[-3]
        d2 = values[-1] - values[-2]
        if d1 == 0.0 and d2 == 0.0:
            return RichardsonResult(value=fine, error_estimate=0.0,
                                    observed_order=None)
        if d1 * d2 <= 0.0 or abs(d2) >= abs(d1):
            return RichardsonResult(value=fine, error_estimate=abs(d2),
                                    degraded=True)
        observed = math.log(abs(d1 / d2)) / math.log(ratio)
    return RichardsonResult(value=extrap, error_estimate=err,
                            observed_order=observed)
