"""One-off check: which Taylor-coefficient convention matches the k=2 shift.

Computes lambda_eps - lambda_0 for the m-sector of the concentric annulus by
the dispersion oracle, extracts the eps^{2k} coefficient, and compares with
-2 k pi r1^{2k} (a^2 + b^2/k^2) under two candidate conventions for a:
  (lit) a = c (sqrt(lam)/2)^k          -- literal d^k u / dx1^k at the center
  (rep) a = c (sqrt(lam)/2)^k / k!     -- coefficient in P_k = a r^k cos(k th)
"""
import math

from robinlab import oracle

R, r1, alpha = 1.0, 0.5, 1.0
for m in (1, 2, 3):
    fld = oracle.DiskModeField(m, 1, alpha, R, parity="cos")
    lam0, c = fld.lam, fld.norm_const
    k = m
    amp_lit = c * (0.5 * math.sqrt(lam0)) ** k
    amp_rep = amp_lit / math.factorial(k)
    eps_list = [0.05, 0.025, 0.0125, 0.00625]
    prev = None
    print(f"m={m}: lam0={lam0:.12f}  c={c:.12f}")
    for eps in eps_list:
        lam_eps = oracle.annulus_robin_eigen(m, 1, alpha, R, eps * r1, near=lam0)
        delta = lam_eps - lam0
        coef = delta / eps ** (2 * k)
        slope = "" if prev is None else f" slope={math.log(abs(delta / prev[1])) / math.log(eps / prev[0]):.4f}"
        print(f"  eps={eps:<8} delta={delta:+.6e} coef={coef:+.8f}{slope}")
        prev = (eps, delta)
    print(f"  predicted (lit): {-2 * k * math.pi * r1 ** (2 * k) * amp_lit ** 2:+.8f}")
    print(f"  predicted (rep): {-2 * k * math.pi * r1 ** (2 * k) * amp_rep ** 2:+.8f}")
