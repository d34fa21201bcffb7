"""The explicit harmonic competitor on the punctured ball.

With a round hole the flux problem has an explicit relative: the harmonic
function on {eps r1 < r < R} with Robin data at the outer circle and the
polynomial Neumann data at the hole. Its closed form exposes everything the
sweep route has to discover numerically: the boundary conditions, the inner
asymptotic value -r1^k P_k(theta) eps^k, and the rigidity limit
k pi r1^{2k} (a^2 + b^2/k^2), independent of the outer radius R.

Run:  python demos/05_explicit_solution.py  (writes out/demo_wer.png)
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from robinlab import asymptotics

out = pathlib.Path("out")
out.mkdir(exist_ok=True)
k, r1, alpha, a, b = 1, 1.0, 1.0, 1.0, 0.0
target = k * math.pi * r1 ** (2 * k) * (a * a + b * b / k ** 2)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.3))
R = 2.0
for eps in (0.2, 0.1, 0.05):
    r = np.linspace(eps * r1, R, 400)
    w = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, r, 0.0)
    ax1.plot(r, w / eps ** k, label=f"eps={eps}")
ax1.axhline(-r1 ** k, color="0.4", ls="--", lw=0.9)
ax1.set_xlabel("r")
ax1.set_ylabel("W(r, 0) / eps^k")
ax1.set_title("radial profile; dashed: inner limit -r1^k")
ax1.legend()

eps_grid = np.geomspace(1e-3, 0.3, 25)
for R in (2.0, 3.0):
    ratios = [asymptotics.torsion_wer(e, R, r1, alpha, k, a, b)
              / (target * e ** (2 * k)) for e in eps_grid]
    ax2.semilogx(eps_grid, ratios, label=f"R = {R}")
ax2.axhline(1.0, color="0.4", ls="--", lw=0.9)
ax2.set_xlabel("eps")
ax2.set_ylabel("rigidity / (k pi r1^{2k} eps^{2k})")
ax2.set_title("rigidity ratio -> 1, independent of R")
ax2.legend()
fig.tight_layout()
fig.savefig(out / "demo_wer.png", dpi=150)

# spot-check the two boundary conditions of the closed form
eps, R = 1e-2, 2.0
h, t = 1e-6, 0.37
w = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R, t)
w1 = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R - h, t)
w2 = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R - 2 * h, t)
robin = (3 * w - 4 * w1 + w2) / (2 * h) + alpha * w
print(f"outer Robin residual: {abs(robin):.2e}")
rho = eps * r1


def w_at(r):
    return asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, r, t)


dr = (-3 * w_at(rho) + 4 * w_at(rho + h) - w_at(rho + 2 * h)) / (2 * h)
print(f"inner Neumann mismatch: {abs(dr - k * rho ** (k - 1) * math.cos(t)):.2e}")
print(f"figure in {out / 'demo_wer.png'}")
