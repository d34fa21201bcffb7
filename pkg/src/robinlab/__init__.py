"""robinlab: numerical checks for Robin-Laplacian spectra under small-hole removal.

The library computes perturbed and unperturbed Robin spectra by two
independent routes (P1 finite elements and semi-analytic Bessel / 1D-product
oracles), solves the associated shifted flux ("torsion") problems, evaluates
the closed-form leading terms of the eigenvalue variation, and fits observed
convergence rates.
"""

from . import assembly, asymptotics, eigensolve, geometry, harness, oracle, ratefit, solves

__all__ = [
    "assembly",
    "asymptotics",
    "eigensolve",
    "geometry",
    "harness",
    "oracle",
    "ratefit",
    "solves",
]

__version__ = "0.1.0"
