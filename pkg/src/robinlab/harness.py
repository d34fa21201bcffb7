"""Experiment runner: declarative sweep configs, reports, and verdicts.

A config names a problem (domain, hole, Robin parameter), a mode, a route
(oracle, fem, or both), an eps sweep, and a list of checks with tolerances.
``run`` computes exactly the quantities the checks need, per eps; ``emit``
writes the CSV report, per-check plot data, and a human-readable summary.

Exit-code contract (used by the CLI): 0 all checks pass, 1 check failure,
2 invalid config, 3 numerical failure (including oracle/FEM route mismatch).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import assembly, asymptotics, eigensolve, geometry, oracle, ratefit, solves
from .geometry import HOLE, Disk, ProblemSpec, Rect

__all__ = [
    "ConfigError",
    "NumericalError",
    "ExperimentConfig",
    "ReportRow",
    "CheckResult",
    "Report",
    "run",
    "emit",
    "load_config",
    "bundled_config_names",
    "load_bundled_config",
]


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical failure, including route cross-validation mismatch (exit 3)."""


# ----------------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------------

@dataclass
class MeshParams:
    n_theta: int = 96
    n_cell: int = 32
    grading: float = 1.15
    levels: int = 2
    first_layer: float = 0.6
    eig_count: int = 8


@dataclass
class ExperimentConfig:
    name: str
    spec: ProblemSpec
    route: str = "oracle"
    mode: oracle.ModeSpec = None
    eigen_index: int = None
    eps_list: tuple = ()
    mesh: MeshParams = field(default_factory=MeshParams)
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    route_tol: float = 5e-3
    out: str = None

    def validate(self):
        if self.route not in ("oracle", "fem", "both"):
            raise ConfigError(f"unknown route {self.route!r}")
        if not self.eps_list:
            raise ConfigError("eps_list must be non-empty")
        if list(self.eps_list) != sorted(self.eps_list, reverse=True):
            raise ConfigError("eps_list must be sorted descending")
        if any(e <= 0 for e in self.eps_list):
            raise ConfigError("eps values must be positive")
        for c in self.checks:
            if c.get("tol", 1.0) <= 0:
                raise ConfigError(f"non-positive tolerance in check {c}")
        if self.route in ("oracle", "both"):
            dom, hole = self.spec.domain, self.spec.hole
            ok = isinstance(dom, (Disk, Rect)) and (
                hole is None or isinstance(hole, (Disk, Rect)))
            if not ok:
                raise ConfigError("oracle route needs disk or rectangle geometry")
            if isinstance(dom, Disk) and isinstance(hole, Disk):
                if tuple(self.spec.hole_center) != (0.0, 0.0):
                    raise ConfigError("disk-in-disk oracle runs must be concentric")
        try:
            self.spec.with_eps(max(self.eps_list))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def _spec_from_json(d):
    def shape(s):
        if s is None:
            return None
        if s["type"] == "disk":
            return Disk(s.get("radius", s.get("r1")))
        if s["type"] == "rect":
            if "half_width" in s:
                return Rect(s["half_width"])
            return Rect(s["ax"], s.get("ay"))
        raise ConfigError(f"unknown shape {s['type']!r}")

    return ProblemSpec(domain=shape(d["domain"]), hole=shape(d.get("hole")),
                       hole_center=tuple(d.get("hole_center", (0.0, 0.0))),
                       eps=d.get("eps", 1.0), alpha=d["alpha"])


def config_from_dict(d):
    mode = None
    if d.get("mode"):
        md = dict(d["mode"])
        fam = md.pop("family")
        mode = oracle.ModeSpec(fam, **md)
    checks = []
    for c in d.get("checks", []):
        checks.append({"id": c[0], "tol": c[1]} if isinstance(c, (list, tuple))
                      else dict(c))
    mesh = MeshParams(**d.get("mesh", {}))
    try:
        sd = dict(d["spec"])
        # the sweep supplies eps; validate the spec at the largest one
        if "eps" not in sd and d.get("eps_list"):
            sd["eps"] = max(d["eps_list"])
        spec = _spec_from_json(sd)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad problem spec: {exc}") from exc
    return ExperimentConfig(
        name=d["name"], spec=spec, route=d.get("route", "oracle"), mode=mode,
        eigen_index=d.get("eigen_index"), eps_list=tuple(d.get("eps_list", ())),
        mesh=mesh, checks=checks, extra=d.get("extra", {}),
        route_tol=d.get("route_tol", 5e-3), out=d.get("out"))


def load_config(path):
    with open(path) as f:
        return config_from_dict(json.load(f))


def bundled_config_names():
    pkg = resources.files("robinlab") / "configs"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_bundled_config(name):
    pkg = resources.files("robinlab") / "configs"
    return config_from_dict(json.loads((pkg / f"{name}.json").read_text()))


# ----------------------------------------------------------------------------
# Report containers
# ----------------------------------------------------------------------------

@dataclass
class ReportRow:
    eps: float
    h: object
    lambda0: float = None
    lambda_eps: float = None
    delta: float = None
    T_eps: float = None
    prediction: float = None
    residual_ratio: float = None


@dataclass
class CheckResult:
    check_id: str
    passed: bool
    observed: object
    target: object
    tol: float
    detail: str = ""


@dataclass
class Report:
    name: str
    rows: list
    checks: list
    plots: dict

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


# ----------------------------------------------------------------------------
# Quantity computation
# ----------------------------------------------------------------------------

_REQUIRES = {
    "T2.2-coefficient": {"lambda"},
    "T2.9-coefficient": {"lambda"},
    "P6.7-torsion": {"torsion"},
    "T2.4-exponent-bound": {"lambda"},
    "expansion-residual-decay": {"lambda", "torsion", "integrals"},
    "T2.7-eigenfunction-rate": {"eigfun"},
    "trace-slope": {"trace"},
    "extension-bounded": {"extension"},
    "l2-over-torsion-decreasing": {"torsion"},
    "spectral-stability-monotone": set(),
    "sign-negative-both-alphas": set(),
    "wer-suite": set(),
    "formula-consistency": set(),
}


class _Context:
    """Per-config state shared across the eps sweep."""

    def __init__(self, config, seed=0):
        self.config = config
        self.seed = seed
        self.spec = config.spec
        self.alpha = config.spec.alpha
        self.is_disk = isinstance(config.spec.domain, Disk)
        self.field = None
        self.lam0 = None
        self.taylor = None
        if config.mode is not None:
            if config.mode.family == "disk":
                if not self.is_disk:
                    raise ConfigError("disk mode on a non-disk domain")
                self.field = oracle.DiskModeField(
                    config.mode.m, config.mode.jrad, self.alpha,
                    config.spec.domain.radius, parity=config.mode.parity)
            else:
                dom = config.spec.domain
                self.field = oracle.RectModeField(
                    config.mode.p, config.mode.q, self.alpha, dom.ax, dom.ay)
            self.lam0 = self.field.lam
            self.taylor = self._taylor()
        self.c_alpha = self._choose_shift()

    def _taylor(self):
        if self.config.mode.family == "disk":
            return self.field.taylor_data()
        return oracle.taylor_data(self.config.mode, field=self.field,
                                  at=self.spec.hole_center)

    def _choose_shift(self):
        if self.is_disk:
            lam1 = min(oracle.disk_robin_eigen(m, 1, self.alpha,
                                               self.spec.domain.radius)
                       for m in range(7))
            return oracle.choose_shift_oracle(lam1)
        mesh = geometry.build_rect_mesh(self.spec.domain.ax, self.spec.domain.ay,
                                        max(8, self.config.mesh.n_cell // 4))
        c, _ = assembly.choose_c_alpha(assembly.assemble(mesh, self.alpha))
        return c

    # -- FEM helpers ---------------------------------------------------------

    def _annulus_meshes(self, eps):
        R = self.spec.domain.radius
        rho = eps * self.spec.hole.radius
        mp = self.config.mesh
        n_r = geometry.annulus_rings(R, rho, mp.grading, mp.first_layer)
        return geometry.annulus_mesh_family(R, rho, n_r, mp.n_theta,
                                            mp.grading, mp.levels)

    def _rect_meshes(self, eps):
        dom, hole = self.spec.domain, self.spec.hole
        w = eps * hole.ax
        cx, cy = self.spec.hole_center
        mp = self.config.mesh
        pert = geometry.build_rect_with_hole_mesh(dom.ax, dom.ay, (cx, cy), w,
                                                  mp.n_cell)
        unpert = geometry.build_rect_mesh(dom.ax, dom.ay, mp.n_cell,
                                          extra_x=(cx - w, cx + w),
                                          extra_y=(cy - w, cy + w))
        perts, unperts = [pert], [unpert]
        for _ in range(mp.levels - 1):
            perts.append(geometry.refine(perts[-1]))
            unperts.append(geometry.refine(unperts[-1]))
        return perts, unperts

    def _fem_eigen(self, mesh, count=None):
        forms = assembly.assemble(mesh, self.alpha).with_shift(self.c_alpha)
        spec = eigensolve.lowest_eigenpairs(forms.q_matrix(), forms.M,
                                            count or self.config.mesh.eig_count,
                                            c_alpha=self.c_alpha)
        if spec.mu[0] <= 1.0:
            raise NumericalError(
                f"coercivity certificate failed: mu_1 = {spec.mu[0]:.4f}")
        return forms, spec

    def _fem_lambda_rect(self, meshes, index):
        vals = []
        for mesh in meshes:
            _, spec = self._fem_eigen(mesh, count=max(4, index + 2))
            vals.append(spec.lam[index - 1])
        return ratefit.richardson(vals).value

    def _flux_data(self):
        fld, alpha = self.field, self.alpha

        def g(pts, nrm):
            gx, gy = fld.grad(pts[:, 0], pts[:, 1])
            return gx * nrm[:, 0] + gy * nrm[:, 1] + alpha * fld.value(
                pts[:, 0], pts[:, 1])

        return g

    # -- per-eps quantities ----------------------------------------------------

    def compute_case(self, eps, required):
        out = {"eps": eps, "h": "oracle"}
        if required & {"lambda", "torsion", "integrals"}:
            out["lambda0"] = self.lam0
        if "lambda" in required:
            self._case_lambda(eps, out)
        if "torsion" in required:
            self._case_torsion(eps, out)
        if "integrals" in required:
            out["integrals"] = asymptotics.hole_integrals(
                self.field, self.spec.with_eps(eps))
        if {"lambda", "torsion", "integrals"} <= required:
            out["residual_ratio"] = asymptotics.residual_ratio(
                out["lambda_eps"], out["lambda0"], out["T_eps"],
                out["integrals"], self.alpha)
        if "eigfun" in required:
            self._case_eigfun(eps, out)
        if "trace" in required:
            self._case_trace(eps, out)
        if "extension" in required:
            self._case_extension(eps, out)
        return out

    def _require_concentric(self, what):
        if not (self.is_disk and isinstance(self.spec.hole, Disk)):
            raise ConfigError(f"{what} needs the concentric disk/disk geometry")

    def _oracle_lambda_eps(self, eps):
        self._require_concentric("the sector eigenvalue sweep")
        R = self.spec.domain.radius
        rho = eps * self.spec.hole.radius
        return oracle.annulus_robin_eigen(self.config.mode.m,
                                          self.config.mode.jrad, self.alpha,
                                          R, rho, near=self.lam0)

    def _fem_lambda_disk_sector(self, meshes, target):
        """Sector eigenvalue on a mesh family, matched against the oracle
        target (pair average for m >= 1), Richardson extrapolated."""
        vals = []
        for mesh in meshes:
            _, spec = self._fem_eigen(mesh)
            m = self.config.mode.m
            sel = np.argsort(np.abs(spec.lam - target))[:(2 if m else 1)]
            vals.append(float(np.mean(spec.lam[sel])))
        return ratefit.richardson(vals).value

    def _fem_lambda0_disk(self):
        if getattr(self, "_lam0_fem", None) is None:
            mp = self.config.mesh
            meshes = geometry.disk_mesh_family(self.spec.domain.radius,
                                               mp.n_theta // 4, mp.n_theta,
                                               levels=mp.levels)
            self._lam0_fem = self._fem_lambda_disk_sector(meshes, self.lam0)
        return self._lam0_fem

    def _case_lambda(self, eps, out):
        route = self.config.route
        if self.is_disk:
            lam_oracle = self._oracle_lambda_eps(eps)
            if lam_oracle + self.c_alpha <= 1.0:
                raise NumericalError(
                    f"pinned shift loses coercivity at eps={eps}")
            if route == "oracle":
                out["lambda_eps"] = lam_oracle
            else:
                meshes = self._annulus_meshes(eps)
                lam_fem = self._fem_lambda_disk_sector(meshes, lam_oracle)
                out["h"] = meshes[0].h_max
                scale = max(1.0, abs(lam_oracle))
                if abs(lam_fem - lam_oracle) > self.config.route_tol * scale:
                    raise NumericalError(
                        f"route mismatch at eps={eps}: fem {lam_fem} vs "
                        f"oracle {lam_oracle}")
                if route == "both":
                    out["lambda_eps"] = lam_oracle
                else:
                    # fem-only: difference both spectra on the FEM route so
                    # discretization errors cancel in delta
                    out["lambda_eps"] = lam_fem
                    out["lambda0"] = self._fem_lambda0_disk()
        else:
            perts, unperts = self._rect_meshes(eps)
            index = self.config.eigen_index or 1
            out["lambda_eps"] = self._fem_lambda_rect(perts, index)
            out["lambda0"] = self._fem_lambda_rect(unperts, index)
            out["h"] = perts[0].h_max
            if self.config.route == "both" and self.lam0 is not None:
                scale = max(1.0, abs(self.lam0))
                if abs(out["lambda0"] - self.lam0) > self.config.route_tol * scale:
                    raise NumericalError(
                        f"route mismatch on the unperturbed rectangle: fem "
                        f"{out['lambda0']} vs oracle {self.lam0}")
        out["delta"] = out["lambda_eps"] - out["lambda0"]

    def _case_torsion(self, eps, out):
        self._require_concentric("the torsion sweep")
        R = self.spec.domain.radius
        rho = eps * self.spec.hole.radius
        if self.config.route == "oracle":
            m = self.config.mode.m
            rad = float(self.field._radial(rho)) * self.field.norm_const
            radd = float(self.field._radial_deriv(rho)) * self.field.norm_const
            g_m = -radd + self.alpha * rad
            sol = oracle.annulus_torsion(m, self.alpha, self.c_alpha, R, rho, g_m)
            out["T_eps"], out["l2_V"] = sol.T, sol.l2_sq
            return
        g = self._flux_data()
        Ts, l2s = [], []
        meshes = self._annulus_meshes(eps)
        for mesh in meshes:
            forms = assembly.assemble(mesh, self.alpha).with_shift(self.c_alpha)
            load = assembly.assemble_flux_load(mesh, HOLE, g)
            res = solves.solve_flux_problem(forms, load)
            if abs(res.energy - res.T_eps) > 1e-8 * max(abs(res.energy), 1e-300):
                raise NumericalError("torsion energy/load-pairing mismatch")
            Ts.append(res.T_eps)
            l2s.append(float(res.V @ (forms.M @ res.V)))
        out["T_eps"] = ratefit.richardson(Ts).value
        out["l2_V"] = l2s[-1]
        out["h"] = meshes[0].h_max

    def _case_eigfun(self, eps, out):
        lam_eps = self._oracle_lambda_eps(eps)
        m = self.config.mode.m
        vals = []
        meshes = self._annulus_meshes(eps)
        for mesh in meshes:
            forms, spec = self._fem_eigen(mesh)
            sel = np.argsort(np.abs(spec.lam - lam_eps))[:(2 if m else 1)]
            V = spec.vecs[:, sel]
            w = self.field.value(mesh.vertices[:, 0], mesh.vertices[:, 1])
            u = V @ (V.T @ (forms.M @ w))
            u /= math.sqrt(float(u @ (forms.M @ u)))
            u = eigensolve.align_sign(u, w, forms.M)
            d = u - w
            vals.append(float(d @ ((forms.K + forms.M) @ d)))
        out["eigfun_h1_sq"] = ratefit.richardson(vals).value
        out["h"] = meshes[0].h_max

    def _case_trace(self, eps, out):
        self._require_concentric("the trace-constant sweep")
        mesh = self._annulus_meshes(eps)[-1]
        forms = assembly.assemble(mesh, self.alpha)
        out["trace_tau"] = solves.trace_constant(forms)

    def _case_extension(self, eps, out):
        self._require_concentric("the extension sweep")
        rho = eps * self.spec.hole.radius
        mesh = self._annulus_meshes(eps)[-1]
        forms, spec = self._fem_eigen(mesh)
        # the concentric ground state has a constant hole trace (extension
        # energy 0 to rounding); use the first mode whose trace varies
        hole_ids = mesh.boundary_vertices(HOLE)
        u = spec.vecs[:, 0]
        for j in range(spec.vecs.shape[1]):
            tr = spec.vecs[hole_ids, j]
            if float(np.std(tr)) > 1e-8 * max(1.0, float(np.abs(tr).max())):
                u = spec.vecs[:, j]
                break
        n_theta = sum(t == HOLE for t in mesh.tags)
        hole_mesh = geometry.build_disk_mesh(rho, 8, n_theta)
        # hole boundary nodes coincide with the annulus inner ring
        ann_ids = {}
        for i in mesh.boundary_vertices(HOLE):
            p = mesh.vertices[i]
            ann_ids[(round(float(p[0]), 12), round(float(p[1]), 12))] = i
        trace = np.zeros(len(hole_mesh.vertices))
        for j in hole_mesh.boundary_vertices():
            p = hole_mesh.vertices[j]
            trace[j] = u[ann_ids[(round(float(p[0]), 12), round(float(p[1]), 12))]]
        _, energy = solves.harmonic_extension(hole_mesh, trace)
        grad_u = float(u @ (forms.K @ u))
        out["extension_ratio"] = energy / grad_u


# ----------------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------------

def _sweep(table, key):
    return [(row["eps"], row[key]) for row in table if row.get(key) is not None]


def _fit_exponent(points):
    """Fitted exponent per the curvature rule: global fit unless curved."""
    fit = ratefit.fit_loglog(points)
    if fit.curved:
        return ratefit.tail_fit(points).p, fit
    return fit.p, fit


def _check_coefficient(ctx, table, check, pred):
    pts = _sweep(table, "delta")
    p_hat, _ = _fit_exponent(pts)
    C_hat = ratefit.leading_coefficient(pts, pred.p)
    exp_tol = check.get("exp_tol", 0.05 if ctx.config.route == "oracle" else 0.1)
    dev = abs(C_hat - pred.C) / abs(pred.C)
    ok = abs(p_hat - pred.p) <= exp_tol and dev <= check["tol"]
    detail = (f"p_hat={p_hat:.4f} (target {pred.p} +/- {exp_tol}), "
              f"C_hat={C_hat:.6g} vs {pred.C:.6g} ({dev:.2%})")
    plot = [(e, abs(d) / abs(pred.value(e))) for e, d in pts]
    return CheckResult(check["id"], ok, C_hat, pred.C, check["tol"], detail), plot


def _eval_check(ctx, table, check, seed):
    cid = check["id"]
    spec, alpha = ctx.spec, ctx.alpha
    if cid == "T2.2-coefficient":
        pred = asymptotics.predict("T2.2", alpha=alpha,
                                   perimeter=spec.hole.perimeter,
                                   u0=ctx.taylor.value, k=ctx.taylor.k)
        res, plot = _check_coefficient(ctx, table, check, pred)
        return res, plot, pred
    if cid == "T2.9-coefficient":
        pred = asymptotics.predict("T2.9", k=ctx.taylor.k, r1=spec.hole.radius,
                                   a=ctx.taylor.a, b=ctx.taylor.b)
        res, plot = _check_coefficient(ctx, table, check, pred)
        return res, plot, pred
    if cid == "P6.7-torsion":
        pred = asymptotics.predict("P6.7", k=ctx.taylor.k, r1=spec.hole.radius,
                                   a=ctx.taylor.a, b=ctx.taylor.b)
        pts = _sweep(table, "T_eps")
        ratios = {e: T / pred.value(e) for e, T in pts}
        smallest = sorted(ratios)[:2]
        worst = max(abs(ratios[e] - 1.0) for e in smallest)
        ok = worst <= check["tol"]
        detail = f"max |T/(C eps^p) - 1| over two smallest eps = {worst:.2%}"
        plot = sorted(ratios.items(), reverse=True)
        return CheckResult(cid, ok, worst, 0.0, check["tol"], detail), plot, pred
    if cid == "T2.4-exponent-bound":
        pts = _sweep(table, "delta")
        p_hat, _ = _fit_exponent(pts)
        bound = 2 * ctx.taylor.k - check.get("tol", 0.15)
        ok = p_hat >= bound
        detail = f"fitted exponent {p_hat:.4f} >= {bound}"
        return (CheckResult(cid, ok, p_hat, bound, check.get("tol", 0.15),
                            detail), [(e, abs(d)) for e, d in pts], None)
    if cid == "expansion-residual-decay":
        ratios = _sweep(table, "residual_ratio")
        bound = check.get("tol", 1.0 / 3.0)
        first, last = ratios[0][1], ratios[-1][1]
        ok = last < bound * first
        detail = (f"ratio {last:.5f} at eps={ratios[-1][0]} vs {first:.5f} "
                  f"at eps={ratios[0][0]}")
        return CheckResult(cid, ok, last, bound * first, bound, detail), ratios, None
    if cid == "T2.7-eigenfunction-rate":
        pts = _sweep(table, "eigfun_h1_sq")
        fit = ratefit.fit_loglog(pts)
        bound = 2 * ctx.taylor.h - check.get("tol", 0.15)
        ok = fit.p >= bound
        detail = f"fitted exponent {fit.p:.4f} >= {bound}"
        return (CheckResult(cid, ok, fit.p, bound, check.get("tol", 0.15),
                            detail), pts, None)
    if cid == "trace-slope":
        pts = _sweep(table, "trace_tau")
        p_hat, _ = _fit_exponent(pts)
        lo, hi = check.get("window", (0.8, 1.0))
        ok = lo <= p_hat <= hi
        detail = f"slope {p_hat:.4f} in [{lo}, {hi}]"
        return (CheckResult(cid, ok, p_hat, (lo, hi), check.get("tol", 1.0),
                            detail), pts, None)
    if cid == "extension-bounded":
        pts = _sweep(table, "extension_ratio")
        bound = check.get("tol", 2.0)
        worst = max(v for _, v in pts)
        ok = worst <= bound * pts[0][1]
        detail = f"max ratio {worst:.4g} vs {bound} x first {pts[0][1]:.4g}"
        return CheckResult(cid, ok, worst, bound * pts[0][1], bound, detail), pts, None
    if cid == "l2-over-torsion-decreasing":
        pts = [(row["eps"], row["l2_V"] / row["T_eps"]) for row in table
               if row.get("l2_V") is not None]
        factor = check.get("tol", 2.0)
        ok = pts[-1][1] <= pts[0][1] / factor
        detail = (f"ratio {pts[-1][1]:.4g} at smallest eps vs first "
                  f"{pts[0][1]:.4g} (need a {factor}x drop)")
        return (CheckResult(cid, ok, pts[-1][1], pts[0][1] / factor, factor,
                            detail), pts, None)
    if cid == "spectral-stability-monotone":
        return _check_spectral_stability(ctx, check)
    if cid == "sign-negative-both-alphas":
        return _check_sign_negative(ctx, check)
    if cid == "wer-suite":
        return _check_wer_suite(ctx, check)
    if cid == "formula-consistency":
        return _check_formula_consistency(ctx, check, seed)
    raise ConfigError(f"unknown check id {cid!r}")


def _lowest_sector_eigs(alpha, R, rho=None, count=4, m_max=4, j_max=3):
    vals = []
    for m in range(m_max + 1):
        for j in range(1, j_max + 1):
            lam = (oracle.disk_robin_eigen(m, j, alpha, R) if rho is None else
                   oracle.annulus_robin_eigen(m, j, alpha, R, rho))
            vals.append(lam)
            if m > 0:
                vals.append(lam)  # cos/sin double
    return sorted(vals)[:count]


def _check_spectral_stability(ctx, check):
    R = ctx.spec.domain.radius
    r1 = ctx.spec.hole.radius
    base = _lowest_sector_eigs(ctx.alpha, R)
    prev = None
    ok = True
    plot = []
    for eps in ctx.config.eps_list:
        eigs = _lowest_sector_eigs(ctx.alpha, R, rho=eps * r1)
        diffs = [abs(a - b) for a, b in zip(eigs, base)]
        if prev is not None:
            ok &= all(d < p for d, p in zip(diffs, prev))
        prev = diffs
        plot.append((eps, max(diffs)))
    detail = "|lam_j^eps - lam_j^0| decreasing along the sweep for j = 1..4"
    return CheckResult(check["id"], ok, ok, True, check.get("tol", 1.0),
                       detail), plot, None


def _check_sign_negative(ctx, check):
    R = ctx.spec.domain.radius
    r1 = ctx.spec.hole.radius
    mode = ctx.config.mode
    ok = True
    plot = []
    for sgn in (1.0, -1.0):
        alpha = sgn * abs(ctx.alpha)
        lam0 = oracle.disk_robin_eigen(mode.m, mode.jrad, alpha, R)
        for eps in list(ctx.config.eps_list)[-2:]:
            lam = oracle.annulus_robin_eigen(mode.m, mode.jrad, alpha, R,
                                             eps * r1, near=lam0)
            ok &= (lam - lam0) < 0
            plot.append((eps, lam - lam0))
    detail = "delta < 0 for alpha = +|alpha| and -|alpha| at the two smallest eps"
    return CheckResult(check["id"], ok, ok, True, check.get("tol", 1.0),
                       detail), plot, None


def _check_wer_suite(ctx, check):
    ex = ctx.config.extra
    k = int(ex.get("k", 1))
    r1 = float(ex.get("r1", 1.0))
    a, b = float(ex.get("a", 1.0)), float(ex.get("b", 0.0))
    alpha = float(ex.get("alpha", ctx.alpha))
    R_list = tuple(ex.get("R_list", (2.0, 3.0)))
    target = k * math.pi * r1 ** (2 * k) * (a * a + b * b / k ** 2)
    failures = []
    eps = float(ex.get("eps_torsion", 1e-2))
    step = 1e-6
    for R in R_list:
        t0 = 0.37
        w = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R, t0)
        w1 = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R - step, t0)
        w2 = asymptotics.wer_eval(eps, R, r1, alpha, k, a, b, R - 2 * step, t0)
        dr = (3.0 * w - 4.0 * w1 + w2) / (2.0 * step)
        scale = max(abs(w), abs(dr), 1e-30)
        if abs(dr + alpha * w) / scale > check.get("robin_tol", 1e-6):
            failures.append(f"outer Robin residual at R={R}")
    eps_in = float(ex.get("eps_inner", 1e-3))
    theta = np.linspace(0.0, 2.0 * math.pi, 17)[:-1]
    wvals = asymptotics.wer_eval(eps_in, R_list[0], r1, alpha, k, a, b,
                                 eps_in * r1, theta)
    f = a * np.cos(k * theta) + (b / k) * np.sin(k * theta)
    targ = -r1 ** k * f * eps_in ** k
    amp = float(np.max(np.abs(targ)))
    if float(np.max(np.abs(wvals - targ))) > check.get("inner_tol", 5e-3) * amp:
        failures.append("inner asymptotic value")
    ratios = []
    for R in R_list:
        T = asymptotics.torsion_wer(eps, R, r1, alpha, k, a, b)
        ratios.append(T / (target * eps ** (2 * k)))
        if abs(ratios[-1] - 1.0) > check.get("tol", 0.01):
            failures.append(f"rigidity ratio at R={R}")
    if abs(ratios[0] - ratios[-1]) > check.get("tol", 0.01):
        failures.append("R-independence")
    ok = not failures
    detail = "; ".join(failures) if failures else (
        "ratios " + ", ".join(f"{r:.6f}" for r in ratios))
    plot = list(zip(R_list, ratios))
    return CheckResult(check["id"], ok, ratios, 1.0, check.get("tol", 0.01),
                       detail), plot, None


def _check_formula_consistency(ctx, check, seed):
    rng = np.random.default_rng(seed or 1234)
    worst = 0.0
    plot = []
    for i in range(int(check.get("trials", 20))):
        k = int(rng.integers(1, 5))
        r1 = float(rng.uniform(0.05, 1.0))
        N = int(rng.integers(3, 6))
        I = float(rng.uniform(0.1, 10.0))
        t28 = asymptotics.predict("T2.8", N=N, k=k, r1=r1, boundary_integral=I)
        tt = asymptotics.ttilde_ball(N, k, r1, I)
        gp = asymptotics.grad_pk_ball(N, k, r1, I)
        dev = abs(t28.C + (tt + gp)) / max(abs(t28.C), 1e-300)
        worst = max(worst, dev)
        plot.append((float(i), dev))
    ok = worst <= check.get("tol", 1e-12)
    detail = f"worst relative inconsistency {worst:.3e} over {len(plot)} tuples"
    return CheckResult(check["id"], ok, worst, 0.0, check.get("tol", 1e-12),
                       detail), plot, None


# ----------------------------------------------------------------------------
# Run and emit
# ----------------------------------------------------------------------------

def run(config, threads=1, seed=0):
    """Execute one experiment config and return a Report.

    Raises ConfigError for invalid configs and NumericalError for solver or
    route-validation failures, matching the CLI exit-code contract.
    """
    config.validate()
    ctx = _Context(config, seed=seed)
    required = set()
    for c in config.checks:
        if c["id"] not in _REQUIRES:
            raise ConfigError(f"unknown check id {c['id']!r}")
        required |= _REQUIRES[c["id"]]

    eps_list = list(config.eps_list)
    if required:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                table = list(pool.map(
                    lambda e: ctx.compute_case(e, required), eps_list))
        else:
            table = [ctx.compute_case(e, required) for e in eps_list]
    else:
        table = [{"eps": e, "h": "oracle"} for e in eps_list]

    checks, plots = [], {}
    prediction = None
    for c in config.checks:
        result, plot, pred = _eval_check(ctx, table, c, seed)
        checks.append(result)
        plots[c["id"]] = plot
        if pred is not None and prediction is None:
            prediction = pred

    rows = []
    for case in table:
        pred_val = None
        if prediction is not None and not prediction.bound_only:
            pred_val = prediction.value(case["eps"])
        rows.append(ReportRow(
            eps=case["eps"], h=case.get("h", "oracle"),
            lambda0=case.get("lambda0"), lambda_eps=case.get("lambda_eps"),
            delta=case.get("delta"), T_eps=case.get("T_eps"),
            prediction=pred_val, residual_ratio=case.get("residual_ratio")))
    return Report(name=config.name, rows=rows, checks=checks, plots=plots)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


def emit(report, out_dir):
    """Write CSV, per-check plot data, and the summary; returns file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    csv_path = out / f"{report.name}.csv"
    with open(csv_path, "w") as f:
        f.write("name,eps,h,lambda0,lambdaEps,delta,Teps,prediction,residualRatio\n")
        for r in report.rows:
            f.write(",".join([
                report.name, _fmt(r.eps), _fmt(r.h), _fmt(r.lambda0),
                _fmt(r.lambda_eps), _fmt(r.delta), _fmt(r.T_eps),
                _fmt(r.prediction), _fmt(r.residual_ratio)]) + "\n")
    paths.append(csv_path)
    for cid, plot in report.plots.items():
        p = out / f"{report.name}__{cid.replace('.', '_')}.dat"
        with open(p, "w") as f:
            for x, y in plot:
                f.write(f"{_fmt(x)} {_fmt(y)}\n")
        paths.append(p)
    summary = out / f"{report.name}__summary.txt"
    with open(summary, "w") as f:
        for c in report.checks:
            f.write(f"{report.name}: {c.check_id}: "
                    f"{'PASS' if c.passed else 'FAIL'} ({c.detail})\n")
        f.write(f"{report.name}: verdict {'PASS' if report.passed else 'FAIL'}\n")
    paths.append(summary)
    return paths
