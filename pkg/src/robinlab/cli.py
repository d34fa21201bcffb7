"""Command-line interface.

Subcommands: ``mesh`` (emit a mesh), ``eig`` (spectrum for one spec),
``torsion`` (flux solve and rigidity), ``sweep`` (run one config),
``verify`` (run the bundled acceptance configs), ``predict`` (print the
closed-form predictions of a config's checks).

Exit codes: 0 all checks pass, 1 check failure, 2 invalid config,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import geometry, harness, oracle


def _add_common(p, config_required=True):
    p.add_argument("--config", required=config_required,
                   help="path to a JSON experiment config")
    p.add_argument("--out", default=None,
                   help="output directory (default: config out field, else ./out)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def _load(args):
    config = harness.load_config(args.config)
    if args.out is None:
        args.out = config.out or "out"
    return config


def _case_mesh(config, eps):
    spec = config.spec
    mp = config.mesh
    if isinstance(spec.domain, geometry.Disk):
        if spec.hole is None:
            return geometry.build_disk_mesh(spec.domain.radius, 16, mp.n_theta)
        rho = eps * spec.hole.radius
        n_r = geometry.annulus_rings(spec.domain.radius, rho, mp.grading,
                                     mp.first_layer)
        return geometry.build_annulus_mesh(spec.domain.radius, rho, n_r,
                                           mp.n_theta, mp.grading)
    if spec.hole is None:
        return geometry.build_rect_mesh(spec.domain.ax, spec.domain.ay, mp.n_cell)
    w = eps * spec.hole.ax
    return geometry.build_rect_with_hole_mesh(spec.domain.ax, spec.domain.ay,
                                              spec.hole_center, w, mp.n_cell)


def cmd_mesh(args):
    config = _load(args)
    eps = config.eps_list[0]
    mesh = _case_mesh(config, eps)
    mesh.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{config.name}_mesh.txt"
    geometry.save_mesh(mesh, path)
    print(f"{path}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} "
          f"triangles, h_max={mesh.h_max:.6g}")
    return 0


def cmd_eig(args):
    config = _load(args)
    ctx = harness._Context(config, seed=args.seed)
    eps = config.eps_list[0]
    print(f"# {config.name}: eps={eps}, alpha={config.spec.alpha}, "
          f"c_alpha={ctx.c_alpha}")
    if config.route in ("oracle", "both") and ctx.is_disk:
        R = config.spec.domain.radius
        print("# oracle sector eigenvalues (m, j, lambda)")
        for m in range(4):
            for j in (1, 2):
                if config.spec.hole is None:
                    lam = oracle.disk_robin_eigen(m, j, config.spec.alpha, R)
                else:
                    lam = oracle.annulus_robin_eigen(
                        m, j, config.spec.alpha, R, eps * config.spec.hole.radius)
                print(f"{m} {j} {lam!r}")
    if config.route in ("fem", "both"):
        mesh = _case_mesh(config, eps)
        _, spec = ctx._fem_eigen(mesh)
        print("# fem lowest eigenvalues (j, lambda, residual)")
        for j, (lam, res) in enumerate(zip(spec.lam, spec.residuals), start=1):
            print(f"{j} {lam!r} {res:.2e}")
    return 0


def cmd_torsion(args):
    config = _load(args)
    ctx = harness._Context(config, seed=args.seed)
    if config.spec.hole is None or config.mode is None:
        raise harness.ConfigError("torsion needs a hole and a mode")
    print("# eps  T_eps  l2(V)^2")
    for eps in config.eps_list:
        out = {"eps": eps, "h": "oracle", "lambda0": ctx.lam0}
        ctx._case_torsion(eps, out)
        print(f"{eps!r} {out['T_eps']!r} {out['l2_V']!r}")
    return 0


def cmd_sweep(args):
    config = _load(args)
    report = harness.run(config, threads=args.threads, seed=args.seed)
    for p in harness.emit(report, args.out):
        print(f"wrote {p}")
    for c in report.checks:
        print(f"{c.check_id}: {'PASS' if c.passed else 'FAIL'} ({c.detail})")
    return 0 if report.passed else 1


def cmd_verify(args):
    if args.out is None:
        args.out = "out"
    names = harness.bundled_config_names()
    all_ok = True
    for name in names:
        config = harness.load_bundled_config(name)
        report = harness.run(config, threads=args.threads, seed=args.seed)
        harness.emit(report, args.out)
        for c in report.checks:
            print(f"{name}: {c.check_id}: {'PASS' if c.passed else 'FAIL'} "
                  f"({c.detail})")
        all_ok &= report.passed
    print(f"verify: {'PASS' if all_ok else 'FAIL'}")
    return 0 if all_ok else 1


def cmd_predict(args):
    config = _load(args)
    ctx = harness._Context(config, seed=args.seed)
    from . import asymptotics

    for c in config.checks:
        cid = c["id"]
        if cid == "T2.2-coefficient":
            pred = asymptotics.predict("T2.2", alpha=ctx.alpha,
                                       perimeter=config.spec.hole.perimeter,
                                       u0=ctx.taylor.value, k=ctx.taylor.k)
        elif cid in ("T2.9-coefficient", "P6.7-torsion"):
            pred = asymptotics.predict(
                "T2.9" if cid.startswith("T2.9") else "P6.7", k=ctx.taylor.k,
                r1=config.spec.hole.radius, a=ctx.taylor.a, b=ctx.taylor.b)
        elif cid == "T2.4-exponent-bound":
            pred = asymptotics.predict("T2.4", k=ctx.taylor.k)
        else:
            print(f"{cid}: no closed-form prediction")
            continue
        coef = "bound only" if pred.bound_only else repr(pred.C)
        print(f"{cid}: exponent {pred.p}, coefficient {coef}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="robinlab",
        description="Robin-Laplacian small-hole spectral laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_config in (
        ("mesh", cmd_mesh, True),
        ("eig", cmd_eig, True),
        ("torsion", cmd_torsion, True),
        ("sweep", cmd_sweep, True),
        ("verify", cmd_verify, False),
        ("predict", cmd_predict, True),
    ):
        p = sub.add_parser(name)
        _add_common(p, config_required=needs_config)
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except harness.NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
