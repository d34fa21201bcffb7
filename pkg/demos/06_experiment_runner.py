"""Driving the lab through the declarative experiment runner.

A JSON config names the geometry, the mode, the route, the eps sweep, and
the checks with tolerances; ``run`` computes what the checks need and
``emit`` writes the CSV report, one plot-data file per check, and a summary
with PASS/FAIL verdicts. The same machinery backs the ``robinlab`` CLI
(mesh / eig / torsion / sweep / verify / predict).

Run:  python demos/06_experiment_runner.py   (writes out/runner/*)
"""

import pathlib

from robinlab import harness

out = pathlib.Path("out/runner")

config = harness.config_from_dict({
    "name": "demo_round_hole",
    "spec": {"domain": {"type": "disk", "radius": 1.0},
             "hole": {"type": "disk", "r1": 0.5},
             "hole_center": [0.0, 0.0], "alpha": 1.0},
    "route": "oracle",
    "mode": {"family": "disk", "m": 1, "jrad": 1, "parity": "cos"},
    "eps_list": [0.1, 0.05, 0.025, 0.0125],
    "checks": [{"id": "T2.9-coefficient", "tol": 0.03},
               {"id": "P6.7-torsion", "tol": 0.05},
               {"id": "sign-negative-both-alphas"}],
})

report = harness.run(config)
for path in harness.emit(report, out):
    print(f"wrote {path}")
print()
for c in report.checks:
    print(f"{c.check_id}: {'PASS' if c.passed else 'FAIL'}  ({c.detail})")
print()
print((out / "demo_round_hole.csv").read_text())

print("bundled experiment configs (robinlab verify runs them all):")
for name in harness.bundled_config_names():
    print(f"  {name}")
