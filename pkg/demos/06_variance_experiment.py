"""Variance scaling experiment: Var tau(0, n e1) against n, seeded end to end.

The same experiment is available from the command line:

    fpp-lab variance --config cfg.json --out results.csv

Identical configs produce byte-identical CSV regardless of the WORKERS
environment knob.
"""

import json
import tempfile
from pathlib import Path

from fpplab import ExperimentConfig, TwoPoint, run_to_files

cfg = ExperimentConfig(
    experiment="variance_scaling",
    d=2,
    law=TwoPoint(1.0, 2.0, 0.5),
    n_values=[8, 16, 32],
    replications=200,
    master_seed=0,
)

out = Path(tempfile.mkdtemp()) / "variance.csv"
rows = run_to_files(cfg, out)

print(f"{'n':>4} {'Var tau':>10} {'Var/n':>10} {'Var log n/n':>12}")
table = {(r.n, r.statistic): r for r in rows}
for n in cfg.n_values:
    var = table[(n, "tau_var")]
    print(f"{n:>4} {var.value:>10.4f} {table[(n, 'var_over_n')].value:>10.4f} "
          f"{table[(n, 'var_logn_over_n')].value:>12.4f}  (+- {var.std_err:.3f})")

print()
print("wrote", out)
manifest = json.loads(out.with_suffix(".csv.manifest.json").read_text())
print("manifest echoes the config; seed =", manifest["config"]["master_seed"])
