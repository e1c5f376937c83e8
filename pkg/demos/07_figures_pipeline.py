"""End-to-end pipeline: run an experiment, render the CSV with fpp-plots.

The renderer is the separate TypeScript package in frontend/ and consumes
only the CSV file; build it once with `npm install && npm run build` in
frontend/.  This script skips the rendering step when the build is absent.
"""

import subprocess
import tempfile
from pathlib import Path

from fpplab import ExperimentConfig, TwoPoint, run_to_files

workdir = Path(tempfile.mkdtemp())
csv_path = workdir / "variance.csv"

cfg = ExperimentConfig(
    experiment="variance_scaling",
    d=2,
    law=TwoPoint(1.0, 2.0, 0.5),
    n_values=[8, 16, 32, 64],
    replications=120,
    master_seed=0,
)
run_to_files(cfg, csv_path)
print("experiment CSV:", csv_path)

renderer = Path(__file__).resolve().parent.parent / "frontend" / "dist" / "cli.js"
if renderer.exists():
    fig = workdir / "variance.svg"
    subprocess.run(
        ["node", str(renderer), "--in", str(csv_path), "--kind", "scaling",
         "--out", str(fig)],
        check=True,
    )
    print("figure:", fig)
    svg = fig.read_text()
    print("series in figure:", svg.count('class="series"'),
          "/ reference curves:", svg.count('class="reference"'))
else:
    print("frontend not built; skipping the rendering step")
    print("  (cd frontend && npm install && npm run build)")
