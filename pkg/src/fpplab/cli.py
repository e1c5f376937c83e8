"""fpp-lab command line: run experiments and check suites from a config.

Exit codes: 0 all assertions passed, 1 an assertion row failed (failing
rows are listed), 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import (
    EXPERIMENTS,
    AssumptionError,
    ConfigError,
    config_from_dict,
    failing_rows,
    load_config_doc,
    run_to_files,
)

CONFIG_SCHEMA = """\
Config file: a single JSON document with snake_case fields

  experiment    one of: variance_scaling, fm_compare, geo_length,
                low_density, cheap_path, animals, encoding, entropy_suite
                (overridden by the chosen subcommand)
  d             lattice dimension, 2 or 3
  law           tagged law record, e.g.
                {"family": "two_point", "a": 1.0, "b": 2.0, "p": 0.5}
                families: two_point(a,b,p), uniform(lo,hi),
                exponential(rate), pareto(xmin,alpha),
                finite_atomic(values,probs),
                dirac_plus_uniform(atom,atom_mass,lo,hi),
                mixture(components,weights)
  n_values      ascending displacement magnitudes, x = n*e1
  replications  Monte Carlo replications (>= 2)
  master_seed   64-bit seed; all replication seeds derive from it
  pad_exponent  box padding exponent, default 0.75
  out_path      CSV output path (also set by --out)
  epsilons      low_density intervals, default [0.01, 0.05, 0.1, 0.2]
  alpha         low_density moment exponent, default 2.0
  cheap_a       cheap_path threshold slope, default 1.1

Output: CSV with header
  experiment,n,statistic,value,std_err,reps,boundary_frac,seed
plus a JSON run manifest next to it.  WORKERS=<int> controls parallelism
only; it never changes output bytes.
"""

SUBCOMMANDS = {
    "variance": "variance_scaling",
    "fm": "fm_compare",
    "geo-length": "geo_length",
    "low-density": "low_density",
    "cheap-path": "cheap_path",
    "animals": "animals",
    "encoding": "encoding",
    "entropy": "entropy_suite",
    "all": None,
}


def _parse_set(expr: str) -> tuple[list[str], object]:
    if "=" not in expr:
        raise ConfigError(f"--set expects key=value, got {expr!r}")
    key, raw = expr.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.split("."), value


def _apply_override(doc: dict, path: list[str], value) -> None:
    node = doc
    for part in path[:-1]:
        if not isinstance(node.get(part), dict):
            node[part] = {}
        node = node[part]
    node[path[-1]] = value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpp-lab",
        description="First-passage percolation experiments and check suites.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=CONFIG_SCHEMA,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, experiment in SUBCOMMANDS.items():
        sp = sub.add_parser(
            name,
            help=(f"run the {experiment} experiment" if experiment
                  else "run every experiment with the same config"),
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog=CONFIG_SCHEMA,
        )
        sp.add_argument("--config", required=True, help="path to the JSON config")
        sp.add_argument("--out", help="override the CSV output path")
        sp.add_argument("--seed", type=int, help="override master_seed")
        sp.add_argument("--workers", type=int, help="set the WORKERS env knob")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="dotted-path config override, e.g. law.p=0.4")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg_doc_base = _load_doc(args)
        experiments = ([SUBCOMMANDS[args.subcommand]] if SUBCOMMANDS[args.subcommand]
                       else list(EXPERIMENTS))
        if args.workers is not None:
            os.environ["WORKERS"] = str(args.workers)
        all_rows = []
        for experiment in experiments:
            doc = json.loads(json.dumps(cfg_doc_base))
            doc["experiment"] = experiment
            cfg = config_from_dict(doc)
            out = args.out or cfg.out_path
            if out is None:
                raise ConfigError("no output path: set out_path in the config or pass --out")
            if len(experiments) > 1:
                out = f"{out}.{experiment}.csv" if not out.endswith(".csv") \
                    else out[:-4] + f".{experiment}.csv"
            rows = run_to_files(cfg, out)
            all_rows.extend(rows)
            print(f"{experiment}: wrote {len(rows)} rows to {out}")
    except (ConfigError, AssumptionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failures = failing_rows(all_rows)
    if failures:
        print("failed assertions:", file=sys.stderr)
        for r in failures:
            print(f"  {r.experiment} n={r.n} {r.statistic} value={r.value:g}",
                  file=sys.stderr)
        return 1
    return 0


def _load_doc(args) -> dict:
    doc = load_config_doc(args.config)
    if args.seed is not None:
        doc["master_seed"] = args.seed
    for expr in args.set:
        path, value = _parse_set(expr)
        _apply_override(doc, path, value)
    return doc


if __name__ == "__main__":
    sys.exit(main())
