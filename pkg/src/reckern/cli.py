"""Command-line interface.

Subcommands:

* ``check``  -- validate a configuration against the working assumptions;
  exit 0 when everything passes, 1 on a hard failure, 2 on unreadable input.
* ``theory`` -- print the limit constants for a config at a point as JSON.
* ``run``    -- execute the replication experiment; writes ``results.csv``
  and ``summary.json`` and prints the pass/fail table.
* ``stream`` -- stream an external CSV (header ``x_1,...,x_d,y``) through
  one estimator state and write the per-grid-point snapshot.

Exit codes: 0 success, 1 assumption failure, 2 I/O, parse or schema errors.
``RECKERN_THREADS`` controls replicate parallelism (default serial).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import asymptotics
from .config import ConfigError, load_experiment
from .estimator import RecursiveKernelRegression
from .montecarlo import run as mc_run
from .output import write_replicates_csv, write_summary_json


def _load(path):
    try:
        return load_experiment(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_check(args) -> int:
    exp = _load(args.config)
    report = exp.plan.validate()
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_theory(args) -> int:
    exp = _load(args.config)
    plan = exp.plan
    x = np.array([float(v) for v in args.x.split(",")])
    sched = plan.cfg.schedule
    try:
        clt = asymptotics.clt_params(plan.model, plan.cfg, x, plan.n,
                                     zero_bias=plan.zero_bias)
        constants = {
            "beta_num": sched.beta(sched.r_bias),
            "beta_den": sched.beta(sched.r_den),
            "sigma_sq": asymptotics.sigma_sq_ell(plan.model, plan.cfg, x),
            "bias_bn": clt.bias_bn,
            "sd_limit": clt.sd_limit,
            "scale": clt.scale,
        }
    except (asymptotics.DomainError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(constants, indent=2, sort_keys=True))
    return 0


def cmd_run(args) -> int:
    exp = _load(args.config)
    report_v = exp.plan.validate()
    if not report_v.passed:
        for line in report_v.lines():
            print(line)
        print("aborting: hard validation failure", file=sys.stderr)
        return 1
    for note in report_v.notes:
        print(f"note: {note}")
    out_dir = Path(args.out) if args.out else exp.out_dir
    t0 = time.perf_counter()
    report = mc_run(exp.plan)
    elapsed = time.perf_counter() - t0
    try:
        write_replicates_csv(report, out_dir / "results.csv")
        write_summary_json(report, out_dir / "summary.json")
    except OSError as exc:
        print(f"cannot write results under {out_dir}: {exc}", file=sys.stderr)
        return 2
    from .montecarlo import report_checks
    print(f"completed {exp.plan.replicates} replicates of n={exp.plan.n} "
          f"in {elapsed:.1f}s")
    for check in report_checks(report):
        status = "pass" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}: {check['detail']}")
    print(f"wrote {out_dir / 'results.csv'} and {out_dir / 'summary.json'}")
    return 0


def _read_data_csv(path, dim):
    expected = [f"x_{j+1}" for j in range(dim)] + ["y"]
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                print("no observations: data file is empty", file=sys.stderr)
                raise SystemExit(2)
            header = [h.strip() for h in header]
            if header != expected:
                missing = [c for c in expected if c not in header]
                bad = missing[0] if missing else header[0]
                print(f"data schema mismatch: expected columns {expected}, "
                      f"got {header} (column {bad!r})", file=sys.stderr)
                raise SystemExit(2)
            rows = [[float(v) for v in row] for row in reader if row]
    except OSError as exc:
        print(f"cannot read data file {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)
    if not rows:
        print("no observations: data file has a header but no rows",
              file=sys.stderr)
        raise SystemExit(2)
    data = np.asarray(rows, dtype=float)
    return data[:, :dim], data[:, dim]


def cmd_stream(args) -> int:
    exp = _load(args.config)
    plan = exp.plan
    xs, ys = _read_data_csv(args.data, plan.cfg.dim)
    est = RecursiveKernelRegression(plan.cfg).update_many(xs, ys)
    out_path = Path(args.out) if args.out else exp.out_dir / "snapshot.csv"
    d = plan.cfg.dim
    header = [f"x_{j+1}" for j in range(d)] + ["f_hat", "r_hat", "phi_hat", "n"]
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(est.snapshot_rows())
    except OSError as exc:
        print(f"cannot write snapshot {out_path}: {exc}", file=sys.stderr)
        return 2
    print(f"streamed {est.n} observations; wrote {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reckern",
        description="Streaming recursive kernel regression and its "
                    "Monte Carlo verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a configuration")
    p_check.add_argument("--config", required=True)
    p_check.set_defaults(fn=cmd_check)

    p_theory = sub.add_parser("theory", help="print limit constants as JSON")
    p_theory.add_argument("--config", required=True)
    p_theory.add_argument("--x", required=True,
                          help="evaluation point, comma-separated coordinates")
    p_theory.set_defaults(fn=cmd_theory)

    p_run = sub.add_parser("run", help="run the replication experiment")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.set_defaults(fn=cmd_run)

    p_stream = sub.add_parser("stream", help="stream a data CSV through the estimator")
    p_stream.add_argument("--config", required=True)
    p_stream.add_argument("--data", required=True, help="CSV with header x_1,...,x_d,y")
    p_stream.add_argument("--out", default=None, help="snapshot CSV path")
    p_stream.set_defaults(fn=cmd_stream)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
