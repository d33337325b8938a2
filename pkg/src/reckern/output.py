"""Result emission: per-replicate CSV and JSON summary."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .montecarlo import McReport, report_checks


def replicate_rows(report: McReport):
    """Rows (replicate, x_1..x_d, f_hat, phi_hat, r_hat, T_oracle, T_plugin).

    Undefined ratios yield empty fields.  T columns are empty when the plan
    did not request standardized statistics or the point was undefined.
    """
    plan = report.plan
    d = plan.cfg.dim
    header = (["replicate"] + [f"x_{j+1}" for j in range(d)]
              + ["f_hat", "phi_hat", "r_hat", "T_oracle", "T_plugin"])
    rows = [header]
    for g, p in enumerate(report.points):
        defined = ~np.isnan(report.rep_r[:, g])
        t_iter = iter(p.t_oracle) if p.t_oracle is not None else None
        tp_iter = iter(p.t_plugin) if p.t_plugin is not None else None
        for j in range(plan.replicates):
            r_val = report.rep_r[j, g]
            t_o = t_p = ""
            if defined[j]:
                if t_iter is not None:
                    t_o = f"{next(t_iter):.17g}"
                if tp_iter is not None:
                    t_p = f"{next(tp_iter):.17g}"
            rows.append([
                j, *(f"{v:.17g}" for v in p.x),
                f"{report.rep_f[j, g]:.17g}",
                f"{report.rep_phi[j, g]:.17g}",
                f"{r_val:.17g}" if defined[j] else "",
                t_o, t_p,
            ])
    return rows


def write_replicates_csv(report: McReport, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(replicate_rows(report))


def _clean(value):
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    return value


def summary_dict(report: McReport) -> dict:
    plan = report.plan
    sched = plan.cfg.schedule
    out = {
        "model": plan.model.name,
        "kernel": plan.cfg.kernel.family,
        "ell": sched.ell,
        "bandwidth": {"c": sched.c, "nu": sched.nu},
        "n": plan.n,
        "replicates": plan.replicates,
        "seed": plan.seed,
        "zero_bias": plan.zero_bias,
        "statistics": list(plan.statistics),
        "backend": _backend_name(),
        "truncation": {
            "exceed_online": report.exceed_online,
            "exceed_final_threshold": report.exceed_final,
        },
        "points": [],
        "checks": report_checks(report),
    }
    for p in report.points:
        entry = {
            "x": [float(v) for v in p.x],
            "theory": {k: _clean(float(v)) for k, v in p.theory.items()},
            "empirical": {
                "mean_f": _clean(p.mean_f),
                "var_f_scaled": _clean(p.var_f),
                "mean_phi": _clean(p.mean_phi),
                "var_phi_scaled": _clean(p.var_phi),
                "mean_phi_tilde": _clean(p.mean_phi_tilde),
                "var_phi_tilde_scaled": _clean(p.var_phi_tilde),
                "cov_f_phi_tilde_scaled": _clean(p.cov_f_phi_tilde),
                "mean_r": _clean(p.mean_r),
                "var_r": _clean(p.var_r),
                "n_undefined": p.n_undefined,
                "max_abs_phi_gap": _clean(p.max_abs_phi_gap),
            },
        }
        for mode, ks, t in (("oracle", p.ks_oracle, p.t_oracle),
                            ("plugin", p.ks_plugin, p.t_plugin)):
            if ks is not None:
                entry[f"ks_{mode}"] = {
                    "d_stat": ks.d_stat, "n_eff": ks.n_eff,
                    "critical_01": ks.critical_01, "pass": ks.passed,
                    "var_t": float(np.var(t, ddof=1)),
                    "mean_t": float(np.mean(t)),
                }
        out["points"].append(entry)
    return out


def _backend_name() -> str:
    from . import _accel
    return _accel.backend_name()


def write_summary_json(report: McReport, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summary_dict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
