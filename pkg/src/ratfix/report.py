"""Deterministic analysis reports.

The machine document is JSON with every float written at 17 significant
digits (bit-faithful on round-trip) and no environment-dependent
content, so identical configs give byte-identical reports.  The human
rendering reuses exactly the numbers of the machine document.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .config import RunConfig, config_digest
from .spaces import FiniteMetricSpace

SCHEMA = "ratfix/report/1"
TRACE_ROW_CAP = 1000  # solve reports keep at most this many orbit rows


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("reports only carry finite numbers")
    return format(x, ".17g")


def dump_json(value, _level: int = 0) -> str:
    """Serialize to JSON with 17-significant-digit floats.

    Key order is insertion order and floats format deterministically,
    so equal inputs produce byte-identical text.
    """
    pad = "  " * _level
    inner = "  " * (_level + 1)
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [inner + dump_json(v, _level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dump_json(v, _level + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(value)!r} into a report")


def _num(value) -> str:
    """Render a number exactly as the machine document does."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(int(value))


def base_report(cfg: RunConfig, subcommand: str, version: str) -> dict:
    return {
        "schema": SCHEMA,
        "version": version,
        "subcommand": subcommand,
        "config_digest": config_digest(cfg),
    }


def point_payload(space, point):
    """JSON-friendly form of a point: id on finite spaces, floats on boxes."""
    if isinstance(space, FiniteMetricSpace):
        return point if isinstance(point, (str, int, float)) else str(point)
    return [float(v) for v in np.atleast_1d(point)]


def certificate_payload(space, cert) -> dict:
    out: dict = {
        "condition_kind": cert.kind,
        "feasible": cert.feasible,
        "scope": cert.scope,
        "pair_count": cert.pair_count,
        "seed": cert.seed,
        "margin": cert.margin,
        "a": cert.a,
        "b": cert.b,
        "basis": cert.basis,
        "vertices": [[float(a), float(b)] for a, b in cert.vertices],
    }
    if cert.feasible:
        out["min_slack"] = cert.min_slack
        out["slacks"] = list(cert.slacks)
    else:
        out["violations"] = [[point_payload(space, x), point_payload(space, y)]
                             for x, y in cert.violations]
    return out


def trace_payload(space, trace) -> dict:
    rows = []
    n_rows = min(len(trace.step_d), TRACE_ROW_CAP)
    for n in range(n_rows):
        row = {
            "n": n,
            "x": point_payload(space, trace.points[n]),
            "step": float(trace.step_d[n]),
        }
        if trace.bounds is not None:
            row["envelope"] = float(trace.bounds[n])
        rows.append(row)
    out: dict = {
        "status": trace.status,
        "iterations": int(len(trace.step_d)),
        "rows": rows,
        "truncated": bool(len(trace.step_d) > n_rows),
    }
    if trace.status == "converged":
        out["fixed_point"] = point_payload(space, trace.fixed_point)
        out["residual"] = float(trace.residual)
    if trace.status == "cycle":
        out["period"] = int(trace.period)
    return out


def property_p_payload(space, report) -> dict:
    return {
        "n_max": report.n_max,
        "scope": report.scope,
        "verdict": report.verdict,
        "fixed_set": [point_payload(space, p) for p in report.fixed_set],
        "rows": [{
            "power": row.power,
            "fixed_set": [point_payload(space, p) for p in row.fixed_set],
            "equal": row.equal,
        } for row in report.rows],
        "witnesses": [{"point": point_payload(space, z), "power": int(n)}
                      for z, n in report.witnesses],
    }


def witness_payload(space, witness, eps0: float, horizon: int,
                    sequence_length: int, note: str | None = None) -> dict:
    out: dict = {
        "eps0": float(eps0),
        "horizon": int(horizon),
        "sequence_length": int(sequence_length),
        "found": witness is not None,
    }
    if note:
        out["note"] = note
    if witness is not None:
        out["rows"] = [{
            "k": k + 1,
            "n": int(witness.n_idx[k]),
            "m": int(witness.m_idx[k]),
            "d_m_n": float(witness.est_gap[k]),
            "d_m1_n": float(witness.est_inner[k]),
            "d_m1_n1": float(witness.est_outer[k]),
            "d_mp1_n1": float(witness.est_shift[k]),
        } for k in range(witness.horizon)]
    return out


def human_lines(report: dict) -> list[str]:
    """Human rendering; every number is lifted verbatim from the machine
    document so the two stay consistent."""
    lines = [f"ratfix {report['version']} [{report['subcommand']}] "
             f"config {report['config_digest'][:12]}"]
    if "certificate" in report:
        c = report["certificate"]
        lines.append(
            f"certificate[{c['condition_kind']}]: "
            f"{'feasible' if c['feasible'] else 'INFEASIBLE'} "
            f"({c['scope']}, {_num(c['pair_count'])} pairs, margin {_num(c['margin'])})")
        if c["feasible"]:
            lines.append(f"  a = {_num(c['a'])}, b = {_num(c['b'])}  "
                         f"basis {c['basis']}  min slack {_num(c['min_slack'])}")
        else:
            lines.append(f"  violating pairs: {_num(len(c['violations']))}")
        for va, vb in c["vertices"]:
            lines.append(f"  vertex a = {_num(va)}, b = {_num(vb)}")
    if "trace" in report:
        t = report["trace"]
        lines.append(f"trace: {t['status']} after {_num(t['iterations'])} steps")
        if t["status"] == "converged":
            fp = t["fixed_point"]
            fp_text = (", ".join(_num(v) for v in fp)
                       if isinstance(fp, list) else str(fp))
            lines.append(f"  fixed point [{fp_text}] residual {_num(t['residual'])}")
        if t["status"] == "cycle":
            lines.append(f"  cycle of period {_num(t['period'])}")
        for row in t["rows"][:12]:
            x = row["x"]
            x_text = ", ".join(_num(v) for v in x) if isinstance(x, list) else str(x)
            line = f"  n={_num(row['n'])} x=[{x_text}] step={_num(row['step'])}"
            if "envelope" in row:
                line += f" envelope={_num(row['envelope'])}"
            lines.append(line)
        if len(t["rows"]) > 12:
            lines.append(f"  ... {_num(len(t['rows']) - 12)} more rows in the machine report")
    if "property_p" in report:
        p = report["property_p"]
        lines.append(f"property-P ({p['scope']}, powers up to {_num(p['n_max'])}): "
                     f"{p['verdict']}")
        lines.append(f"  |fixed set| = {_num(len(p['fixed_set']))}")
        for row in p["rows"]:
            lines.append(f"  power {_num(row['power'])}: "
                         f"|fixed set| = {_num(len(row['fixed_set']))} "
                         f"equal = {row['equal']}")
        for w in p["witnesses"]:
            z = w["point"]
            z_text = ", ".join(_num(v) for v in z) if isinstance(z, list) else str(z)
            lines.append(f"  periodic witness [{z_text}] power {_num(w['power'])}")
    if "witness" in report:
        w = report["witness"]
        lines.append(f"cauchy-violation witness at eps0 = {_num(w['eps0'])}, "
                     f"horizon {_num(w['horizon'])}: "
                     f"{'found' if w['found'] else 'none found'}")
        if w.get("note"):
            lines.append(f"  note: {w['note']}")
        if w["found"]:
            last = w["rows"][-1]
            lines.append(
                f"  at k={_num(last['k'])}: n={_num(last['n'])} m={_num(last['m'])} "
                f"d(x_m,x_n)={_num(last['d_m_n'])} "
                f"d(x_m-1,x_n)={_num(last['d_m1_n'])} "
                f"d(x_m-1,x_n+1)={_num(last['d_m1_n1'])} "
                f"d(x_m+1,x_n+1)={_num(last['d_mp1_n1'])}")
    return lines
