"""Report payloads shared by the CLI subcommands.

Every subcommand builds a plain dict; `render` turns it into either the
structured form (canonical JSON with a schema tag, keys sorted) or a short
human-readable text.  Structured output depends only on the inputs, never on
timing or worker count.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from . import bounds, screen
from .cover import CoverHomology, MatchingCount, dimension_bound
from .dynamics import DilatationEstimate
from .homology import BigradedDims, HomologyResult

SCHEMA = "ribbonkit.report/1"


def _table(h: BigradedDims) -> list[list[int]]:
    return [list(row) for row in h.rows()]


def _num(x):
    """Exact rationals as "p/q" strings, integers as ints, floats unchanged."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def homology_report(name: str, res: HomologyResult) -> dict:
    f = res.fiberedness
    return {
        "command": "homology",
        "input": name,
        "grid_size": res.grid.size,
        "tilde": _table(res.tilde),
        "hat": _table(res.hat),
        "hat_total": res.hat.total(),
        "genus": f.genus,
        "fibered": f.fibered,
        "nearly_fibered": f.nearly_fibered,
        "top_dimension": f.top_dimension,
        "alexander": [[e, c] for e, c in res.alexander.coeffs.items()],
        "alexander_text": str(res.alexander),
    }


def cover_report(name: str, size: int, n: int, count: MatchingCount, cover_hom: CoverHomology | None) -> dict:
    bound = math.factorial(size) ** n
    out = {
        "command": "cover",
        "input": name,
        "grid_size": size,
        "sheets": n,
        "generator_count": count.exact,
        "bound_only": count.too_large,
        "bregman_bound": _num(count.bregman_bound),
        "bregman_bound_exact": count.bound_exact,
        "factorial_power": bound,
        "dimension_bound": _num(dimension_bound(size, n)),
        "count_within_bound": None if count.exact is None else count.exact <= bound,
    }
    if cover_hom is not None:
        out["cover_homology"] = {
            "generators": cover_hom.generators,
            "table_relative": _table(cover_hom.table),
            "tilde_total": cover_hom.tilde_total,
            "hat_total": _num(cover_hom.hat_total),
            "hat_within_bound": cover_hom.hat_total <= dimension_bound(size, n),
            "d_squared_zero": cover_hom.d_squared_zero,
        }
    return out


def dilatation_report(name: str, est: DilatationEstimate, tol: float) -> dict:
    return {
        "command": "dilatation",
        "input": name,
        "spectral_radius": est.spectral_radius,
        "interval": list(est.certified_interval),
        "tol": tol,
        "iterations": est.iterations,
        "trace_sequence": [[n, v] for n, v in est.trace_sequence],
        "powers_of_two": [[n, v] for n, v in est.power_of_two_subsequence()],
        "trace_envelope_ok": est.converged,
    }


def bound_report(rep: bounds.BoundReport) -> dict:
    out = {
        "command": "bounds",
        "bound": rep.name,
        "inputs": rep.inputs,
        "value": rep.bound_value,
        "interval": [rep.interval.lower, rep.interval.upper],
    }
    if rep.measured is not None:
        out.update(measured=rep.measured, satisfied=rep.satisfied, near_boundary=rep.near_boundary)
    if rep.notes:
        out["notes"] = list(rep.notes)
    return out


def screen_report(target: str, verdicts) -> dict:
    return {
        "command": "screen",
        "target": target,
        "verdicts": [screen.verdict_to_dict(v) for v in verdicts],
        "summary": screen.summarize(verdicts),
    }


def structured(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2) + "\n"


def _fmt(x):
    return f"{x:.12g}" if isinstance(x, float) else str(x)


def _human_homology(p):
    lines = [f"grid {p['input']}  size {p['grid_size']}", "hat:  maslov alexander dim"]
    lines += [f"  {m:6d} {a:9d} {d:4d}" for m, a, d in p["hat"]]
    lines.append("tilde:  maslov alexander dim")
    lines += [f"  {m:6d} {a:9d} {d:4d}" for m, a, d in p["tilde"]]
    lines.append(f"total {p['hat_total']}  genus {p['genus']}  fibered {str(p['fibered']).lower()}"
                 f"  nearly_fibered {str(p['nearly_fibered']).lower()}")
    lines.append(f"alexander {p['alexander_text']}")
    return lines


def _human_cover(p):
    count = "not computed (bound only, size*n above ceiling)" if p["bound_only"] else str(p["generator_count"])
    lines = [
        f"grid {p['input']}  size {p['grid_size']}  sheets {p['sheets']}",
        f"generators {count}",
        f"(size!)^n {p['factorial_power']}",
        f"(size!)^n / 2^(size-1) {p['dimension_bound']}",
    ]
    if p["count_within_bound"] is not None:
        lines.append(f"count <= (size!)^n: {'yes' if p['count_within_bound'] else 'NO'}")
    ch = p.get("cover_homology")
    if ch:
        lines.append(f"cover complex: {ch['generators']} generators, tilde total {ch['tilde_total']}, "
                     f"hat total {ch['hat_total']} (experimental, relative gradings)")
    return lines


def _human_dilatation(p):
    lo, hi = p["interval"]
    lines = [f"matrix {p['input']}", f"spectral radius {p['spectral_radius']:.12g}  in [{lo!r}, {hi!r}]"]
    lines += [f"  n={n:<5d} tr(M^n)^(1/n) = {v:.12g}" for n, v in p["powers_of_two"]]
    if p["trace_sequence"]:
        n, v = p["trace_sequence"][-1]
        lines.append(f"  n={n:<5d} tr(M^n)^(1/n) = {v:.12g}")
    lines.append(f"trace envelope {'ok' if p['trace_envelope_ok'] else 'VIOLATED'}")
    return lines


def _human_bounds(p):
    args = " ".join(f"{k}={_fmt(v)}" for k, v in p["inputs"].items())
    lines = [f"{p['bound']} {args}", f"value {_fmt(p['value'])}  interval [{p['interval'][0]!r}, {p['interval'][1]!r}]"]
    if "measured" in p:
        verdict = "satisfied" if p["satisfied"] else "VIOLATED"
        if p["near_boundary"]:
            verdict += " (near boundary)"
        lines.append(f"measured {_fmt(p['measured'])}: {verdict}")
    return lines


def _human_screen(p):
    lines = [f"target {p['target']}"]
    for v in p["verdicts"]:
        lines.append(f"{v['candidate']:<14} {v['overall']}")
        for r in v["rules"]:
            if r["status"] != "INAPPLICABLE":
                lines.append(f"    {r['rule']} {r['status']:<5} {r['detail']}")
    s = p["summary"]
    lines.append(f"summary: {s['EXCLUDED']} excluded, {s['POSSIBLE']} possible, {s['MUST_EQUAL']} must-equal")
    return lines


def _human_selftest(p):
    lines = [f"{'PASS' if s['ok'] else 'FAIL'}  {s['name']}: {s['detail']}" for s in p["suites"]]
    lines.append(f"selftest {'passed' if p['ok'] else 'FAILED'}")
    return lines


_HUMAN = {
    "homology": _human_homology,
    "cover": _human_cover,
    "dilatation": _human_dilatation,
    "bounds": _human_bounds,
    "screen": _human_screen,
    "selftest": _human_selftest,
}


def render(payload: dict, fmt: str) -> str:
    if fmt == "structured":
        return structured(payload)
    return "\n".join(_HUMAN[payload["command"]](payload)) + "\n"
