"""Rendering of verification reports: text table, JSON, CSV and an SVG plot."""
from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum

import numpy as np

from .formula import TERM_NAMES, VerificationReport

CSV_HEADER = ("N", "k", "lhs", "t1", "t2", "t3", "t4", "t5", "t6",
              "residual", "zeros_used", "l_max")


def to_json(reports: list[VerificationReport], config: dict, timings: bool = True) -> str:
    """One JSON document; ``sort_keys`` keeps the output byte-stable."""
    doc = {
        "schema_version": 1,
        "config": config,
        "reports": [r.to_dict(timings=timings) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_row(r: VerificationReport) -> list:
    t = r.terms
    return [r.query.n, repr(r.query.k), repr(r.lhs)] \
        + [repr(getattr(t, name).value) for name in TERM_NAMES] \
        + [repr(r.residual), t.t3.zeros_used, max(t.t5.ell_max, t.t6.ell_max)]


def to_csv(reports: list[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(csv_row(r))
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return "unknown"
    if isinstance(x, float) and not math.isfinite(x):
        return "unknown"
    return f"{x: .12e}"


def to_table(reports: list[VerificationReport], timings: bool = True) -> str:
    lines = []
    for r in reports:
        t = r.terms
        lines.append(f"N = {r.query.n}   k = {r.query.k:g}   normalization = {r.query.normalization.value}")
        lines.append(f"  zeros: {t.t3.zeros_used} in single sums, {t.t6.zeros_used} in double sum;"
                     f" ell <= {t.t5.ell_max} (T5), {t.t6.ell_max} (T6)")
        lines.append(f"  {'term':<6}{'value':>22}{'imag residue':>22}{'tail estimate':>22}")
        for name, term in t.terms().items():
            lines.append(f"  {name:<6}{_fmt(term.value):>22}{_fmt(term.imag_residue):>22}"
                         f"{_fmt(term.tail_estimate):>22}")
        lines.append(f"  {'total':<6}{_fmt(t.total):>22}")
        lines.append(f"  {'lhs':<6}{_fmt(r.lhs):>22}")
        lines.append(f"  {'resid':<6}{_fmt(r.residual):>22}   (relative to T1: {r.relative_residual:.3e})")
        if not t.imag_ok:
            bad = [n for n, term in t.terms().items() if not term.imag_ok]
            lines.append(f"  imaginary parts did not cancel in: {', '.join(bad)}")
        if r.diagnostics.get("too_few_zeros"):
            lines.append(f"  note: only {r.zeros['count']} zeros available, {r.zeros['requested']} requested")
        if r.zeros.get("low_precision"):
            lines.append("  note: zeros file has fewer than 9 decimals")
        if timings and r.timings:
            parts = ", ".join(f"{k} {v:.3f}s" for k, v in sorted(r.timings.items()))
            lines.append(f"  timings: {parts}")
        lines.append("")
    return "\n".join(lines)


def oracle_table(results) -> str:
    width = max([len(r.family) for r in results] + [6])
    name_w = max([len(r.name) for r in results] + [5])
    lines = [f"{'family':<{width}}  {'check':<{name_w}}  {'value':>12}  {'tolerance':>12}  result"]
    for r in results:
        lines.append(f"{r.family:<{width}}  {r.name:<{name_w}}  {r.value:12.3e}  {r.tolerance:12.3e}  "
                     f"{'pass' if r.passed else 'FAIL'}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


def _log_ticks(lo: float, hi: float):
    return [10.0 ** e for e in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)]


def residual_plot_svg(ns, residuals, width: int = 640, height: int = 420) -> str:
    """Log-log plot of ``|residual|`` and ``|residual| / N^(1/2)`` against ``N``."""
    ns = [float(n) for n in ns]
    series = {
        "|residual|": [abs(r) for r in residuals],
        "|residual| / sqrt(N)": [abs(r) / math.sqrt(n) for r, n in zip(residuals, ns)],
    }
    colours = {"|residual|": "#1f77b4", "|residual| / sqrt(N)": "#d62728"}
    ys = [v for vals in series.values() for v in vals if v > 0]
    if not ys:
        ys = [1.0]
    x_lo, x_hi = min(ns), max(ns)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo / 10, x_hi * 10
    y_lo, y_hi = min(ys), max(ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo / 10, y_hi * 10
    xt = _log_ticks(x_lo, x_hi)
    yt = _log_ticks(y_lo, y_hi)
    x_lo, x_hi, y_lo, y_hi = xt[0], xt[-1], yt[0], yt[-1]
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + pw * (math.log10(x) - math.log10(x_lo)) / (math.log10(x_hi) - math.log10(x_lo))

    def py(y):
        return top + ph * (1 - (math.log10(y) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo)))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for x in xt:
        out.append(f'<line x1="{px(x):.2f}" y1="{top}" x2="{px(x):.2f}" y2="{top + ph}" stroke="#ddd"/>')
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 18}" text-anchor="middle">1e{round(math.log10(x))}</text>')
    for y in yt:
        out.append(f'<line x1="{left}" y1="{py(y):.2f}" x2="{left + pw}" y2="{py(y):.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{py(y) + 4:.2f}" text-anchor="end">1e{round(math.log10(y))}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">N</text>')
    for i, (label, vals) in enumerate(series.items()):
        pts = [(px(n), py(v)) for n, v in zip(ns, vals) if v > 0]
        c = colours[label]
        if len(pts) > 1:
            path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{c}" stroke-width="2"/>')
        for x, y in pts:
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="{c}"/>')
        out.append(f'<text x="{left + 10}" y="{top + 16 + 16 * i}" fill="{c}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
