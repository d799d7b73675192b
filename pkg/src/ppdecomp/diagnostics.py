"""Diagnostic reports for the product-of-projections spectrum.

A report bundles the observed spectrum with the two threshold bands (green:
bootstrap bound on the joint cluster, blue: random-alignment bound on the
noise cluster), the theoretical noise density mapped to the singular-value
axis, a fixed 40-bin histogram on [0, 1], and, when the planted truth is
available, the noiseless spectrum lines and the three cluster intervals.
Reports render to standalone SVG and round-trip losslessly through JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .decomposition import (DecompositionResult, ProductSpectrum,
                            theorem1_intervals, true_epsilons)
from .exceptions import InvalidInput
from .linalg import principal_spectrum
from .noise import NoiseSpectrumLaw, continuous_mass, density_sv_scale, noise_law

HISTOGRAM_BINS = 40


@dataclass(frozen=True)
class DiagnosticReport:
    spectrum: ProductSpectrum
    green_band: tuple[float, float]
    blue_band: tuple[float, float]
    density_curve: np.ndarray                    # (m, 2) pairs (s, g(s)), count-scaled
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    truth_lines: np.ndarray | None = None
    theorem1: tuple[tuple[float, float], ...] | None = None


def _scaled_density_curve(law: NoiseSpectrumLaw, counts, edges, blue_hi,
                          values, points: int) -> np.ndarray:
    """Noise density on the singular-value axis, scaled to histogram counts.

    The curve area is matched to the count-area of the sub-threshold part of
    the histogram (a visual convention: the continuous law describes only the
    noise-aligned cluster).
    """
    mass = continuous_mass(law)
    if mass <= 0.0 or law.lambda_plus <= law.lambda_minus:
        return np.zeros((0, 2))
    s_lo = float(np.sqrt(law.lambda_minus))
    s_hi = float(np.sqrt(law.lambda_plus))
    s = np.linspace(s_lo, s_hi, points)
    g = density_sv_scale(law, s)
    bin_width = edges[1] - edges[0]
    n_below = int(np.count_nonzero(np.asarray(values) <= blue_hi))
    scale = n_below * bin_width / mass
    return np.column_stack([s, scale * g])


def report_from_parts(spectrum: ProductSpectrum, q1: float, q2: float,
                      truth_lines=None, theorem1=None,
                      bins: int = HISTOGRAM_BINS, points: int = 200) -> DiagnosticReport:
    """Assemble a report from a spectrum and the rank-to-dimension ratios."""
    counts, edges = np.histogram(spectrum.values, bins=bins, range=(0.0, 1.0))
    law = noise_law(q1, q2)
    curve = _scaled_density_curve(law, counts, edges, spectrum.noise_threshold,
                                  spectrum.values, points)
    return DiagnosticReport(
        spectrum=spectrum,
        green_band=(spectrum.bootstrap_threshold, 1.0),
        blue_band=(0.0, spectrum.noise_threshold),
        density_curve=curve,
        histogram_edges=edges,
        histogram_counts=counts,
        truth_lines=None if truth_lines is None else np.asarray(truth_lines, dtype=float),
        theorem1=theorem1,
    )


def build_report(result: DecompositionResult, truth=None,
                 bins: int = HISTOGRAM_BINS, points: int = 200) -> DiagnosticReport:
    """Report for a decomposition result; truth-dependent fields appear iff ``truth`` is given.

    ``truth`` is a :class:`ppdecomp.simulate.SimTruth` (or anything exposing
    ``joint`` and ``individuals``). The noise density and truth-derived
    fields refer to the pair of views whose spectrum the result reports.
    """
    n = result.joint.shape[0]
    i, j = result.binding_pair
    q1 = result.marginal_ranks[i] / n
    q2 = result.marginal_ranks[j] / n
    truth_lines = None
    intervals = None
    if truth is not None:
        x_i = np.hstack([truth.joint, truth.individuals[i]])
        x_j = np.hstack([truth.joint, truth.individuals[j]])
        truth_lines = principal_spectrum(x_i, x_j)
        eps1, eps2 = true_epsilons(x_i, x_j, result.view_bases[i], result.view_bases[j])
        intervals = theorem1_intervals(
            truth.joint, (truth.individuals[i], truth.individuals[j]), eps1, eps2)
    return report_from_parts(result.spectrum, q1, q2, truth_lines=truth_lines,
                             theorem1=intervals, bins=bins, points=points)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_svg(report: DiagnosticReport, width: int = 900, height: int = 480) -> str:
    """Standalone SVG: grey histogram, translucent bands, density polyline, truth lines.

    Deterministic: identical reports render to byte-identical documents.
    """
    if width < 100 or height < 100:
        raise InvalidInput("width and height must be >= 100")
    left, right, top, bottom = 64, 18, 18, 48
    plot_w = width - left - right
    plot_h = height - top - bottom

    counts = report.histogram_counts
    curve = report.density_curve
    y_max = max(float(counts.max()) if counts.size else 0.0,
                float(curve[:, 1].max()) if curve.size else 0.0, 1.0)

    def sx(v):
        return left + v * plot_w

    def sy(v):
        return top + (1.0 - v / y_max) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    ]

    for (lo, hi), color in ((report.blue_band, "#4477cc"), (report.green_band, "#44aa66")):
        w_px = (hi - lo) * plot_w
        if w_px >= 0.01:
            parts.append(
                f'<rect class="band-{color[1:]}" x="{_fmt(sx(lo))}" y="{_fmt(top)}" '
                f'width="{_fmt(w_px)}" height="{_fmt(plot_h)}" fill="{color}" '
                f'fill-opacity="0.25"/>')

    edges = report.histogram_edges
    for k, c in enumerate(counts):
        if c <= 0:
            continue
        x0, x1 = sx(edges[k]), sx(edges[k + 1])
        y0 = sy(float(c))
        parts.append(
            f'<rect class="bar" x="{_fmt(x0)}" y="{_fmt(y0)}" '
            f'width="{_fmt(x1 - x0)}" height="{_fmt(top + plot_h - y0)}" '
            f'fill="#999999" stroke="#666666" stroke-width="0.5"/>')

    if curve.size and float(curve[:, 1].max()) > 0.0:
        pts = " ".join(f"{_fmt(sx(s))},{_fmt(sy(g))}" for s, g in curve)
        parts.append(
            f'<polyline class="density" points="{pts}" fill="none" '
            f'stroke="#223388" stroke-width="1.5"/>')

    if report.truth_lines is not None:
        for v in report.truth_lines:
            parts.append(
                f'<line class="truth-line" x1="{_fmt(sx(v))}" y1="{_fmt(top)}" '
                f'x2="{_fmt(sx(v))}" y2="{_fmt(top + plot_h)}" '
                f'stroke="#cc2222" stroke-width="1"/>')

    axis_y = top + plot_h
    parts.append(f'<line class="axis" x1="{_fmt(left)}" y1="{_fmt(axis_y)}" '
                 f'x2="{_fmt(left + plot_w)}" y2="{_fmt(axis_y)}" stroke="#000000"/>')
    parts.append(f'<line class="axis" x1="{_fmt(left)}" y1="{_fmt(top)}" '
                 f'x2="{_fmt(left)}" y2="{_fmt(axis_y)}" stroke="#000000"/>')
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = sx(tick)
        parts.append(f'<line x1="{_fmt(x)}" y1="{_fmt(axis_y)}" x2="{_fmt(x)}" '
                     f'y2="{_fmt(axis_y + 4)}" stroke="#000000"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{_fmt(axis_y + 18)}" font-size="12" '
                     f'text-anchor="middle">{tick:g}</text>')
    for frac in (0.0, 0.5, 1.0):
        y = sy(frac * y_max)
        parts.append(f'<line x1="{_fmt(left - 4)}" y1="{_fmt(y)}" x2="{_fmt(left)}" '
                     f'y2="{_fmt(y)}" stroke="#000000"/>')
        parts.append(f'<text x="{_fmt(left - 8)}" y="{_fmt(y + 4)}" font-size="12" '
                     f'text-anchor="end">{frac * y_max:g}</text>')
    parts.append(f'<text x="{_fmt(left + plot_w / 2)}" y="{_fmt(height - 8)}" '
                 f'font-size="13" text-anchor="middle">singular value</text>')
    parts.append(f'<text x="16" y="{_fmt(top + plot_h / 2)}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 {_fmt(top + plot_h / 2)})">'
                 f'count</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def export_json(report: DiagnosticReport) -> str:
    """Lossless JSON serialization; optional fields are omitted, not null."""
    payload = {
        "spectrum": [float(v) for v in report.spectrum.values],
        "green_band": [report.green_band[0], report.green_band[1]],
        "blue_band": [report.blue_band[0], report.blue_band[1]],
        "density": [[float(s), float(g)] for s, g in report.density_curve],
    }
    if report.truth_lines is not None:
        payload["truth_lines"] = [float(v) for v in report.truth_lines]
    if report.theorem1 is not None:
        payload["theorem1_intervals"] = [[lo, hi] for lo, hi in report.theorem1]
    payload["histogram"] = {
        "edges": [float(e) for e in report.histogram_edges],
        "counts": [int(c) for c in report.histogram_counts],
    }
    return json.dumps(payload, indent=1) + "\n"


def report_from_json(text: str) -> DiagnosticReport:
    """Inverse of :func:`export_json`."""
    payload = json.loads(text)
    values = np.asarray(payload["spectrum"], dtype=float)
    green = tuple(payload["green_band"])
    blue = tuple(payload["blue_band"])
    spectrum = ProductSpectrum(values=values, bootstrap_threshold=green[0],
                               noise_threshold=blue[1])
    theorem1 = None
    if "theorem1_intervals" in payload:
        theorem1 = tuple((lo, hi) for lo, hi in payload["theorem1_intervals"])
    truth_lines = None
    if "truth_lines" in payload:
        truth_lines = np.asarray(payload["truth_lines"], dtype=float)
    curve = np.asarray(payload["density"], dtype=float).reshape(-1, 2)
    return DiagnosticReport(
        spectrum=spectrum,
        green_band=green,
        blue_band=blue,
        density_curve=curve,
        histogram_edges=np.asarray(payload["histogram"]["edges"], dtype=float),
        histogram_counts=np.asarray(payload["histogram"]["counts"], dtype=int),
        truth_lines=truth_lines,
        theorem1=theorem1,
    )
