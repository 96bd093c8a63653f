"""Threshold sweep and classifier comparison experiments."""

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .dataset import filter_by_stimulus
from .features import build_feature_matrix, correlations
from .learners import cross_validate, stratified_kfold

log = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = tuple(round(0.50 + 0.05 * i, 2) for i in range(10))
DEFAULT_RHO_TH = 0.8


@dataclass(frozen=True)
class SweepRow:
    stimulus: str
    rho_th: float
    classifier: str
    mean_accuracy: float
    fold_accuracies: tuple
    fold_digest: str = field(default=None, compare=False)


@dataclass
class SweepResult:
    rows: list

    def series(self):
        """``{(stimulus, classifier): (thresholds, accuracies)}`` in row order."""
        out = {}
        for r in self.rows:
            xs, ys = out.setdefault((r.stimulus, r.classifier), ([], []))
            xs.append(r.rho_th)
            ys.append(r.mean_accuracy)
        return out

    def to_csv(self):
        k = max((len(r.fold_accuracies) for r in self.rows), default=0)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["stimulus", "rho_th", "classifier", "mean_accuracy", *(f"fold_{i + 1}" for i in range(k))])
        for r in self.rows:
            writer.writerow([r.stimulus, repr(r.rho_th), r.classifier, repr(r.mean_accuracy), *map(repr, r.fold_accuracies)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        reader = csv.reader(io.StringIO(text))
        next(reader)
        rows = []
        for rec in reader:
            rows.append(SweepRow(rec[0], float(rec[1]), rec[2], float(rec[3]), tuple(float(v) for v in rec[4:] if v != "")))
        return cls(rows)


def _check_thresholds(thresholds):
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    for t in thresholds:
        if not 0.0 < t < 1.0:
            raise ValueError(f"threshold {t} outside (0, 1)")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be strictly increasing without duplicates")
    return thresholds


def run_sweep(ds, thresholds, spec, k=10, seed=0, workers=1):
    """Cross-validate ``spec`` at every threshold, separately per stimulus.

    Correlations are computed once per epoch; features are rebuilt for each
    threshold. Within a stimulus every threshold uses the same folds.
    Rows are ordered by stimulus, then threshold.
    """
    thresholds = _check_thresholds(thresholds)
    rows = []
    for stim in ds.stimuli():
        sub = filter_by_stimulus(ds, stim)
        corrs = correlations(sub, workers)
        folds = stratified_kfold([lab.group for lab in sub.labels], k, seed)
        for t in thresholds:
            fm = build_feature_matrix(sub, t, workers=workers, corrs=corrs)
            rep = cross_validate(spec, fm, k, seed, folds=folds, workers=workers, rho_th=t, stimulus=stim)
            log.info("sweep %s rho_th=%.2f %s: %.4f", stim.value, t, spec.kind, rep.mean_accuracy)
            rows.append(SweepRow(stim.value, t, spec.kind, rep.mean_accuracy, tuple(rep.fold_accuracies), rep.fold_digest))
    return SweepResult(rows)


@dataclass
class ComparisonResult:
    """Mean accuracy per (stimulus, classifier) cell, in evaluation order."""

    rho_th: float
    reports: list

    @property
    def cells(self):
        return [(r.stimulus, r.classifier, r.mean_accuracy) for r in self.reports]

    def table(self):
        out = {}
        for stim, clf, acc in self.cells:
            out.setdefault(stim, {})[clf] = acc
        return out

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["stimulus", "classifier", "mean_accuracy"])
        for stim, clf, acc in self.cells:
            writer.writerow([stim, clf, repr(acc)])
        return buf.getvalue()

    def to_json(self):
        doc = {"rho_th": self.rho_th, "cells": [r.to_dict() for r in self.reports]}
        return json.dumps(doc, indent=2) + "\n"


def run_comparison(ds, rho_th, specs, k=10, seed=0, workers=1):
    """Cross-validate every classifier on every stimulus at one threshold.

    All classifiers of a stimulus share one feature matrix and one fold split.
    """
    if not specs:
        raise ValueError("specs must be non-empty")
    if not 0.0 < float(rho_th) < 1.0:
        raise ValueError(f"rho_th must lie in (0, 1), got {rho_th}")
    reports = []
    for stim in ds.stimuli():
        sub = filter_by_stimulus(ds, stim)
        fm = build_feature_matrix(sub, rho_th, workers=workers)
        folds = stratified_kfold(fm.groups, k, seed)
        for spec in specs:
            rep = cross_validate(spec, fm, k, seed, folds=folds, workers=workers, rho_th=rho_th, stimulus=stim)
            rep.sampling_rate_hz = ds.sampling_rate_hz
            log.info("compare %s %s: %.4f", stim.value, spec.kind, rep.mean_accuracy)
            reports.append(rep)
    return ComparisonResult(float(rho_th), reports)


# -- plotting ---------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 64, 150, 24, 52


def _fmt(v):
    return f"{v:.2f}"


def render_svg(sweep):
    """SVG line chart of mean accuracy against threshold, one polyline per series."""
    series = sweep.series()
    if not series:
        raise ValueError("cannot plot an empty sweep")
    xs_all = [x for xs, _ in series.values() for x in xs]
    x_lo, x_hi = min(xs_all), max(xs_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.05, x_hi + 0.05
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return _TOP + (1.0 - y) * ph

    multi_clf = len({clf for _, clf in series}) > 1
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<g id="axes" stroke="black" fill="none"><line x1="{_LEFT}" y1="{_TOP + ph}" x2="{_LEFT + pw}" y2="{_TOP + ph}"/>'
        f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{_TOP + ph}"/></g>',
    ]
    ticks = ['<g id="ticks" fill="black">']
    for y in np.linspace(0.0, 1.0, 6):
        ticks.append(f'<text x="{_LEFT - 8}" y="{_fmt(py(y) + 4)}" text-anchor="end">{y:.1f}</text>')
    for x in sorted(set(xs_all)):
        ticks.append(f'<text x="{_fmt(px(x))}" y="{_TOP + ph + 18}" text-anchor="middle">{x:.2f}</text>')
    ticks.append(f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 10}" text-anchor="middle">correlation threshold</text>')
    ticks.append(f'<text transform="translate(16 {_TOP + ph / 2:.2f}) rotate(-90)" text-anchor="middle">mean accuracy</text>')
    ticks.append("</g>")
    out.extend(ticks)

    for n, ((stim, clf), (xs, ys)) in enumerate(series.items()):
        color = _PALETTE[n % len(_PALETTE)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
        name = f"{stim} / {clf}" if multi_clf else stim
        out.append(f'<polyline class="series" data-series="{name}" fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = _TOP + 14 + 18 * n
        lx = _LEFT + pw + 14
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(sweep, path):
    svg = render_svg(sweep)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return path
