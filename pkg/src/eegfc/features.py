"""Per-epoch feature vectors built from the five node metrics.

Columns are metric-major: the value of metric ``m`` on channel ``c`` sits at
index ``METRICS.index(m) * C + c`` and is named ``"m:channel"``.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .connectivity import pearson_adjacency, threshold_graph
from .dataset import EpochLabel
from .graph_metrics import METRIC_FUNCTIONS, METRICS, EigenvectorError


class FeatureWarning(UserWarning):
    """A metric block was zero-filled because it could not be computed."""


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    column_names: tuple
    labels: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.column_names):
            raise ValueError("feature values do not match column names")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names are not unique")
        if len(self.labels) != values.shape[0]:
            raise ValueError("labels do not align with rows")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def groups(self):
        return [lab.group for lab in self.labels]

    def __len__(self):
        return self.values.shape[0]


def column_names(layout):
    return tuple(f"{m}:{ch}" for m in METRICS for ch in layout.names)


def graph_features(graph):
    """Concatenate the five metric vectors of one graph in metric-major order."""
    blocks = []
    for name in METRICS:
        try:
            block = METRIC_FUNCTIONS[name](graph).values
        except EigenvectorError as exc:
            warnings.warn(f"{name} block set to zero: {exc}", FeatureWarning, stacklevel=2)
            block = np.zeros(graph.n_nodes)
        blocks.append(block)
    return np.concatenate(blocks)


def epoch_features(epoch, rho_th):
    """Feature vector of length ``5 * C`` for one epoch at threshold ``rho_th``."""
    return graph_features(threshold_graph(pearson_adjacency(epoch), rho_th))


def _features_from_corr(args):
    corr, rho_th = args
    return graph_features(threshold_graph(corr, rho_th))


def correlations(ds, workers=1):
    """Correlation matrices for every record, in dataset order."""
    return pmap(pearson_adjacency, ds.epochs, workers)


def build_feature_matrix(ds, rho_th, workers=1, corrs=None):
    """Feature matrix with one row per record of ``ds``.

    ``corrs`` may carry precomputed correlation matrices (one per record) so
    that a threshold sweep computes them only once.
    """
    if len(ds) == 0:
        raise ValueError("cannot build features for an empty dataset")
    if not 0.0 < float(rho_th) < 1.0:
        raise ValueError(f"rho_th must lie in (0, 1), got {rho_th}")
    if corrs is None:
        corrs = correlations(ds, workers)
    rows = pmap(_features_from_corr, [(c, rho_th) for c in corrs], workers)
    return FeatureMatrix(np.vstack(rows), column_names(ds.layout), tuple(ds.labels))


def write_feature_csv(path, fm):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["group", "stimulus", "subject", *fm.column_names])
        for lab, row in zip(fm.labels, fm.values):
            writer.writerow([lab.group.value, lab.stimulus.value, lab.subject, *map(repr, row.tolist())])


def read_feature_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        labels, rows = [], []
        for rec in reader:
            labels.append(EpochLabel(rec[0], rec[1], rec[2]))
            rows.append([float(v) for v in rec[3:]])
    return FeatureMatrix(np.array(rows, dtype=np.float64).reshape(len(rows), -1), tuple(header[3:]), tuple(labels))
