"""Pearson correlation adjacency and thresholded binary graphs."""

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import ChannelLayout


class ZeroVarianceWarning(UserWarning):
    """A channel is constant over the epoch; its correlations are set to 0."""


@dataclass(frozen=True)
class CorrelationMatrix:
    values: np.ndarray
    layout: ChannelLayout
    constant_channels: tuple = ()


@dataclass(frozen=True)
class BinaryGraph:
    adjacency: np.ndarray
    layout: ChannelLayout
    threshold: float

    @property
    def n_nodes(self):
        return self.adjacency.shape[0]

    def edges(self):
        """Edge list as ``(i, j)`` pairs with ``i < j``, row-major order."""
        i, j = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(a), int(b)) for a, b in zip(i, j)]


def pearson_adjacency(epoch):
    """Pairwise Pearson correlation between the channels of one epoch.

    Means are removed first and the centered cross-products are summed in
    extended precision, so large DC offsets do not cancel catastrophically.
    Channels with zero variance get correlation 0 with every other channel
    and 1 on the diagonal; a :class:`ZeroVarianceWarning` names them.

    Parameters
    ----------
    epoch : EpochMatrix
        Values of shape (T, C).

    Returns
    -------
    CorrelationMatrix
    """
    x = np.asarray(epoch.values, dtype=np.longdouble)
    centered = x - x.mean(axis=0)
    cross = centered.T @ centered
    constant = np.ptp(epoch.values, axis=0) == 0
    ss = np.where(constant, 0, np.diag(cross))

    denom = np.sqrt(np.outer(ss, ss))
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(denom > 0, cross / np.where(denom > 0, denom, 1), 0)
    corr = np.clip(np.asarray(corr, dtype=np.float64), -1.0, 1.0)
    # exact symmetry and unit diagonal regardless of rounding
    corr = np.triu(corr, 1)
    corr = corr + corr.T
    np.fill_diagonal(corr, 1.0)

    names = tuple(epoch.layout.names[i] for i in np.flatnonzero(constant))
    if names:
        warnings.warn(
            f"zero-variance channel(s) {', '.join(names)}: correlations set to 0",
            ZeroVarianceWarning,
            stacklevel=2,
        )
    corr.flags.writeable = False
    return CorrelationMatrix(corr, epoch.layout, names)


def threshold_graph(corr, rho_th):
    """Binary graph with an edge wherever ``corr >= rho_th`` off the diagonal.

    The comparison is signed: strong negative correlations never form edges.
    """
    rho_th = float(rho_th)
    if not 0.0 < rho_th < 1.0:
        raise ValueError(f"rho_th must lie in (0, 1), got {rho_th}")
    values = corr.values
    adjacency = (values >= rho_th).astype(np.uint8)
    np.fill_diagonal(adjacency, 0)
    adjacency.flags.writeable = False
    return BinaryGraph(adjacency, corr.layout, rho_th)


def epoch_graph(epoch, rho_th):
    return threshold_graph(pearson_adjacency(epoch), rho_th)


def write_graph_dump(path, graphs):
    """Write one JSON line per graph: epoch index, threshold and edge list."""
    with open(path, "w", encoding="utf-8") as fh:
        for k, g in enumerate(graphs):
            record = {"epoch_index": k, "threshold": g.threshold, "edges": [list(e) for e in g.edges()]}
            fh.write(json.dumps(record) + "\n")


def read_graph_dump(path, layout):
    graphs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            adj = np.zeros((layout.count, layout.count), dtype=np.uint8)
            for i, j in record["edges"]:
                adj[i, j] = adj[j, i] = 1
            graphs.append(BinaryGraph(adj, layout, float(record["threshold"])))
    return graphs
