"""EEG functional-connectivity graphs and age-group classification.

Pipeline: multichannel epochs -> Pearson correlation matrix -> thresholded
binary graph -> five node metrics per channel -> cross-validated classifiers.
"""

__version__ = "0.1.0"

from .connectivity import BinaryGraph, CorrelationMatrix, pearson_adjacency, threshold_graph
from .dataset import (
    ChannelLayout,
    EpochLabel,
    EpochMatrix,
    Group,
    LabeledDataset,
    Stimulus,
    filter_by_stimulus,
    load_manifest,
)
from .features import FeatureMatrix, build_feature_matrix, epoch_features
from .graph_metrics import (
    betweenness_centrality,
    closeness_centrality,
    clustering_coefficient,
    degree_centrality,
    eigenvector_centrality,
)
