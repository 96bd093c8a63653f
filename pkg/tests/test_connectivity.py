import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eegfc.connectivity import (
    BinaryGraph,
    CorrelationMatrix,
    ZeroVarianceWarning,
    epoch_graph,
    pearson_adjacency,
    read_graph_dump,
    threshold_graph,
    write_graph_dump,
)
from eegfc.dataset import ChannelLayout, EpochMatrix, default_layout
from oracles import pearson_direct


def epoch(cols):
    values = np.column_stack(cols).astype(float)
    return EpochMatrix(values, default_layout(values.shape[1]))


def corr_matrix(values):
    values = np.asarray(values, dtype=float)
    return CorrelationMatrix(values, default_layout(len(values)))


def test_identical_columns():
    c = pearson_adjacency(epoch([[1, 2, 3], [1, 2, 3]]))
    np.testing.assert_allclose(c.values, [[1, 1], [1, 1]], atol=1e-15)


def test_anticorrelated_columns():
    c = pearson_adjacency(epoch([[1, 2, 3], [3, 2, 1]]))
    assert c.values[0, 1] == pytest.approx(-1.0, abs=1e-15)


def test_direct_evaluation_and_zero_variance():
    x, y, z = [1, 2, 3, 4], [1, 2, 4, 3], [2, 2, 2, 2]
    with pytest.warns(ZeroVarianceWarning, match="ch03"):
        c = pearson_adjacency(epoch([x, y, z]))
    # oracle: centered sums 4 / sqrt(5 * 5)
    assert pearson_direct(x, y) == pytest.approx(0.8, abs=1e-15)
    assert c.values[0, 1] == pytest.approx(0.8, abs=1e-15)
    assert c.values[0, 2] == 0.0 and c.values[1, 2] == 0.0
    assert c.values[2, 2] == 1.0
    assert c.constant_channels == ("ch03",)


def test_matches_literal_formula_on_random_epoch():
    rng = np.random.default_rng(3)
    values = rng.normal(size=(50, 5)) + 1e6  # large offset stresses cancellation
    c = pearson_adjacency(EpochMatrix(values, default_layout(5)))
    for i in range(5):
        for j in range(5):
            expected = 1.0 if i == j else pearson_direct(values[:, i].tolist(), values[:, j].tolist())
            assert c.values[i, j] == pytest.approx(expected, abs=1e-9)


def test_threshold_excludes_diagonal():
    g = threshold_graph(corr_matrix([[1, 1], [1, 1]]), 0.8)
    np.testing.assert_array_equal(g.adjacency, [[0, 1], [1, 0]])
    assert g.threshold == 0.8


def test_negative_correlation_never_an_edge():
    g = threshold_graph(corr_matrix([[1, -1], [-1, 1]]), 0.8)
    assert not g.adjacency.any()


def test_boundary_is_inclusive():
    c = corr_matrix([[1, 0.85, 0.79], [0.85, 1, 0.80], [0.79, 0.80, 1]])
    g = threshold_graph(c, 0.8)
    assert g.edges() == [(0, 1), (1, 2)]


@pytest.mark.parametrize("rho", [0.0, 1.0, -0.2, 1.5])
def test_threshold_range_rejected(rho):
    with pytest.raises(ValueError):
        threshold_graph(corr_matrix(np.eye(2)), rho)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    col=st.integers(0, 5),
    scale=st.floats(1e-3, 1e3),
    shift=st.floats(-1e4, 1e4),
)
def test_scale_shift_invariance(seed, col, scale, shift):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(60, 6))
    base = pearson_adjacency(EpochMatrix(values, default_layout(6))).values
    moved = values.copy()
    moved[:, col] = scale * moved[:, col] + shift
    after = pearson_adjacency(EpochMatrix(moved, default_layout(6))).values
    np.testing.assert_allclose(after, base, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), r1=st.floats(0.01, 0.99), r2=st.floats(0.01, 0.99))
def test_threshold_monotone(seed, r1, r2):
    lo, hi = sorted((r1, r2))
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(30, 8))
    values[:, 1] += values[:, 0]
    c = pearson_adjacency(EpochMatrix(values, default_layout(8)))
    a_lo = threshold_graph(c, lo).adjacency
    a_hi = threshold_graph(c, hi).adjacency
    assert np.all(a_hi <= a_lo)


def test_graph_dump_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    layout = default_layout(6)
    graphs = []
    for _ in range(3):
        values = rng.normal(size=(40, 6))
        values[:, 2] = values[:, 0] + 0.1 * rng.normal(size=40)
        graphs.append(epoch_graph(EpochMatrix(values, layout), 0.5))
    path = tmp_path / "graphs.jsonl"
    write_graph_dump(path, graphs)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert '"epoch_index": 0' in lines[0] and '"edges": [[0, 2]]' in lines[0]
    back = read_graph_dump(path, layout)
    for a, b in zip(graphs, back):
        np.testing.assert_array_equal(a.adjacency, b.adjacency)
        assert a.threshold == b.threshold


def test_no_warning_for_regular_epoch():
    rng = np.random.default_rng(1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        pearson_adjacency(EpochMatrix(rng.normal(size=(20, 4)), default_layout(4)))
