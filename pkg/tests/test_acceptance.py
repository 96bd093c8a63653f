"""Acceptance gate: one test per exit criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import time
from collections import Counter

import numpy as np
import pytest

import oracles
from eegfc.cli import main
from eegfc.connectivity import CorrelationMatrix, pearson_adjacency, threshold_graph
from eegfc.dataset import EpochMatrix, Group, default_layout
from eegfc.experiments import DEFAULT_THRESHOLDS, run_sweep
from eegfc.features import build_feature_matrix, column_names, epoch_features
from eegfc.graph_metrics import (
    METRICS,
    EigenvectorError,
    betweenness_centrality,
    closeness_centrality,
    clustering_coefficient,
    degree_centrality,
    eigenvector_centrality,
)
from eegfc.learners import ClassifierSpec, cross_validate, stratified_kfold
from eegfc.synthgen import generate_preset

pytestmark = pytest.mark.filterwarnings("ignore::eegfc.features.FeatureWarning")


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return _report


def test_ac1_metric_oracle_equivalence(report):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = dict.fromkeys(METRICS, 0.0)
    for _ in range(200):
        n = int(rng.integers(3, 9))
        adj = oracles.random_graph(rng, n, rng.uniform(0.05, 0.95))
        worst["degree"] = max(worst["degree"], np.abs(degree_centrality(adj).values - oracles.degree(adj)).max())
        worst["betweenness"] = max(
            worst["betweenness"], np.abs(betweenness_centrality(adj).values - oracles.betweenness(adj)).max()
        )
        worst["closeness"] = max(worst["closeness"], np.abs(closeness_centrality(adj).values - oracles.closeness(adj)).max())
        worst["clustering"] = max(
            worst["clustering"], np.abs(clustering_coefficient(adj).values - oracles.clustering(adj)).max()
        )
        if not adj.any():
            with pytest.raises(EigenvectorError):
                eigenvector_centrality(adj)
            continue
        e = eigenvector_centrality(adj).values
        lam, gap, ref = oracles.leading_eigen(adj)
        if gap > 1e-8:
            err = min(np.abs(e - ref).max(), np.abs(e + ref).max())
        else:
            # repeated leading eigenvalue: any vector of the eigenspace is valid
            w, v = np.linalg.eigh(adj.astype(float))
            basis = v[:, np.abs(w - lam) <= 1e-8]
            err = np.linalg.norm(e - basis @ (basis.T @ e))
        worst["eigenvector"] = max(worst["eigenvector"], err)
    elapsed = time.perf_counter() - start
    ok = all(worst[m] <= 1e-9 for m in METRICS if m != "eigenvector") and worst["eigenvector"] <= 1e-6
    ok = ok and elapsed < 30
    detail = ", ".join(f"{m} {worst[m]:.1e}" for m in METRICS) + f"; {elapsed:.1f}s"
    report("AC1 metric-oracle equivalence (200 graphs, n in [3,8])", ok, detail)


def test_ac2_connectivity_properties(report):
    rng = np.random.default_rng(7)
    layout = default_layout(16)
    start = time.perf_counter()
    sym = rng_err = shift_err = 0.0
    monotone = True
    for _ in range(100):
        values = rng.normal(size=(100, 16))
        values[:, 1] = values[:, 0] + rng.uniform(0.1, 2) * rng.normal(size=100)
        c = pearson_adjacency(EpochMatrix(values, layout)).values
        sym = max(sym, np.abs(c - c.T).max())
        rng_err = max(rng_err, max(c.max() - 1, -1 - c.min(), 0))
        moved = values.copy()
        cols = rng.choice(16, size=3, replace=False)
        moved[:, cols] = moved[:, cols] * rng.uniform(0.01, 100, size=3) + rng.uniform(-1e3, 1e3, size=3)
        c2 = pearson_adjacency(EpochMatrix(moved, layout)).values
        shift_err = max(shift_err, np.abs(c2 - c).max())
        corr = CorrelationMatrix(c, layout)
        r1, r2 = np.sort(rng.uniform(0.01, 0.99, size=2))
        monotone &= bool(np.all(threshold_graph(corr, r2).adjacency <= threshold_graph(corr, r1).adjacency))
    boundary = np.eye(3)
    boundary[0, 1] = boundary[1, 0] = 0.8
    edge_at_boundary = threshold_graph(CorrelationMatrix(boundary, default_layout(3)), 0.8).adjacency[0, 1] == 1
    elapsed = time.perf_counter() - start
    ok = sym <= 1e-12 and rng_err <= 1e-12 and shift_err <= 1e-9 and monotone and edge_at_boundary and elapsed < 10
    detail = (f"symmetry {sym:.1e}, range excess {rng_err:.1e}, scale/shift {shift_err:.1e}, "
              f"monotone {monotone}, boundary edge {edge_at_boundary}; {elapsed:.1f}s")
    report("AC2 connectivity properties (100 epochs, T=100, C=16)", ok, detail)


def test_ac3_feature_geometry(report):
    layout = default_layout(31)
    v = epoch_features(EpochMatrix(np.random.default_rng(0).normal(size=(700, 31)), layout), 0.8)
    names = column_names(layout)
    order_ok = all(
        names[mi * 31 + ci] == f"{m}:{ch}" for mi, m in enumerate(METRICS) for ci, ch in enumerate(layout.names)
    )
    ok = v.shape == (155,) and len(names) == 155 and order_ok
    report("AC3 feature geometry (C=31 -> 155 metric-major columns)", ok, f"length {v.shape[0]}, order {order_ok}")


def test_ac4_cv_harness(report):
    rng = np.random.default_rng(99)
    failures = []
    for trial in range(50):
        k = int(rng.integers(2, 11))
        sizes = rng.integers(k, 80, size=3)
        labels = [g for g, s in zip(Group, sizes) for _ in range(s)]
        labels = [labels[i] for i in rng.permutation(len(labels))]
        seed = int(rng.integers(2**63))
        folds = stratified_kfold(labels, k, seed)
        idx = np.concatenate(folds)
        if sorted(idx.tolist()) != list(range(len(labels))):
            failures.append((trial, "cover/disjoint"))
        for g in Group:
            per = [Counter(labels[i] for i in f)[g] for f in folds]
            if max(per) - min(per) > 1:
                failures.append((trial, f"balance {g.value}"))
        again = stratified_kfold(labels, k, seed)
        if not all(np.array_equal(a, b) for a, b in zip(folds, again)):
            failures.append((trial, "determinism"))
    report("AC4 CV harness (50 random label vectors)", not failures, f"failures {failures or 'none'}")


@pytest.mark.slow
def test_ac5_end_to_end_separability(report):
    start = time.perf_counter()
    ds = generate_preset("high-separation", epochs_per_group=300, n_samples=700, seed=2024)
    fm = build_feature_matrix(ds, 0.8)
    rep = cross_validate(ClassifierSpec("random_forest", seed=42), fm, k=10, seed=42)
    chance = []
    for seed in range(5):
        cds = generate_preset("chance", epochs_per_group=300, n_samples=700, seed=seed)
        cfm = build_feature_matrix(cds, 0.8)
        chance.append(cross_validate(ClassifierSpec("random_forest", seed=seed), cfm, k=10, seed=seed).mean_accuracy)
    elapsed = time.perf_counter() - start
    ok = (
        rep.mean_accuracy >= 0.90
        and all(abs(a - 1 / 3) <= 0.08 for a in chance)
        and elapsed < 600
    )
    detail = (f"high-separation RF {rep.mean_accuracy:.4f} (>= 0.90); chance RF per seed "
              f"{[round(a, 4) for a in chance]} (within 1/3 +/- 0.08); {elapsed:.0f}s")
    report("AC5 end-to-end separability (3x300 epochs, T=700, C=31)", ok, detail)


@pytest.mark.slow
def test_ac6_sweep_shape(report):
    ds = generate_preset("high-separation", epochs_per_group=300, n_samples=700, seed=2024)
    res = run_sweep(ds, DEFAULT_THRESHOLDS, ClassifierSpec("random_forest", seed=42), k=10, seed=42)
    accs = [r.mean_accuracy for r in res.rows]
    interior = max(accs[1:-1])
    ok = interior >= accs[0] - 0.02 and interior >= accs[-1] - 0.02
    curve = ", ".join(f"{t:.2f}:{a:.3f}" for t, a in zip(DEFAULT_THRESHOLDS, accs))
    report("AC6 sweep shape (interior max >= endpoints - 0.02)", ok, curve)


@pytest.mark.slow
def test_ac7_cli_reproducibility(report, tmp_path):
    data = tmp_path / "data"
    assert main(["synth", "--preset", "moderate", "--epochs-per-group", "30", "--seed", "7", "--out", str(data)]) == 0
    manifest = str(data / "manifest.json")
    outputs = {}
    for run in ("r1", "r2"):
        out = tmp_path / run
        assert main(["classify", "--manifest", manifest, "--stimulus", "A", "--classifier", "rf", "--rho-th", "0.8",
                     "--folds", "10", "--seed", "42", "--out", str(out)]) == 0
        assert main(["sweep", "--manifest", manifest, "--thresholds", "0.5:0.95:0.05", "--classifier", "rf",
                     "--folds", "5", "--seed", "42", "--out", str(out)]) == 0
        outputs[run] = {name: (out / name).read_bytes() for name in ("report.json", "sweep.csv", "sweep.svg")}
    same = {name: outputs["r1"][name] == outputs["r2"][name] for name in outputs["r1"]}
    report("AC7 CLI reproducibility (byte-identical reports)", all(same.values()), str(same))
