"""Classifier specs, stratified k-fold splitting and cross-validation."""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .._parallel import pmap
from .._seeding import child_seed
from ..dataset import GROUPS, Group
from .forest import RandomForest
from .knn import KNeighborsClassifier
from .logreg import LogisticRegression
from .svm import LinearSVM

KINDS = ("knn", "logreg", "linear_svm", "random_forest")
ALIASES = {
    "rf": "random_forest",
    "forest": "random_forest",
    "lr": "logreg",
    "logistic": "logreg",
    "svm": "linear_svm",
    "linearsvm": "linear_svm",
    "kneighbors": "knn",
}
DEFAULTS = {
    "knn": {"k": 5},
    "logreg": {"C": 1.0, "max_iter": 500, "tol": 1e-6},
    "linear_svm": {"C": 1.0, "epochs": 200},
    "random_forest": {"n_trees": 100, "max_features": "sqrt", "max_depth": None, "bootstrap": True},
}


def canonical_kind(kind):
    kind = str(kind).lower()
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown classifier {kind!r}; choose from {', '.join(KINDS)}")
    return kind


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        unknown = set(self.hyperparameters) - set(DEFAULTS[kind])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {kind}: {sorted(unknown)}")
        hp = {**DEFAULTS[kind], **self.hyperparameters}
        if kind == "knn" and hp["k"] < 1:
            raise ValueError("k must be >= 1")
        if kind in ("logreg", "linear_svm") and hp["C"] <= 0:
            raise ValueError("regularization C must be > 0")
        if kind == "random_forest" and hp["n_trees"] < 1:
            raise ValueError("n_trees must be >= 1")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "hyperparameters", hp)
        object.__setattr__(self, "seed", int(self.seed))

    def build(self, seed=None):
        seed = self.seed if seed is None else seed
        hp = self.hyperparameters
        if self.kind == "knn":
            return KNeighborsClassifier(**hp)
        if self.kind == "logreg":
            return LogisticRegression(**hp)
        if self.kind == "linear_svm":
            return LinearSVM(**hp, seed=seed)
        return RandomForest(**hp, seed=seed)


def _group_indices(groups):
    return np.array([Group(g).index for g in groups], dtype=np.int64)


def fit_predict(spec, X_train, y_train, X_test, seed=None):
    """Train ``spec`` on one split and return the predicted groups.

    ``y_train`` holds :class:`Group` values (or their string codes).
    """
    X_train = np.asarray(X_train, dtype=np.float64)
    X_test = np.asarray(X_test, dtype=np.float64)
    if X_train.ndim != 2 or X_test.ndim != 2:
        raise ValueError("feature rows must be 2-D")
    if len(X_train) == 0 or len(X_test) == 0:
        raise ValueError("train and test sets must be non-empty")
    if X_train.shape[1] != X_test.shape[1]:
        raise ValueError(
            f"dimension mismatch: train has {X_train.shape[1]} columns, test has {X_test.shape[1]}"
        )
    y = _group_indices(y_train)
    if len(y) != len(X_train):
        raise ValueError("labels do not align with training rows")
    if len(np.unique(y)) < 2:
        raise ValueError("degenerate training set: only one class present")
    model = spec.build(seed).fit(X_train, y)
    return [GROUPS[i] for i in model.predict(X_test)]


def stratified_kfold(labels, k, seed):
    """Split sample indices into ``k`` stratified folds.

    Each class is shuffled with a seed-derived generator and dealt
    round-robin; the starting fold rotates from class to class so fold
    sizes stay within one of each other as well.

    Returns
    -------
    list of ndarray
        ``k`` sorted, disjoint index arrays covering ``0..len(labels)-1``.
    """
    k = int(k)
    if k < 2:
        raise ValueError("k must be >= 2")
    labels = [getattr(g, "value", g) for g in labels]
    rng = np.random.default_rng(child_seed(seed, 0))
    folds = [[] for _ in range(k)]
    offset = 0
    for cls in sorted(set(labels), key=str):
        members = np.array([i for i, g in enumerate(labels) if g == cls])
        if len(members) < k:
            raise ValueError(f"class {cls!r} has {len(members)} members, fewer than k={k}")
        members = members[rng.permutation(len(members))]
        for pos, i in enumerate(members):
            folds[(offset + pos) % k].append(int(i))
        offset = (offset + len(members)) % k
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def fold_digest(folds):
    h = hashlib.sha256()
    for f in folds:
        h.update(np.asarray(f, dtype=np.int64).tobytes())
        h.update(b"|")
    return h.hexdigest()


@dataclass
class CvReport:
    classifier: str
    fold_accuracies: list
    mean_accuracy: float
    confusion: list
    seed: int
    hyperparameters: dict = field(default_factory=dict)
    rho_th: float = None
    stimulus: str = None
    fold_digest: str = None
    sampling_rate_hz: float = None

    def to_dict(self):
        out = {
            "classifier": self.classifier,
            "rho_th": self.rho_th,
            "stimulus": self.stimulus,
            "fold_accuracies": self.fold_accuracies,
            "mean_accuracy": self.mean_accuracy,
            "confusion": self.confusion,
            "seed": self.seed,
            "hyperparameters": self.hyperparameters,
            "folds": len(self.fold_accuracies),
        }
        if self.sampling_rate_hz is not None:
            out["sampling_rate_hz"] = self.sampling_rate_hz
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _run_fold(args):
    spec, X, y, train_idx, test_idx, seed = args
    pred = fit_predict(spec, X[train_idx], [GROUPS[i] for i in y[train_idx]], X[test_idx], seed=seed)
    return np.array([g.index for g in pred], dtype=np.int64)


def cross_validate(spec, fm, k=10, seed=0, folds=None, workers=1, rho_th=None, stimulus=None):
    """Stratified k-fold cross-validation of ``spec`` on a feature matrix.

    Fold ``i`` trains with the ``i``-th child seed of ``spec.seed``, so
    serial and parallel runs give identical reports. Pass ``folds`` to reuse
    an existing split.
    """
    groups = fm.groups
    if folds is None:
        folds = stratified_kfold(groups, k, seed)
    y = _group_indices(groups)
    X = fm.values
    n = len(y)
    tasks = []
    for i, test_idx in enumerate(folds):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        tasks.append((spec, X, y, np.flatnonzero(train_mask), test_idx, child_seed(spec.seed, i)))
    preds = pmap(_run_fold, tasks, workers)

    confusion = np.zeros((len(GROUPS), len(GROUPS)), dtype=np.int64)
    accs = []
    for test_idx, pred in zip(folds, preds):
        truth = y[test_idx]
        np.add.at(confusion, (truth, pred), 1)
        accs.append(float(np.mean(truth == pred)))
    return CvReport(
        classifier=spec.kind,
        fold_accuracies=accs,
        mean_accuracy=float(np.mean(accs)),
        confusion=confusion.tolist(),
        seed=spec.seed,
        hyperparameters=dict(spec.hyperparameters),
        rho_th=rho_th,
        stimulus=getattr(stimulus, "value", stimulus),
        fold_digest=fold_digest(folds),
    )
