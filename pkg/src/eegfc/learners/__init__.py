from .cv import (
    KINDS,
    ClassifierSpec,
    CvReport,
    canonical_kind,
    cross_validate,
    fit_predict,
    fold_digest,
    stratified_kfold,
)
from .forest import DecisionTree, RandomForest
from .knn import KNeighborsClassifier
from .logreg import LogisticRegression
from .svm import LinearSVM

__all__ = [
    "KINDS",
    "ClassifierSpec",
    "CvReport",
    "DecisionTree",
    "KNeighborsClassifier",
    "LinearSVM",
    "LogisticRegression",
    "RandomForest",
    "canonical_kind",
    "cross_validate",
    "fit_predict",
    "fold_digest",
    "stratified_kfold",
]
