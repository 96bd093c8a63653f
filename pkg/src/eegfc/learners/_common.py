import numpy as np


def standardize_fit(X):
    """Per-column mean and std; constant columns get std 1."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    return mean, std


def encode(y):
    """Sorted class values and the index of each sample into them."""
    classes, y_idx = np.unique(np.asarray(y), return_inverse=True)
    if len(classes) < 2:
        raise ValueError("training set must contain at least 2 classes")
    return classes, y_idx
