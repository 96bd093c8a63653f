import numpy as np
import pytest

from eegfc.synthgen import generate_preset


@pytest.fixture(scope="session")
def small_multi_stimulus():
    """Five stimuli x 3 groups x 4 epochs of the high-separation preset, T=120."""
    return generate_preset(
        "high-separation", epochs_per_group=4, n_samples=120,
        stimuli=("A", "V", "AV", "A50V", "V50A"), seed=3,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
