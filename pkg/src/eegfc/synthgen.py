"""Synthetic labeled epochs with group-dependent correlation structure.

Each age group owns a template graph over the channels. Epoch samples are
drawn i.i.d. over time from a zero-mean Gaussian whose correlation is
``edge_strength`` on template edges and 0 elsewhere, then white noise of
scale ``noise_sigma`` is added, which lowers the observed correlation to
about ``edge_strength / (1 + noise_sigma**2)``.

Presets
-------
All presets use a block size ``b = C // 3`` (10 for the 31-channel cap).

``high-separation``
    Disjoint cliques: Y on channels ``[0, b)``, T on ``[b, 2b-1)``, M on
    ``[2b, 3b-2)``. ``edge_strength=0.9``, ``noise_sigma=0.05``; observed
    correlation on edges is about 0.898, far above a 0.8 threshold.
``moderate``
    Nested cliques, Y on ``[0, b)``, T on ``[0, b-2)``, M on ``[0, b-4)``,
    so Y has the most edges, then T, then M. ``edge_strength=0.85``,
    ``noise_sigma=0.25``; observed correlation about 0.8, so edges near a
    0.8 threshold appear at random.
``chance``
    Every group uses the moderate Y profile; labels carry no information.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._seeding import child_seed, child_seeds
from .dataset import (
    GROUPS,
    STIMULI,
    ChannelLayout,
    EpochLabel,
    EpochMatrix,
    Group,
    LabeledDataset,
    Stimulus,
    default_layout,
    write_epoch_csv,
    write_manifest,
)

PRESETS = ("high-separation", "moderate", "chance")
SUBJECTS_PER_GROUP = 5
REPAIR_STEP = 0.01
REPAIR_MAX = 100.0
MIN_EIGENVALUE = 1e-6


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class GroupProfile:
    group: Group
    base_graph: np.ndarray
    edge_strength: float
    noise_sigma: float

    def __post_init__(self):
        adj = (np.asarray(self.base_graph) != 0).astype(np.uint8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("base_graph must be square")
        if not np.array_equal(adj, adj.T) or adj.diagonal().any():
            raise ValueError("base_graph must be symmetric with zero diagonal")
        if not 0.0 < self.edge_strength < 1.0:
            raise ValueError("edge_strength must lie strictly between 0 and 1")
        if self.noise_sigma <= 0:
            raise ValueError("noise_sigma must be > 0")
        adj.flags.writeable = False
        object.__setattr__(self, "group", Group(self.group))
        object.__setattr__(self, "base_graph", adj)


@dataclass(frozen=True)
class SynthConfig:
    layout: ChannelLayout
    profiles: tuple
    n_samples: int = 700
    epochs_per_group: int = 500
    stimulus: Stimulus = Stimulus.A
    seed: int = 0
    sampling_rate_hz: float = 500

    def __post_init__(self):
        if self.n_samples < 8:
            raise ValueError("n_samples must be >= 8")
        if self.epochs_per_group < 1:
            raise ValueError("epochs_per_group must be >= 1")
        profiles = tuple(self.profiles)
        if sorted(p.group.index for p in profiles) != list(range(len(GROUPS))):
            raise ValueError("need exactly one profile per group")
        for p in profiles:
            if p.base_graph.shape[0] != self.layout.count:
                raise ValueError(f"profile {p.group.value} does not match the layout size")
        object.__setattr__(self, "profiles", tuple(sorted(profiles, key=lambda p: p.group.index)))
        object.__setattr__(self, "stimulus", Stimulus(self.stimulus))


def clique_template(n_channels, members):
    adj = np.zeros((n_channels, n_channels), dtype=np.uint8)
    members = list(members)
    adj[np.ix_(members, members)] = 1
    np.fill_diagonal(adj, 0)
    return adj


def correlation_target(profile):
    """Population correlation of the latent (noise-free) signal.

    ``I + s A`` is shifted by the smallest multiple of 0.01 on the diagonal
    that makes its minimum eigenvalue at least 1e-6, then rescaled to a
    unit diagonal.
    """
    c = profile.base_graph.shape[0]
    sigma = np.eye(c) + profile.edge_strength * profile.base_graph
    lam_min = np.linalg.eigvalsh(sigma).min()
    steps = max(0, math.ceil((MIN_EIGENVALUE - lam_min) / REPAIR_STEP) - 1)
    while np.linalg.eigvalsh(sigma + steps * REPAIR_STEP * np.eye(c)).min() < MIN_EIGENVALUE:
        steps += 1
        if steps * REPAIR_STEP > REPAIR_MAX:
            raise GenerationError("covariance could not be repaired to positive definite")
    sigma = sigma + steps * REPAIR_STEP * np.eye(c)
    d = 1.0 / np.sqrt(np.diag(sigma))
    return sigma * np.outer(d, d)


def _sqrt_factor(corr):
    w, v = np.linalg.eigh(corr)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.T


def generate(config):
    """Draw ``epochs_per_group`` epochs for each group, Y then T then M.

    Epoch ``j`` (in output order) uses the ``j``-th splitmix64 child seed of
    ``config.seed``.
    """
    n_total = config.epochs_per_group * len(config.profiles)
    seeds = child_seeds(config.seed, n_total)
    c = config.layout.count
    records = []
    j = 0
    for profile in config.profiles:
        factor = _sqrt_factor(correlation_target(profile))
        for e in range(config.epochs_per_group):
            rng = np.random.default_rng(seeds[j])
            j += 1
            latent = rng.standard_normal((config.n_samples, c)) @ factor
            values = latent + profile.noise_sigma * rng.standard_normal((config.n_samples, c))
            label = EpochLabel(
                profile.group,
                config.stimulus,
                f"{profile.group.value}{e % SUBJECTS_PER_GROUP + 1:02d}",
            )
            records.append((EpochMatrix(values, config.layout), label))
    return LabeledDataset(config.layout, tuple(records), config.sampling_rate_hz)


def preset_profiles(name, layout):
    c = layout.count
    b = c // 3
    if b < 6:
        raise ValueError(f"presets need at least 18 channels, got {c}")
    if name == "high-separation":
        blocks = [range(0, b), range(b, 2 * b - 1), range(2 * b, 3 * b - 2)]
        return tuple(
            GroupProfile(g, clique_template(c, blk), 0.9, 0.05) for g, blk in zip(GROUPS, blocks)
        )
    if name == "moderate":
        blocks = [range(0, b), range(0, b - 2), range(0, b - 4)]
        return tuple(
            GroupProfile(g, clique_template(c, blk), 0.85, 0.25) for g, blk in zip(GROUPS, blocks)
        )
    if name == "chance":
        return tuple(GroupProfile(g, clique_template(c, range(0, b)), 0.85, 0.25) for g in GROUPS)
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def preset_config(name, epochs_per_group=500, n_samples=700, layout=None, stimulus=Stimulus.A, seed=0):
    layout = layout or default_layout(31)
    return SynthConfig(
        layout=layout,
        profiles=preset_profiles(name, layout),
        n_samples=n_samples,
        epochs_per_group=epochs_per_group,
        stimulus=stimulus,
        seed=seed,
    )


def generate_preset(name, epochs_per_group=500, n_samples=700, layout=None, stimuli=(Stimulus.A,), seed=0):
    """Generate a preset for one or more stimuli and concatenate them.

    Stimulus ``s`` draws from the child seed of ``seed`` at the index of
    ``s`` in the canonical stimulus order, so adding a stimulus never
    changes the epochs of another.
    """
    records = []
    ds = None
    for s in stimuli:
        s = Stimulus(s)
        cfg = preset_config(name, epochs_per_group, n_samples, layout, s, child_seed(seed, STIMULI.index(s)))
        ds = generate(cfg)
        records.extend(ds.records)
    return LabeledDataset(ds.layout, tuple(records), ds.sampling_rate_hz)


def save(ds, directory):
    """Write epoch CSVs under ``directory/epochs`` plus ``manifest.json``.

    Returns the manifest path.
    """
    directory = Path(directory)
    (directory / "epochs").mkdir(parents=True, exist_ok=True)
    entries = []
    for k, (epoch, label) in enumerate(ds.records):
        rel = f"epochs/ep{k + 1:05d}_{label.stimulus.value}_{label.group.value}.csv"
        write_epoch_csv(directory / rel, epoch)
        entries.append(
            {"path": rel, "subject": label.subject, "group": label.group.value, "stimulus": label.stimulus.value}
        )
    manifest = directory / "manifest.json"
    write_manifest(manifest, ds.layout, entries, ds.sampling_rate_hz)
    return manifest
