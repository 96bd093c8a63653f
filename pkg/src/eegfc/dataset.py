"""On-disk dataset format and in-memory labeled epochs.

A dataset is a JSON manifest indexing one CSV file per epoch::

    {"channels": ["Fp1", ...], "sampling_rate_hz": 500,
     "epochs": [{"path": "rel/ep0001.csv", "subject": "S01",
                 "group": "Y", "stimulus": "A"}, ...]}

Each epoch CSV starts with the channel names joined by commas, followed by
one row of decimal floats per time sample.
"""

import io
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np


class Group(str, Enum):
    """Age group. Declaration order defines the class index (Y=0, T=1, M=2)."""

    Y = "Y"
    T = "T"
    M = "M"

    @property
    def index(self):
        return _GROUP_INDEX[self]


class Stimulus(str, Enum):
    A = "A"
    V = "V"
    AV = "AV"
    A50V = "A50V"
    V50A = "V50A"


GROUPS = tuple(Group)
STIMULI = tuple(Stimulus)
_GROUP_INDEX = {g: i for i, g in enumerate(GROUPS)}


class DatasetError(ValueError):
    """Malformed or inconsistent dataset on disk or in memory."""


@dataclass(frozen=True)
class ChannelLayout:
    names: tuple

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if len(names) < 2:
            raise DatasetError(f"need at least 2 channels, got {len(names)}")
        if len(set(names)) != len(names):
            dupes = sorted(n for n, c in Counter(names).items() if c > 1)
            raise DatasetError(f"duplicate channel names: {dupes}")

    @property
    def count(self):
        return len(self.names)


def default_layout(n_channels=31):
    """The 31-electrode 10-20 cap used as the reference layout.

    For other sizes generic names ``ch01..chNN`` are returned.
    """
    if n_channels == 31:
        return ChannelLayout(CAP_31)
    return ChannelLayout(tuple(f"ch{i + 1:02d}" for i in range(n_channels)))


CAP_31 = (
    "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "FC5", "FC1", "FC2", "FC6",
    "T7", "C3", "Cz", "C4", "T8", "TP9", "CP5", "CP1", "CP2", "CP6", "TP10",
    "P7", "P3", "Pz", "P4", "P8", "PO9", "O1", "Oz", "O2",
)


@dataclass(frozen=True)
class EpochMatrix:
    """One epoch: ``values`` has shape (T, C), rows are time samples."""

    values: np.ndarray
    layout: ChannelLayout

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DatasetError(f"epoch must be 2-D, got shape {values.shape}")
        if values.shape[0] < 2:
            raise DatasetError(f"epoch needs at least 2 time samples, got {values.shape[0]}")
        if values.shape[1] != self.layout.count:
            raise DatasetError(
                f"channel-count mismatch: epoch has {values.shape[1]} columns, "
                f"layout has {self.layout.count}"
            )
        if not np.all(np.isfinite(values)):
            row = int(np.argwhere(~np.isfinite(values))[0, 0])
            raise DatasetError(f"non-finite value in epoch at time row {row}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class EpochLabel:
    group: Group
    stimulus: Stimulus
    subject: str

    def __post_init__(self):
        object.__setattr__(self, "group", Group(self.group))
        object.__setattr__(self, "stimulus", Stimulus(self.stimulus))
        object.__setattr__(self, "subject", str(self.subject))


@dataclass(frozen=True)
class LabeledDataset:
    layout: ChannelLayout
    records: tuple
    sampling_rate_hz: float = None
    # populated by load_manifest; used only for error messages
    paths: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        records = tuple((ep, lab) for ep, lab in self.records)
        if not records:
            raise DatasetError("dataset has no records")
        for k, (ep, _) in enumerate(records):
            if ep.layout != self.layout:
                raise DatasetError(f"record {k} has a different channel layout")
        object.__setattr__(self, "records", records)

    def __len__(self):
        return len(self.records)

    @property
    def epochs(self):
        return [ep for ep, _ in self.records]

    @property
    def labels(self):
        return [lab for _, lab in self.records]

    def group_counts(self):
        counts = Counter(lab.group for lab in self.labels)
        return {g.value: counts.get(g, 0) for g in GROUPS}

    def stimuli(self):
        """Stimulus types present, in canonical order."""
        present = {lab.stimulus for lab in self.labels}
        return [s for s in STIMULI if s in present]


class EmptyDataset:
    """Result of filtering that matched nothing; keeps the layout."""

    def __init__(self, layout, sampling_rate_hz=None):
        self.layout = layout
        self.sampling_rate_hz = sampling_rate_hz
        self.records = ()

    def __len__(self):
        return 0

    @property
    def epochs(self):
        return []

    @property
    def labels(self):
        return []

    def group_counts(self):
        return {g.value: 0 for g in GROUPS}

    def stimuli(self):
        return []


def filter_by_stimulus(ds, stimulus):
    """Keep only records whose stimulus matches, preserving order.

    Returns an :class:`EmptyDataset` when nothing matches.
    """
    stimulus = Stimulus(stimulus)
    kept = [(ep, lab) for ep, lab in ds.records if lab.stimulus == stimulus]
    if not kept:
        return EmptyDataset(ds.layout, ds.sampling_rate_hz)
    return LabeledDataset(ds.layout, tuple(kept), ds.sampling_rate_hz)


def read_epoch_csv(path, layout):
    """Read one epoch CSV and validate it against ``layout``."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\r\n")
            body = fh.read()
    except OSError as exc:
        raise DatasetError(f"{path}: cannot read epoch file ({exc.strerror})") from exc

    if header != ",".join(layout.names):
        n_cols = len(header.split(",")) if header else 0
        if n_cols != layout.count:
            raise DatasetError(
                f"{path}: channel-count mismatch: header has {n_cols} "
                f"columns, manifest lists {layout.count} channels"
            )
        raise DatasetError(f"{path}: header does not match manifest channel order")

    try:
        values = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError:
        _locate_bad_row(path, body, layout)
        raise
    if values.size == 0:
        values = values.reshape(0, layout.count)
    if values.shape[1] != layout.count:
        raise DatasetError(
            f"{path}, line 2: channel-count mismatch: {values.shape[1]} values, "
            f"expected {layout.count}"
        )
    bad = np.argwhere(~np.isfinite(values))
    if len(bad):
        raise DatasetError(f"{path}, line {int(bad[0, 0]) + 2}: non-finite value")
    if values.shape[0] < 2:
        raise DatasetError(f"{path}: need at least 2 time samples, got {values.shape[0]}")
    return EpochMatrix(values, layout)


def _locate_bad_row(path, body, layout):
    # slow path, only to produce a precise error message
    for lineno, line in enumerate(body.splitlines(), start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != layout.count:
            raise DatasetError(
                f"{path}, line {lineno}: channel-count mismatch: "
                f"{len(parts)} values, expected {layout.count}"
            )
        for p in parts:
            try:
                float(p)
            except ValueError:
                raise DatasetError(f"{path}, line {lineno}: not a number: {p!r}") from None


def write_epoch_csv(path, epoch):
    # %.17g round-trips every float64 exactly
    np.savetxt(
        path,
        epoch.values,
        fmt="%.17g",
        delimiter=",",
        header=",".join(epoch.layout.names),
        comments="",
    )


def _parse_label(entry, row, manifest_path):
    try:
        return EpochLabel(
            group=Group(entry["group"]),
            stimulus=Stimulus(entry["stimulus"]),
            subject=entry.get("subject", ""),
        )
    except KeyError as exc:
        raise DatasetError(f"{manifest_path}, epoch row {row}: missing key {exc}") from None
    except ValueError as exc:
        raise DatasetError(f"{manifest_path}, epoch row {row}: {exc}") from None


def load_manifest(path, workers=1):
    """Load a manifest and all epoch files it references.

    Parameters
    ----------
    path : str or Path
        Manifest JSON file. Epoch paths are resolved relative to its directory.
    workers : int
        Number of threads used to read epoch files.

    Returns
    -------
    LabeledDataset
        Records in manifest order.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise DatasetError(f"{path}: cannot read manifest ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: malformed JSON ({exc})") from None

    if not isinstance(manifest, dict) or "channels" not in manifest or "epochs" not in manifest:
        raise DatasetError(f"{path}: manifest must be an object with 'channels' and 'epochs'")
    layout = ChannelLayout(tuple(manifest["channels"]))
    entries = manifest["epochs"]
    if not entries:
        raise DatasetError(f"{path}: manifest lists no epochs")

    labels = []
    files = []
    for row, entry in enumerate(entries):
        if "path" not in entry:
            raise DatasetError(f"{path}, epoch row {row}: missing key 'path'")
        labels.append(_parse_label(entry, row, path))
        files.append(path.parent / entry["path"])
    for row, f in enumerate(files):
        if not f.is_file():
            raise DatasetError(f"{path}, epoch row {row}: epoch file not found: {f}")

    def read(f):
        return read_epoch_csv(f, layout)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            epochs = list(pool.map(read, files))
    else:
        epochs = [read(f) for f in files]

    return LabeledDataset(
        layout,
        tuple(zip(epochs, labels)),
        manifest.get("sampling_rate_hz"),
        paths=tuple(str(f) for f in files),
    )


def write_manifest(path, layout, entries, sampling_rate_hz=None):
    manifest = {"channels": list(layout.names)}
    if sampling_rate_hz is not None:
        manifest["sampling_rate_hz"] = sampling_rate_hz
    manifest["epochs"] = entries
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
