"""Synthetic dataset generators and the two optional real-data loaders.

Every producer returns an immutable :class:`Dataset`. Generators are pure
functions of their parameters and the supplied random stream.
"""

from __future__ import annotations

import csv
import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import formulas
from .errors import (
    DataFormatError,
    InvalidParameterError,
    LengthMismatchError,
    MagicNumberError,
    MissingColumnError,
)

DISTRIBUTION_TAGS = (
    "uniform_independent",
    "nonuniform_independent",
    "uniform_dependent",
    "image_grid",
    "external",
)

COMPAS_SIZE = 4629
COMPAS_FEATURE_NAMES = ("race", "unrelated_1", "unrelated_2", "priors_count", "age")
COMPAS_LABEL_AGREEMENT = 0.85


@dataclass(frozen=True)
class Dataset:
    """A numeric feature matrix with targets, names, and provenance tags."""

    features: np.ndarray
    targets: np.ndarray
    feature_names: tuple[str, ...]
    distribution_tag: str
    provenance: str
    constant_columns: tuple[int, ...] = field(default=())

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=float))
        targs = np.ascontiguousarray(np.asarray(self.targets, dtype=float))
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise InvalidParameterError("features must be a non-empty 2-d matrix")
        if targs.shape != (feats.shape[0],):
            raise InvalidParameterError("targets length must equal the row count")
        if len(self.feature_names) != feats.shape[1]:
            raise InvalidParameterError("feature_names length must equal the column count")
        if self.distribution_tag not in DISTRIBUTION_TAGS:
            raise InvalidParameterError(f"unknown distribution tag {self.distribution_tag!r}")
        feats.setflags(write=False)
        targs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "targets", targs)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def with_targets(self, targets: np.ndarray, provenance_suffix: str) -> "Dataset":
        return Dataset(
            features=self.features,
            targets=targets,
            feature_names=self.feature_names,
            distribution_tag=self.distribution_tag,
            provenance=f"{self.provenance};{provenance_suffix}",
            constant_columns=self.constant_columns,
        )


def _default_names(d: int) -> tuple[str, ...]:
    return tuple(f"x{j}" for j in range(d))


def _require_counts(d: int, n: int) -> None:
    if d < 1 or n < 1:
        raise InvalidParameterError(f"need d >= 1 and n >= 1, got d={d}, n={n}")


def gen_boolean_uniform(d: int, n: int, rng: np.random.Generator) -> Dataset:
    """Each cell independently 0 or 1 with probability 1/2."""
    _require_counts(d, n)
    feats = rng.integers(0, 2, size=(n, d)).astype(float)
    return Dataset(
        features=feats,
        targets=np.zeros(n),
        feature_names=_default_names(d),
        distribution_tag="uniform_independent",
        provenance=f"gen_boolean_uniform(d={d},n={n})",
    )


def gen_boolean_biased(p, n: int, rng: np.random.Generator) -> Dataset:
    """Column j sampled Bernoulli(p_j), columns independent."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise InvalidParameterError("p must be a non-empty probability vector")
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise InvalidParameterError("each probability must lie strictly inside (0, 1)")
    _require_counts(p.size, n)
    feats = (rng.random(size=(n, p.size)) < p).astype(float)
    return Dataset(
        features=feats,
        targets=np.zeros(n),
        feature_names=_default_names(p.size),
        distribution_tag="nonuniform_independent",
        provenance=f"gen_boolean_biased(p={p.tolist()},n={n})",
    )


def gen_boolean_dependent(flip_prob: float, n: int, rng: np.random.Generator) -> Dataset:
    """x0 uniform; x1 copies x0 except with probability flip_prob. Both marginals uniform."""
    if not (0.0 < flip_prob < 0.5):
        raise InvalidParameterError("flip_prob must lie strictly inside (0, 0.5)")
    _require_counts(2, n)
    x0 = rng.integers(0, 2, size=n).astype(float)
    flips = rng.random(n) < flip_prob
    x1 = np.where(flips, 1.0 - x0, x0)
    return Dataset(
        features=np.column_stack([x0, x1]),
        targets=np.zeros(n),
        feature_names=_default_names(2),
        distribution_tag="uniform_dependent",
        provenance=f"gen_boolean_dependent(flip_prob={flip_prob},n={n})",
    )


def border_column_indices(side: int, border: int) -> tuple[int, ...]:
    """Flat indices of the constant border pixels of a side x side grid."""
    idx = []
    for r in range(side):
        for c in range(side):
            if r < border or r >= side - border or c < border or c >= side - border:
                idx.append(r * side + c)
    return tuple(idx)


def gen_border_image(side: int, border: int, n: int, rng: np.random.Generator) -> Dataset:
    """Image-grid rows: border pixels constant zero, interior i.i.d. uniform.

    The regression target is the mean of the four central pixels.
    """
    if side < 4 or border < 1 or border >= side / 2:
        raise InvalidParameterError(
            f"invalid geometry: need side >= 4 and 1 <= border < side/2, got side={side}, border={border}"
        )
    _require_counts(side * side, n)
    d = side * side
    feats = rng.random(size=(n, d))
    constant = border_column_indices(side, border)
    feats[:, list(constant)] = 0.0
    targets = formulas.evaluate("center_mean", feats)
    return Dataset(
        features=feats,
        targets=targets,
        feature_names=tuple(f"px{r}_{c}" for r in range(side) for c in range(side)),
        distribution_tag="image_grid",
        provenance=(
            f"gen_border_image(side={side},border={border},n={n});"
            f"constant_columns={','.join(map(str, constant))}"
        ),
        constant_columns=constant,
    )


def label_with(ds: Dataset, formula_id: str) -> Dataset:
    """Replace targets with a registered closed-form labeling of the features."""
    if not formulas.accepts_arity(formula_id, ds.d):
        # accepts_arity raises UnknownFormulaError for unregistered ids
        from .errors import ArityMismatchError

        raise ArityMismatchError(f"{formula_id} does not accept d={ds.d}")
    return ds.with_targets(formulas.evaluate(formula_id, ds.features), f"label={formula_id}")


# -- deterministic expected-count designs ------------------------------------
#
# The functional tests need training/background data whose empirical cell
# frequencies equal the stated distribution exactly, so that scores do not
# depend on the sampling noise of any particular stream. Each boolean cell is
# replicated round(n * P(cell)) times (largest-remainder rounding) and the row
# order is shuffled with the supplied stream.


def _design_from_cell_probs(
    cells: np.ndarray, probs: np.ndarray, n: int, rng: np.random.Generator
) -> np.ndarray:
    counts = np.floor(probs * n).astype(int)
    remainder = probs * n - counts
    short = n - counts.sum()
    if short > 0:
        order = sorted(range(len(probs)), key=lambda i: (-remainder[i], i))
        for i in order[:short]:
            counts[i] += 1
    rows = np.repeat(cells, counts, axis=0)
    return rows[rng.permutation(len(rows))]


def _all_cells(d: int) -> np.ndarray:
    bits = np.arange(2**d)[:, None] >> np.arange(d)[None, ::-1]
    return (bits & 1).astype(float)


def balanced_uniform_design(d: int, n: int, rng: np.random.Generator) -> Dataset:
    """Uniform boolean design with exact cell proportions."""
    _require_counts(d, n)
    cells = _all_cells(d)
    probs = np.full(len(cells), 1.0 / len(cells))
    feats = _design_from_cell_probs(cells, probs, n, rng)
    return Dataset(
        features=feats,
        targets=np.zeros(n),
        feature_names=_default_names(d),
        distribution_tag="uniform_independent",
        provenance=f"balanced_uniform_design(d={d},n={n})",
    )


def balanced_biased_design(p, n: int, rng: np.random.Generator) -> Dataset:
    """Independent biased boolean design with exact cell proportions."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise InvalidParameterError("each probability must lie strictly inside (0, 1)")
    d = p.size
    cells = _all_cells(d)
    probs = np.prod(np.where(cells == 1.0, p, 1.0 - p), axis=1)
    feats = _design_from_cell_probs(cells, probs, n, rng)
    return Dataset(
        features=feats,
        targets=np.zeros(n),
        feature_names=_default_names(d),
        distribution_tag="nonuniform_independent",
        provenance=f"balanced_biased_design(p={p.tolist()},n={n})",
    )


def balanced_dependent_design(flip_prob: float, n: int, rng: np.random.Generator) -> Dataset:
    """Two uniform, positively dependent booleans with exact cell proportions."""
    if not (0.0 < flip_prob < 0.5):
        raise InvalidParameterError("flip_prob must lie strictly inside (0, 0.5)")
    cells = _all_cells(2)
    same = (1.0 - flip_prob) / 2.0
    diff = flip_prob / 2.0
    probs = np.array([same if c[0] == c[1] else diff for c in cells])
    feats = _design_from_cell_probs(cells, probs, n, rng)
    return Dataset(
        features=feats,
        targets=np.zeros(n),
        feature_names=_default_names(2),
        distribution_tag="uniform_dependent",
        provenance=f"balanced_dependent_design(flip_prob={flip_prob},n={n})",
    )


def frequency_design(features: np.ndarray, cap: int, rng: np.random.Generator, targets=None):
    """Compress rows to (unique rows, frequency weights), capped.

    When the matrix has more than ``cap`` distinct rows, fall back to a
    uniform-weight subsample of ``cap`` rows drawn with the stream.
    Returns ``(rows, weights)`` with weights summing to 1, plus the mean
    target per kept row when ``targets`` is given.
    """
    features = np.asarray(features, dtype=float)
    uniq, inverse, counts = np.unique(features, axis=0, return_inverse=True, return_counts=True)
    if len(uniq) <= cap:
        weights = counts / counts.sum()
        if targets is None:
            return uniq, weights
        sums = np.zeros(len(uniq))
        np.add.at(sums, inverse, np.asarray(targets, dtype=float))
        return uniq, weights, sums / counts
    pick = rng.permutation(features.shape[0])[:cap]
    weights = np.full(cap, 1.0 / cap)
    if targets is None:
        return features[pick], weights
    return features[pick], weights, np.asarray(targets, dtype=float)[pick]


# -- real-data loaders --------------------------------------------------------


def _synthetic_compas(rng: np.random.Generator) -> Dataset:
    n = COMPAS_SIZE
    race = rng.integers(0, 2, size=n).astype(float)
    unrelated_1 = rng.random(n)
    unrelated_2 = rng.random(n)
    priors = rng.integers(0, 15, size=n).astype(float)
    age = rng.integers(18, 70, size=n).astype(float)
    agree = rng.random(n) < COMPAS_LABEL_AGREEMENT
    label = np.where(agree, race, 1.0 - race)
    feats = np.column_stack([race, unrelated_1, unrelated_2, priors, age])
    return Dataset(
        features=feats,
        targets=label,
        feature_names=COMPAS_FEATURE_NAMES,
        distribution_tag="external",
        provenance=f"synthetic_compas(n={n},label_agreement={COMPAS_LABEL_AGREEMENT})",
    )


def _parse_float(value: str, row: int, column: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise DataFormatError(f"row {row}, column {column!r}: cannot parse {value!r}") from exc


def load_compas(path: str | Path | None, rng: np.random.Generator) -> Dataset:
    """Load the recidivism CSV, or build the deterministic synthetic stand-in.

    The real table is filtered with the usual screening-window rules when the
    relevant columns are present, the race column is encoded 1 for
    African-American defendants, and two synthetic uniform columns are appended
    so the corrupted-model attack has an unrelated feature to lean on.
    """
    if path is None:
        return _synthetic_compas(rng)

    path = Path(path)
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()[:16]
    reader = csv.DictReader(raw.decode("utf-8").splitlines())
    if reader.fieldnames is None:
        raise DataFormatError(f"{path}: empty file")
    for required in ("race", "two_year_recid"):
        if required not in reader.fieldnames:
            raise MissingColumnError(required)

    races, priors, ages, labels = [], [], [], []
    for i, row in enumerate(reader, start=2):
        if None in row.values() or None in row:
            raise DataFormatError(f"row {i}: ragged row")
        days = row.get("days_b_screening_arrest")
        if days not in (None, "", "NA"):
            screening = _parse_float(days, i, "days_b_screening_arrest")
            if not -30.0 <= screening <= 30.0:
                continue
        if row.get("is_recid") == "-1":
            continue
        if row.get("c_charge_degree") == "O":
            continue
        races.append(1.0 if row["race"] == "African-American" else 0.0)
        priors.append(_parse_float(row.get("priors_count", "0") or "0", i, "priors_count"))
        ages.append(_parse_float(row.get("age", "0") or "0", i, "age"))
        labels.append(_parse_float(row["two_year_recid"], i, "two_year_recid"))
    if not races:
        raise DataFormatError(f"{path}: no rows survived filtering")

    n = len(races)
    feats = np.column_stack(
        [
            np.array(races),
            rng.random(n),
            rng.random(n),
            np.array(priors),
            np.array(ages),
        ]
    )
    return Dataset(
        features=feats,
        targets=np.array(labels),
        feature_names=COMPAS_FEATURE_NAMES,
        distribution_tag="external",
        provenance=f"compas_csv(path={path.name},sha256={digest},n={n})",
    )


_IDX_IMAGE_MAGIC = 0x00000803
_IDX_LABEL_MAGIC = 0x00000801


def load_mnist_idx(images_path: str | Path, labels_path: str | Path) -> Dataset:
    """Load big-endian IDX image/label files; pixels scaled to [0, 1]."""
    images_path, labels_path = Path(images_path), Path(labels_path)
    img = images_path.read_bytes()
    lab = labels_path.read_bytes()

    (img_magic,) = struct.unpack(">i", img[:4])
    if img_magic != _IDX_IMAGE_MAGIC:
        raise MagicNumberError(
            f"{images_path}: magic {img_magic:#010x}, expected {_IDX_IMAGE_MAGIC:#010x}"
        )
    (lab_magic,) = struct.unpack(">i", lab[:4])
    if lab_magic != _IDX_LABEL_MAGIC:
        raise MagicNumberError(
            f"{labels_path}: magic {lab_magic:#010x}, expected {_IDX_LABEL_MAGIC:#010x}"
        )

    n_img, rows, cols = struct.unpack(">iii", img[4:16])
    (n_lab,) = struct.unpack(">i", lab[4:8])
    if n_img != n_lab:
        raise LengthMismatchError(f"{n_img} images vs {n_lab} labels")

    pixels = np.frombuffer(img, dtype=np.uint8, offset=16)
    if pixels.size != n_img * rows * cols:
        raise DataFormatError(f"{images_path}: truncated pixel payload")
    feats = pixels.reshape(n_img, rows * cols).astype(float) / 255.0
    targets = np.frombuffer(lab, dtype=np.uint8, offset=8).astype(float)
    if targets.size != n_lab:
        raise DataFormatError(f"{labels_path}: truncated label payload")

    variances = feats.var(axis=0)
    constant = tuple(int(j) for j in np.flatnonzero(variances == 0.0))
    return Dataset(
        features=feats,
        targets=targets,
        feature_names=tuple(f"px{i // cols}_{i % cols}" for i in range(rows * cols)),
        distribution_tag="external",
        provenance=(
            f"mnist_idx(images={images_path.name},labels={labels_path.name},n={n_img})"
        ),
        constant_columns=constant,
    )
