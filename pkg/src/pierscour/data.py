"""Scour observation records: ingestion, validation, features, splitting.

A raw record is one measured observation in physical units (meters, m/s):
pier width D, mean velocity V, flow depth y, median grain size d50,
gradation sigma, scour depth S, plus critical velocity Vc on laboratory
records and pier length L on field records.  Derived records reduce an
observation to dimensionless groups so one model form serves both scales:

    laboratory:  sigma, Fr, D/y, d50/y, V/Vc   ->  S/y
    field:       sigma, Fr, D/y, d50/y, L/y    ->  S/y

with the Froude number defined as Fr = V / sqrt(g*y), g = 9.81 m/s^2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, SchemaError, ValidationError

__all__ = [
    "GRAVITY",
    "Scale",
    "RawScourRecord",
    "DimensionlessRecord",
    "DatasetSplit",
    "LoadResult",
    "derive_features",
    "load_csv",
    "write_csv",
    "sniff_scale",
    "split",
    "summarize",
    "VariableSummary",
    "LAB_COLUMNS",
    "FIELD_COLUMNS",
]

GRAVITY = 9.81  # m/s^2

LAB_COLUMNS = ["D_m", "V_mps", "Vc_mps", "y_m", "d50_m", "sigma", "S_m"]
FIELD_COLUMNS = ["D_m", "V_mps", "L_m", "y_m", "d50_m", "sigma", "S_m"]


class Scale(str, Enum):
    LABORATORY = "laboratory"
    FIELD = "field"


def _require_positive(name: str, value) -> None:
    if value is None or not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True)
class RawScourRecord:
    """One measured observation in physical units.

    D: pier width normal to the flow [m]; V: mean approach velocity [m/s];
    y: approach flow depth [m]; d50: median grain size [m]; sigma: sediment
    gradation [-]; S: equilibrium scour depth [m]; Vc: critical velocity
    [m/s], laboratory records only; L: pier length [m], field records only.
    """

    D: float
    V: float
    y: float
    d50: float
    sigma: float
    S: float
    scale: Scale
    Vc: float | None = None
    L: float | None = None

    def __post_init__(self):
        _require_positive("pier width D", self.D)
        _require_positive("velocity V", self.V)
        _require_positive("flow depth y", self.y)
        _require_positive("grain size d50", self.d50)
        if not math.isfinite(self.sigma) or self.sigma < 1:
            raise ValidationError(f"sediment gradation sigma must be >= 1, got {self.sigma}")
        if not math.isfinite(self.S) or self.S < 0:
            raise ValidationError(f"scour depth S must be >= 0, got {self.S}")
        if self.scale is Scale.LABORATORY:
            if self.Vc is None:
                raise ValidationError("laboratory record requires critical velocity Vc")
            _require_positive("critical velocity Vc", self.Vc)
            if self.L is not None:
                raise ValidationError("pier length L is a field-record input")
        else:
            if self.L is None:
                raise ValidationError("field record requires pier length L")
            _require_positive("pier length L", self.L)
            if self.Vc is not None:
                raise ValidationError("critical velocity Vc is a laboratory-record input")


@dataclass(frozen=True)
class DimensionlessRecord:
    """Scale-free form of one observation.

    Exactly one of ``v_over_vc`` (laboratory) and ``l_over_y`` (field) is
    set.  All features are strictly positive; the target ``s_over_y`` may
    be zero (field datasets include zero-scour observations).
    """

    sigma: float
    froude: float
    d_over_y: float
    d50_over_y: float
    s_over_y: float
    scale: Scale
    v_over_vc: float | None = None
    l_over_y: float | None = None

    def __post_init__(self):
        _require_positive("sigma", self.sigma)
        _require_positive("Froude number", self.froude)
        _require_positive("D/y", self.d_over_y)
        _require_positive("d50/y", self.d50_over_y)
        if not math.isfinite(self.s_over_y) or self.s_over_y < 0:
            raise ValidationError(f"target S/y must be >= 0, got {self.s_over_y}")
        if self.scale is Scale.LABORATORY:
            if self.v_over_vc is None or self.l_over_y is not None:
                raise ValidationError("laboratory record carries V/Vc and no L/y")
            _require_positive("V/Vc", self.v_over_vc)
        else:
            if self.l_over_y is None or self.v_over_vc is not None:
                raise ValidationError("field record carries L/y and no V/Vc")
            _require_positive("L/y", self.l_over_y)


def derive_features(raw: RawScourRecord, g: float = GRAVITY) -> DimensionlessRecord:
    """Reduce a raw record to its dimensionless features and target."""
    return DimensionlessRecord(
        sigma=raw.sigma,
        froude=raw.V / math.sqrt(g * raw.y),
        d_over_y=raw.D / raw.y,
        d50_over_y=raw.d50 / raw.y,
        s_over_y=raw.S / raw.y,
        scale=raw.scale,
        v_over_vc=None if raw.Vc is None else raw.V / raw.Vc,
        l_over_y=None if raw.L is None else raw.L / raw.y,
    )


@dataclass(frozen=True)
class LoadResult:
    """Accepted records plus per-row rejection reasons."""

    records: tuple
    rejected: tuple  # (line_number, reason) pairs

    @property
    def n_accepted(self) -> int:
        return len(self.records)

    @property
    def n_rejected(self) -> int:
        return len(self.rejected)


def _columns_for(scale: Scale) -> list[str]:
    return LAB_COLUMNS if scale is Scale.LABORATORY else FIELD_COLUMNS


def _record_from_row(values: dict, scale: Scale) -> RawScourRecord:
    common = dict(
        D=values["D_m"],
        V=values["V_mps"],
        y=values["y_m"],
        d50=values["d50_m"],
        sigma=values["sigma"],
        S=values["S_m"],
        scale=scale,
    )
    if scale is Scale.LABORATORY:
        return RawScourRecord(Vc=values["Vc_mps"], **common)
    return RawScourRecord(L=values["L_m"], **common)


def load_csv(path, scale: Scale, strict: bool = False) -> LoadResult:
    """Read a UTF-8 scour CSV into validated records.

    The header row is required and must contain every schema column for
    ``scale`` (extras are ignored).  Lines starting with ``#`` are
    comments.  Malformed or invariant-violating rows are rejected with
    their line number and reason; ``strict=True`` turns the first such
    rejection into a ValidationError.

    Raises
    ------
    SchemaError
        If the header is missing or lacks a required column.
    """
    columns = _columns_for(scale)
    records: list[RawScourRecord] = []
    rejected: list[tuple[int, str]] = []

    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = None
        for row in reader:
            if not row or row[0].lstrip().startswith("#"):
                continue
            line_no = reader.line_num
            cells = [cell.strip() for cell in row]
            if header is None:
                header = cells
                missing = [c for c in columns if c not in header]
                if missing:
                    raise SchemaError(
                        f"{path}: header is missing required column(s) {missing} "
                        f"for {scale.value} data"
                    )
                index = {c: header.index(c) for c in columns}
                continue

            try:
                if len(cells) < len(header):
                    raise ValidationError(
                        f"expected {len(header)} cells, got {len(cells)}"
                    )
                values = {}
                for name, pos in index.items():
                    try:
                        values[name] = float(cells[pos])
                    except ValueError:
                        raise ValidationError(
                            f"non-numeric value for {name}: {cells[pos]!r}"
                        ) from None
                records.append(_record_from_row(values, scale))
            except ValidationError as exc:
                if strict:
                    raise ValidationError(f"{path}:{line_no}: {exc}") from exc
                rejected.append((line_no, str(exc)))

    if header is None:
        raise SchemaError(f"{path}: no header row found")
    return LoadResult(records=tuple(records), rejected=tuple(rejected))


def write_csv(records: Sequence[RawScourRecord], path) -> None:
    """Write records back out in the schema layout for their scale.

    Floats are written with ``repr`` so a reload reproduces every numeric
    field bit-for-bit.
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot write an empty record collection")
    scale = records[0].scale
    if any(r.scale is not scale for r in records):
        raise ValidationError("cannot mix laboratory and field records in one file")
    columns = _columns_for(scale)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for r in records:
            third = r.Vc if scale is Scale.LABORATORY else r.L
            writer.writerow(
                [repr(v) for v in (r.D, r.V, third, r.y, r.d50, r.sigma, r.S)]
            )


def sniff_scale(path) -> Scale:
    """Infer laboratory vs field from the header's Vc_mps / L_m column."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].lstrip().startswith("#"):
                continue
            header = [cell.strip() for cell in row]
            if "Vc_mps" in header:
                return Scale.LABORATORY
            if "L_m" in header:
                return Scale.FIELD
            raise SchemaError(f"{path}: header has neither Vc_mps nor L_m")
    raise SchemaError(f"{path}: no header row found")


@dataclass(frozen=True)
class DatasetSplit:
    """Seeded train/test partition of a record sequence.

    Indices refer to positions in the input sequence.  For ratios below
    one half the training side occupies the front of the seeded
    permutation, otherwise the testing side does, so a ratio and its
    complement on the same seed yield mirrored partitions.
    """

    training: tuple
    testing: tuple
    training_indices: tuple
    testing_indices: tuple
    split_seed: int
    ratio: float


def split(records: Sequence, ratio: float, seed: int) -> DatasetSplit:
    """Partition records into training/testing by a seeded shuffle.

    The training side holds ``round(ratio * N)`` records drawn uniformly
    at random; the same seed always produces the same partition.
    """
    if not (0.0 < ratio < 1.0):
        raise ConfigurationError(f"split ratio must lie in (0, 1), got {ratio}")
    records = list(records)
    n = len(records)
    if n < 2:
        raise ValidationError(f"need at least 2 records to split, got {n}")

    n_train = int(round(ratio * n))
    n_train = min(max(n_train, 0), n)
    perm = np.random.default_rng(seed).permutation(n)
    # the side the ratio makes smaller takes the front of the permutation,
    # so a ratio and its complement on one seed give mirrored partitions
    if ratio < 0.5:
        train_idx, test_idx = perm[:n_train], perm[n_train:]
    else:
        test_idx, train_idx = perm[: n - n_train], perm[n - n_train :]
    train_idx = tuple(sorted(int(i) for i in train_idx))
    test_idx = tuple(sorted(int(i) for i in test_idx))

    return DatasetSplit(
        training=tuple(records[i] for i in train_idx),
        testing=tuple(records[i] for i in test_idx),
        training_indices=train_idx,
        testing_indices=test_idx,
        split_seed=int(seed),
        ratio=float(ratio),
    )


@dataclass(frozen=True)
class VariableSummary:
    min: float
    max: float
    mean: float
    std: float  # sample standard deviation (N-1); 0.0 when n == 1
    n: int


def summarize(records: Sequence) -> dict[str, VariableSummary]:
    """Per-variable min/max/mean/std over the numeric fields of records.

    Works for raw and dimensionless records alike; fields that are None on
    every record are omitted, and std uses the N-1 divisor (reported as
    0.0 with n=1 visible on the summary when only one record is present).
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot summarize an empty record collection")
    out: dict[str, VariableSummary] = {}
    for f in fields(records[0]):
        values = [getattr(r, f.name) for r in records]
        values = [v for v in values if isinstance(v, (int, float))]
        if not values:
            continue
        arr = np.asarray(values, dtype=float)
        std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
        out[f.name] = VariableSummary(
            min=float(arr.min()),
            max=float(arr.max()),
            mean=float(arr.mean()),
            std=std,
            n=int(arr.size),
        )
    return out
