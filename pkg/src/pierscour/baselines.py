"""Published pier-scour equations for comparison runs.

Each formula is implemented exactly as printed in its source, as a plain
function over named dimensionless groups (Hancu additionally needs the
dimensional V, Vc, and D).  ``evaluate_baseline`` normalizes every result
to relative scour depth S/y so fitted models and baselines can share one
metrics pipeline; Hancu's native S/D is converted via (S/D)*(D/y).

Hancu's printed depth term is (Vc/(g*D))^(1/3), which is dimensionally
odd; ``hancu_squared=True`` switches to the classical Vc^2/(g*D) form.
Below the live-bed threshold (2*V/Vc - 1 <= 0) the raw expression goes
negative, which is unphysical, so the prediction is clamped to zero and
the clamp is counted in suite results.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .data import GRAVITY, DimensionlessRecord, RawScourRecord, Scale, derive_features
from .errors import MissingInputError, ValidationError

__all__ = [
    "Baseline",
    "laursen_toch",
    "shen",
    "hancu",
    "johnson",
    "richardson_davis",
    "hec18",
    "azamathulla",
    "sharafi",
    "evaluate_baseline",
    "run_baseline_suite",
    "BaselineSuite",
]


class Baseline(Enum):
    """The published equations, keyed by author and year."""

    LAURSEN_TOCH_1956 = "laursen_toch_1956"
    SHEN_1969 = "shen_1969"
    HANCU_1971 = "hancu_1971"
    JOHNSON_1992 = "johnson_1992"
    RICHARDSON_DAVIS_2001 = "richardson_davis_2001"
    HEC18 = "hec18"
    AZAMATHULLA_2009 = "azamathulla_2009"
    SHARAFI_2016 = "sharafi_2016"


def laursen_toch(d_over_y: float) -> float:
    """S/y = 1.35 (D/y)^0.7   (laboratory)."""
    return 1.35 * d_over_y**0.7


def shen(froude: float, d_over_y: float) -> float:
    """S/y = 3.4 Fr^0.67 (D/y)^0.67   (laboratory)."""
    return 3.4 * froude**0.67 * d_over_y**0.67


def hancu(V: float, Vc: float, D: float, g: float = GRAVITY, squared: bool = False) -> float:
    """S/D = 2.42 (2 V/Vc - 1) (Vc/(g D))^(1/3)   (laboratory).

    Returns the relative-to-pier-width scour S/D, clamped to zero in the
    clear-water regime 2 V/Vc <= 1.  ``squared`` uses Vc^2/(g D) instead
    of the printed Vc/(g D).
    """
    intensity = 2.0 * V / Vc - 1.0
    if intensity <= 0.0:
        return 0.0
    depth_term = (Vc * Vc if squared else Vc) / (g * D)
    return 2.42 * intensity * depth_term ** (1.0 / 3.0)


def johnson(sigma: float, froude: float, d_over_y: float) -> float:
    """S/y = 2.02 sigma^-0.98 Fr^0.21 (D/y)^0.98   (laboratory)."""
    return 2.02 * sigma**-0.98 * froude**0.21 * d_over_y**0.98


def richardson_davis(froude: float, d_over_y: float) -> float:
    """S/y = 2.6 Fr^0.65 (D/y)^0.43   (field)."""
    return 2.6 * froude**0.65 * d_over_y**0.43


def hec18(froude: float, d_over_y: float) -> float:
    """S/y = 2.1 Fr^0.43 (D/y)^0.65   (laboratory and field)."""
    return 2.1 * froude**0.43 * d_over_y**0.65


def azamathulla(
    sigma: float, froude: float, d50_over_y: float, d_over_y: float, l_over_y: float
) -> float:
    """S/y = 1.82 sigma^-0.03159 Fr^0.42 (d50/y)^0.042 (D/y)^-0.28 (L/y)^-0.37   (field)."""
    return (
        1.82
        * sigma**-0.03159
        * froude**0.42
        * d50_over_y**0.042
        * d_over_y**-0.28
        * l_over_y**-0.37
    )


def sharafi(
    sigma: float, froude: float, d50_over_y: float, d_over_y: float, l_over_y: float
) -> float:
    """S/y = 0.28 sigma^0.13 Fr^0.47 (d50/y)^-0.1 (D/y)^0.44 (L/y)^0.23   (field)."""
    return (
        0.28
        * sigma**0.13
        * froude**0.47
        * d50_over_y**-0.1
        * d_over_y**0.44
        * l_over_y**0.23
    )


# dataset type each equation was derived on, for reference/reporting
DATASET_TYPES = {
    Baseline.LAURSEN_TOCH_1956: frozenset({Scale.LABORATORY}),
    Baseline.SHEN_1969: frozenset({Scale.LABORATORY}),
    Baseline.HANCU_1971: frozenset({Scale.LABORATORY}),
    Baseline.JOHNSON_1992: frozenset({Scale.LABORATORY}),
    Baseline.RICHARDSON_DAVIS_2001: frozenset({Scale.FIELD}),
    Baseline.HEC18: frozenset({Scale.LABORATORY, Scale.FIELD}),
    Baseline.AZAMATHULLA_2009: frozenset({Scale.FIELD}),
    Baseline.SHARAFI_2016: frozenset({Scale.FIELD}),
}

# named inputs each formula requires; records lacking one are skipped
REQUIRED_INPUTS = {
    Baseline.LAURSEN_TOCH_1956: ("D/y",),
    Baseline.SHEN_1969: ("Fr", "D/y"),
    Baseline.HANCU_1971: ("V", "Vc", "D", "D/y"),
    Baseline.JOHNSON_1992: ("sigma", "Fr", "D/y"),
    Baseline.RICHARDSON_DAVIS_2001: ("Fr", "D/y"),
    Baseline.HEC18: ("Fr", "D/y"),
    Baseline.AZAMATHULLA_2009: ("sigma", "Fr", "d50/y", "D/y", "L/y"),
    Baseline.SHARAFI_2016: ("sigma", "Fr", "d50/y", "D/y", "L/y"),
}


def _missing(baseline: Baseline, name: str) -> MissingInputError:
    return MissingInputError(f"{baseline.value} requires input {name}, which the record lacks")


def evaluate_baseline(
    baseline: Baseline,
    record: RawScourRecord | DimensionlessRecord,
    *,
    g: float = GRAVITY,
    hancu_squared: bool = False,
) -> float:
    """Predicted S/y from one published equation on one record.

    Accepts a raw or a dimensionless record; Hancu needs the dimensional
    V, Vc, and D and therefore a raw laboratory record.

    Raises
    ------
    MissingInputError
        Naming the formula and the input the record lacks.
    """
    raw = record if isinstance(record, RawScourRecord) else None
    dim = derive_features(record, g) if raw is not None else record

    if baseline is Baseline.HANCU_1971:
        if raw is None:
            raise _missing(baseline, "V, Vc, D (dimensional; pass a raw record)")
        if raw.Vc is None:
            raise _missing(baseline, "Vc")
        s_over_d = hancu(raw.V, raw.Vc, raw.D, g=g, squared=hancu_squared)
        return s_over_d * dim.d_over_y
    if baseline is Baseline.LAURSEN_TOCH_1956:
        return laursen_toch(dim.d_over_y)
    if baseline is Baseline.SHEN_1969:
        return shen(dim.froude, dim.d_over_y)
    if baseline is Baseline.JOHNSON_1992:
        return johnson(dim.sigma, dim.froude, dim.d_over_y)
    if baseline is Baseline.RICHARDSON_DAVIS_2001:
        return richardson_davis(dim.froude, dim.d_over_y)
    if baseline is Baseline.HEC18:
        return hec18(dim.froude, dim.d_over_y)
    if dim.l_over_y is None:
        raise _missing(baseline, "L/y")
    if baseline is Baseline.AZAMATHULLA_2009:
        return azamathulla(dim.sigma, dim.froude, dim.d50_over_y, dim.d_over_y, dim.l_over_y)
    return sharafi(dim.sigma, dim.froude, dim.d50_over_y, dim.d_over_y, dim.l_over_y)


@dataclass(frozen=True)
class BaselineSuite:
    """Prediction matrix from :func:`run_baseline_suite`.

    ``predictions[b]`` is aligned with the input records; skipped records
    hold NaN.  ``skipped`` counts records lacking a required input and
    ``hancu_clamped`` counts clear-water clamps to zero.
    """

    baselines: tuple
    predictions: dict
    skipped: dict
    hancu_clamped: int

    def applicable(self) -> list[Baseline]:
        """Baselines that produced at least one prediction."""
        n = next(iter(self.predictions.values())).size if self.predictions else 0
        return [b for b in self.baselines if self.skipped[b] < n]


def run_baseline_suite(
    baselines: Sequence[Baseline],
    records: Sequence[RawScourRecord],
    *,
    g: float = GRAVITY,
    hancu_squared: bool = False,
) -> BaselineSuite:
    """Evaluate each baseline on each record, skipping missing inputs.

    A baseline inapplicable to every record (for example a pier-length
    formula on laboratory data) simply ends up fully skipped; the suite
    itself always succeeds on non-empty input.
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot run a baseline suite on an empty record collection")
    baselines = tuple(baselines)
    predictions = {b: np.full(len(records), np.nan) for b in baselines}
    skipped = {b: 0 for b in baselines}
    clamped = 0
    for i, record in enumerate(records):
        for b in baselines:
            try:
                value = evaluate_baseline(b, record, g=g, hancu_squared=hancu_squared)
            except MissingInputError:
                skipped[b] += 1
                continue
            if b is Baseline.HANCU_1971 and value == 0.0:
                clamped += 1
            predictions[b][i] = value
    return BaselineSuite(
        baselines=baselines,
        predictions=predictions,
        skipped=skipped,
        hancu_clamped=clamped,
    )
