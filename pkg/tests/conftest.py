"""Shared synthetic-data helpers for the test suite.

Physical sampling ranges below span the compiled laboratory and field
datasets this kind of model is calibrated on; synthetic records drawn from
them are physically plausible and exercise the full feature spread.
"""

from __future__ import annotations

import math

import numpy as np

from pierscour.data import GRAVITY, RawScourRecord, Scale, write_csv
from pierscour.model import Feature, PowerLawModel

LAB_PHYSICAL_RANGES = {
    "D": (0.01585, 0.915),
    "V": (0.149, 2.16),
    "Vc": (0.222, 1.27),
    "y": (0.0201, 1.9),
    "d50": (0.00022, 0.0078),
    "sigma": (1.1, 5.5),
}

FIELD_PHYSICAL_RANGES = {
    "D": (0.3048, 28.7),
    "V": (0.088, 4.084),
    "L": (0.975, 38.1),
    "y": (0.1524, 22.524),
    "d50": (0.000008, 0.108),
    "sigma": (1.2, 20.34),
}

# dimensionless feature ranges spanned by the same datasets
LAB_FEATURE_RANGES = {
    Feature.SIGMA: (1.1, 5.5),
    Feature.FROUDE: (0.067, 1.498),
    Feature.D_OVER_Y: (0.0477, 19.16),
    Feature.D50_OVER_Y: (0.00012, 0.107),
    Feature.V_OVER_VC: (0.4148, 5.38),
}

FIELD_FEATURE_RANGES = {
    Feature.SIGMA: (1.2, 20.34),
    Feature.FROUDE: (0.0269, 1.184),
    Feature.D_OVER_Y: (0.0722, 50.297),
    Feature.D50_OVER_Y: (4.9e-7, 0.2264),
    Feature.L_OVER_Y: (0.5142, 81.818),
}


def _power_law(model: PowerLawModel, features: dict) -> float:
    value = model.a
    for feature, exponent in zip(model.spec.features, model.exponents):
        value *= features[feature] ** exponent
    return value


def make_raw_records(
    n: int,
    seed: int,
    scale: Scale = Scale.LABORATORY,
    generator: PowerLawModel | None = None,
) -> list[RawScourRecord]:
    """Random physically-consistent raw records.

    With ``generator`` set, each record's scour depth is produced exactly
    by that power law from the record's own derived features (noise-free);
    otherwise S/y is sampled uniformly in a plausible band.
    """
    rng = np.random.default_rng(seed)
    ranges = LAB_PHYSICAL_RANGES if scale is Scale.LABORATORY else FIELD_PHYSICAL_RANGES
    records = []
    for _ in range(n):
        values = {k: rng.uniform(lo, hi) for k, (lo, hi) in ranges.items()}
        features = {
            Feature.SIGMA: values["sigma"],
            Feature.FROUDE: values["V"] / math.sqrt(GRAVITY * values["y"]),
            Feature.D_OVER_Y: values["D"] / values["y"],
            Feature.D50_OVER_Y: values["d50"] / values["y"],
        }
        if scale is Scale.LABORATORY:
            features[Feature.V_OVER_VC] = values["V"] / values["Vc"]
        else:
            features[Feature.L_OVER_Y] = values["L"] / values["y"]
        if generator is not None:
            s_over_y = _power_law(generator, features)
        else:
            s_over_y = rng.uniform(0.02, 3.0)
        records.append(
            RawScourRecord(
                D=values["D"],
                V=values["V"],
                y=values["y"],
                d50=values["d50"],
                sigma=values["sigma"],
                S=s_over_y * values["y"],
                scale=scale,
                Vc=values.get("Vc"),
                L=values.get("L"),
            )
        )
    return records


def write_dataset(path, n: int, seed: int, scale: Scale = Scale.LABORATORY, generator=None):
    records = make_raw_records(n, seed, scale, generator)
    write_csv(records, path)
    return records
