"""Synthetic scour datasets for the demo scripts.

Physical quantities are sampled uniformly over the spans of the compiled
laboratory and field datasets this kind of model is calibrated on, and the
scour depth of each record is produced exactly by a chosen power law, so
every demo has a known ground truth.
"""

import math

import numpy as np

from pierscour.data import GRAVITY, RawScourRecord, Scale
from pierscour.model import Feature, PowerLawModel

PHYSICAL_RANGES = {
    Scale.LABORATORY: {
        "D": (0.016, 0.915), "V": (0.149, 2.16), "Vc": (0.222, 1.27),
        "y": (0.0201, 1.9), "d50": (0.00022, 0.0078), "sigma": (1.1, 5.5),
    },
    Scale.FIELD: {
        "D": (0.3048, 28.7), "V": (0.088, 4.084), "L": (0.975, 38.1),
        "y": (0.1524, 22.524), "d50": (0.000008, 0.108), "sigma": (1.2, 20.34),
    },
}


def make_records(n: int, seed: int, scale: Scale, generator: PowerLawModel):
    rng = np.random.default_rng(seed)
    records = []
    for _ in range(n):
        v = {k: rng.uniform(lo, hi) for k, (lo, hi) in PHYSICAL_RANGES[scale].items()}
        features = {
            Feature.SIGMA: v["sigma"],
            Feature.FROUDE: v["V"] / math.sqrt(GRAVITY * v["y"]),
            Feature.D_OVER_Y: v["D"] / v["y"],
            Feature.D50_OVER_Y: v["d50"] / v["y"],
        }
        if scale is Scale.LABORATORY:
            features[Feature.V_OVER_VC] = v["V"] / v["Vc"]
        else:
            features[Feature.L_OVER_Y] = v["L"] / v["y"]
        s_over_y = generator.a
        for feature, exponent in zip(generator.spec.features, generator.exponents):
            s_over_y *= features[feature] ** exponent
        records.append(
            RawScourRecord(
                D=v["D"], V=v["V"], y=v["y"], d50=v["d50"], sigma=v["sigma"],
                S=s_over_y * v["y"], scale=scale,
                Vc=v.get("Vc"), L=v.get("L"),
            )
        )
    return records
