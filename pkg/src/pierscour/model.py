"""Multiplicative power-law scour models and their fitting objective.

A model predicts the relative scour depth S/y as a positive constant times
a product of dimensionless features, each raised to its own exponent:

    S/y = a * f1^e1 * f2^e2 * ... * fk^ek

The twelve built-in specifications (L1-L6 for laboratory data, F1-F6 for
field data) form a feature-exclusion matrix: the *1 models use all five
features of their scale and each remaining model drops exactly one, which
is what makes per-feature sensitivity runs possible.

Fitting minimizes the root-mean-square error of predicted vs measured S/y
over a training set, searched by the particle swarm in :mod:`.swarm`; no
log-space least-squares shortcut is taken on the fitting path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .data import DimensionlessRecord, Scale
from .errors import ConfigurationError, CrossScaleError, ModelFileError, ValidationError
from .swarm import OptimizationResult, SearchBounds, SwarmConfig, optimize

__all__ = [
    "Feature",
    "ModelSpec",
    "PowerLawModel",
    "BUILTIN_SPECS",
    "builtin_spec",
    "builtin_specs_for",
    "feature_values",
    "feature_matrix",
    "predict",
    "rmse_objective",
    "coefficient_bounds",
    "default_coefficient_bounds",
    "fit",
    "save_model",
    "load_model",
]


class Feature(Enum):
    """Dimensionless feature identifiers, with their record attribute."""

    SIGMA = "sigma"
    FROUDE = "Fr"
    D_OVER_Y = "D/y"
    D50_OVER_Y = "d50/y"
    V_OVER_VC = "V/Vc"
    L_OVER_Y = "L/y"

    @property
    def attribute(self) -> str:
        return _ATTRIBUTES[self]

    @property
    def scales(self) -> frozenset:
        """Scales on which records carry this feature."""
        if self is Feature.V_OVER_VC:
            return frozenset({Scale.LABORATORY})
        if self is Feature.L_OVER_Y:
            return frozenset({Scale.FIELD})
        return frozenset({Scale.LABORATORY, Scale.FIELD})


_ATTRIBUTES = {
    Feature.SIGMA: "sigma",
    Feature.FROUDE: "froude",
    Feature.D_OVER_Y: "d_over_y",
    Feature.D50_OVER_Y: "d50_over_y",
    Feature.V_OVER_VC: "v_over_vc",
    Feature.L_OVER_Y: "l_over_y",
}

_FEATURE_BY_LABEL = {f.value: f for f in Feature}


@dataclass(frozen=True)
class ModelSpec:
    """Which features a power-law model uses, in coefficient order."""

    spec_id: str
    scale: Scale
    features: tuple

    def __post_init__(self):
        features = tuple(self.features)
        if not features:
            raise ConfigurationError("a model spec needs at least one feature")
        if len(set(features)) != len(features):
            raise ConfigurationError(f"duplicate features in spec {self.spec_id!r}")
        for f in features:
            if self.scale not in f.scales:
                raise ConfigurationError(
                    f"feature {f.value} is not available on {self.scale.value} records"
                )
        object.__setattr__(self, "features", features)


def _specs() -> dict[str, ModelSpec]:
    lab = Scale.LABORATORY
    fld = Scale.FIELD
    S, FR, DY, D50Y, VVC, LY = (
        Feature.SIGMA,
        Feature.FROUDE,
        Feature.D_OVER_Y,
        Feature.D50_OVER_Y,
        Feature.V_OVER_VC,
        Feature.L_OVER_Y,
    )
    table = {
        "L1": (lab, (S, FR, DY, D50Y, VVC)),
        "L2": (lab, (FR, DY, D50Y, VVC)),
        "L3": (lab, (S, DY, D50Y, VVC)),
        "L4": (lab, (S, FR, D50Y, VVC)),
        "L5": (lab, (S, FR, DY, VVC)),
        "L6": (lab, (S, FR, DY, D50Y)),
        "F1": (fld, (S, FR, DY, D50Y, LY)),
        "F2": (fld, (FR, DY, D50Y, LY)),
        "F3": (fld, (S, FR, DY, D50Y)),
        "F4": (fld, (S, FR, D50Y, LY)),
        "F5": (fld, (S, FR, DY, LY)),
        "F6": (fld, (S, DY, D50Y, LY)),
    }
    return {
        spec_id: ModelSpec(spec_id=spec_id, scale=scale, features=feats)
        for spec_id, (scale, feats) in table.items()
    }


BUILTIN_SPECS: dict[str, ModelSpec] = _specs()


def builtin_spec(spec_id: str) -> ModelSpec:
    try:
        return BUILTIN_SPECS[spec_id]
    except KeyError:
        raise ConfigurationError(
            f"unknown model spec {spec_id!r}; valid ids: {', '.join(BUILTIN_SPECS)}"
        ) from None


def builtin_specs_for(scale: Scale) -> list[ModelSpec]:
    """The six built-in specs for one scale, in id order."""
    return [s for s in BUILTIN_SPECS.values() if s.scale is scale]


def feature_values(record: DimensionlessRecord, features: Sequence[Feature]) -> np.ndarray:
    """Pull a record's values for ``features``, in order.

    A feature the record does not carry is refused, never substituted.
    """
    out = np.empty(len(features))
    for i, f in enumerate(features):
        value = getattr(record, f.attribute)
        if value is None:
            raise CrossScaleError(
                f"record does not carry feature {f.value}; evaluation refused"
            )
        out[i] = value
    return out


def _check_scale(spec: ModelSpec, record: DimensionlessRecord, allow_cross_scale: bool) -> None:
    if not allow_cross_scale and record.scale is not spec.scale:
        raise CrossScaleError(
            f"spec {spec.spec_id!r} is {spec.scale.value}-scale but the record is "
            f"{record.scale.value}-scale (pass allow_cross_scale=True for verbatim transfer)"
        )


def feature_matrix(
    records: Sequence[DimensionlessRecord],
    spec: ModelSpec,
    *,
    allow_cross_scale: bool = False,
) -> np.ndarray:
    """Stack feature vectors row-per-record."""
    rows = []
    for record in records:
        _check_scale(spec, record, allow_cross_scale)
        rows.append(feature_values(record, spec.features))
    return np.array(rows)


@dataclass(frozen=True)
class PowerLawModel:
    """A fitted (or hand-built) power-law model.

    ``exponents`` parallels ``spec.features``; the coefficient vector used
    by the optimizer is ``[a, *exponents]`` in exactly that order.
    """

    spec: ModelSpec
    a: float
    exponents: tuple
    fit_seed: int | None = None
    fit_rmse: float | None = None

    def __post_init__(self):
        exponents = tuple(float(e) for e in self.exponents)
        if len(exponents) != len(self.spec.features):
            raise ValidationError(
                f"spec {self.spec.spec_id!r} has {len(self.spec.features)} features "
                f"but {len(exponents)} exponents were given"
            )
        if not np.isfinite(self.a) or self.a <= 0:
            raise ValidationError(f"constant a must be finite and > 0, got {self.a}")
        if not all(np.isfinite(e) for e in exponents):
            raise ValidationError("exponents must be finite")
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "a", float(self.a))

    def coefficient_vector(self) -> np.ndarray:
        return np.array([self.a, *self.exponents])

    def predict(self, record: DimensionlessRecord, *, allow_cross_scale: bool = False) -> float:
        return predict(self, record, allow_cross_scale=allow_cross_scale)

    def predict_many(
        self, records: Sequence[DimensionlessRecord], *, allow_cross_scale: bool = False
    ) -> np.ndarray:
        values = feature_matrix(records, self.spec, allow_cross_scale=allow_cross_scale)
        return self.a * np.exp(np.log(values) @ np.asarray(self.exponents))


def predict(
    model: PowerLawModel,
    record: DimensionlessRecord,
    *,
    allow_cross_scale: bool = False,
) -> float:
    """Evaluate the model on one record; strictly positive by construction."""
    _check_scale(model.spec, record, allow_cross_scale)
    values = feature_values(record, model.spec.features)
    return float(model.a * np.prod(values ** np.asarray(model.exponents)))


def rmse_objective(
    spec: ModelSpec,
    records: Sequence[DimensionlessRecord],
) -> Callable[[np.ndarray], float]:
    """Build the fitting objective for ``spec`` over a training set.

    The returned callable maps a coefficient vector ``[a, *exponents]`` to
    the RMSE of predicted vs measured S/y.  Candidates with a <= 0 or
    non-finite predictions map to +inf, so the swarm can never adopt them.
    The callable is pure and safe to call from multiple threads.
    """
    records = list(records)
    if not records:
        raise ValidationError("cannot build an objective from an empty training set")
    scales = {r.scale for r in records}
    if len(scales) > 1:
        raise ValidationError("training records must share one scale")
    log_features = np.log(feature_matrix(records, spec))
    targets = np.array([r.s_over_y for r in records])
    n_coeffs = 1 + len(spec.features)

    def objective(coeffs: np.ndarray) -> float:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (n_coeffs,):
            raise ValueError(f"expected {n_coeffs} coefficients, got shape {coeffs.shape}")
        a = coeffs[0]
        if not np.isfinite(a) or a <= 0:
            return np.inf
        with np.errstate(over="ignore"):
            predicted = a * np.exp(log_features @ coeffs[1:])
        if not np.isfinite(predicted).all():
            return np.inf
        return float(np.sqrt(np.mean((predicted - targets) ** 2)))

    return objective


A_BOUNDS = (1e-6, 10.0)
EXPONENT_BOUNDS = (-3.0, 3.0)


def coefficient_bounds(
    spec: ModelSpec,
    a_bounds: tuple = A_BOUNDS,
    exponent_bounds: tuple = EXPONENT_BOUNDS,
) -> SearchBounds:
    """Search box for ``spec``'s coefficient vector ``[a, *exponents]``."""
    k = len(spec.features)
    return SearchBounds(
        [a_bounds[0]] + [exponent_bounds[0]] * k,
        [a_bounds[1]] + [exponent_bounds[1]] * k,
    )


def default_coefficient_bounds(spec: ModelSpec) -> SearchBounds:
    """Default search box: a in (0, 10], exponents in [-3, 3].

    The open left end of the constant's range is materialized as 1e-6.
    Published scour power laws sit well inside this box; pass wider ranges
    to :func:`coefficient_bounds` if a dataset demands more.
    """
    return coefficient_bounds(spec)


def fit(
    spec: ModelSpec,
    training: Sequence[DimensionlessRecord],
    config: SwarmConfig | None = None,
    bounds: SearchBounds | None = None,
    *,
    workers: int = 1,
) -> tuple[PowerLawModel, OptimizationResult]:
    """Fit ``spec`` to a training set by swarm search on the RMSE objective.

    Returns the fitted model together with the full optimization result
    (best-value trace included).  Same config and seed, same coefficients.
    """
    if config is None:
        config = SwarmConfig()
    if bounds is None:
        bounds = default_coefficient_bounds(spec)
    objective = rmse_objective(spec, training)
    result = optimize(objective, bounds, config, workers=workers)
    model = PowerLawModel(
        spec=spec,
        a=float(result.best_position[0]),
        exponents=tuple(float(e) for e in result.best_position[1:]),
        fit_seed=config.seed,
        fit_rmse=float(result.best_value),
    )
    return model, result


def _model_payload(model: PowerLawModel) -> dict:
    return {
        "spec_id": model.spec.spec_id,
        "scale": model.spec.scale.value,
        "features": [f.value for f in model.spec.features],
        "a": model.a,
        "exponents": list(model.exponents),
        "fit_seed": model.fit_seed,
        "fit_rmse": model.fit_rmse,
    }


def save_model(model: PowerLawModel, path) -> None:
    """Write one model per file as structured JSON text."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_model_payload(model), handle, indent=2)
        handle.write("\n")


def load_model(path) -> PowerLawModel:
    """Read a model file, validating every field.

    Raises
    ------
    ModelFileError
        On malformed JSON (with line/column), unknown feature or scale
        ids, invariant violations, or a built-in spec id whose stored
        feature list disagrees with the built-in definition.
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ModelFileError(
                f"{path}: malformed model file at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc

    required = ["spec_id", "scale", "features", "a", "exponents"]
    missing = [k for k in required if k not in payload]
    if missing:
        raise ModelFileError(f"{path}: missing field(s) {missing}")
    try:
        scale = Scale(payload["scale"])
    except ValueError:
        raise ModelFileError(f"{path}: unknown scale {payload['scale']!r}") from None
    features = []
    for label in payload["features"]:
        feature = _FEATURE_BY_LABEL.get(label)
        if feature is None:
            raise ModelFileError(f"{path}: unknown feature id {label!r}")
        features.append(feature)

    spec_id = str(payload["spec_id"])
    try:
        spec = ModelSpec(spec_id=spec_id, scale=scale, features=tuple(features))
    except ConfigurationError as exc:
        raise ModelFileError(f"{path}: {exc}") from exc
    if spec_id in BUILTIN_SPECS and spec != BUILTIN_SPECS[spec_id]:
        raise ModelFileError(
            f"{path}: spec id {spec_id!r} is built in but the stored scale/features disagree"
        )

    try:
        return PowerLawModel(
            spec=spec,
            a=float(payload["a"]),
            exponents=tuple(float(e) for e in payload["exponents"]),
            fit_seed=payload.get("fit_seed"),
            fit_rmse=payload.get("fit_rmse"),
        )
    except (ValidationError, TypeError, ValueError) as exc:
        raise ModelFileError(f"{path}: {exc}") from exc
