"""Orchestration: sensitivity matrices, model-vs-baseline comparisons, exports.

A sensitivity run fits every requested model specification on one shared
training split, evaluates all of them on the identical testing split, ranks
them by test RMSE, and names the most effective feature: the one whose
excluding specification degrades test RMSE the most among the
single-exclusion specs.  A comparison run puts fitted models and published
baseline equations side by side on the same testing split, including
verbatim cross-scale transfer of a fitted model when (and only when) the
target records carry every feature the model needs.

Exports are plain CSV / JSON with deterministic bytes: rerunning with the
same resolved configuration reproduces every output file exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .baselines import Baseline, evaluate_baseline
from .data import GRAVITY, DatasetSplit, RawScourRecord, Scale, derive_features, split
from .errors import MissingInputError, SensitivityError, ValidationError
from .metrics import MetricReport, Units, compute_metrics
from .model import (
    A_BOUNDS,
    EXPONENT_BOUNDS,
    Feature,
    ModelSpec,
    PowerLawModel,
    builtin_specs_for,
    coefficient_bounds,
    fit,
)
from .swarm import SwarmConfig

__all__ = [
    "EvaluationReport",
    "SensitivityRun",
    "ComparisonResult",
    "run_sensitivity",
    "repeat_sensitivity",
    "run_comparison",
    "emit_report",
    "load_report",
    "emit_scatter_data",
    "emit_band_table",
    "emit_comparison_csv",
    "evaluation_dict",
]

FULL_FEATURE_SETS = {
    Scale.LABORATORY: frozenset(
        {Feature.SIGMA, Feature.FROUDE, Feature.D_OVER_Y, Feature.D50_OVER_Y, Feature.V_OVER_VC}
    ),
    Scale.FIELD: frozenset(
        {Feature.SIGMA, Feature.FROUDE, Feature.D_OVER_Y, Feature.D50_OVER_Y, Feature.L_OVER_Y}
    ),
}


@dataclass(frozen=True)
class EvaluationReport:
    """One model's (or baseline's) performance on a shared split.

    Prediction pairs are kept dimensionless (S/y) for scatter export;
    ``train_metrics``/``test_metrics`` are in the run's configured units.
    ``test_record_ids`` index into the run's input dataset, and
    ``n_skipped`` counts testing records a baseline could not evaluate.
    """

    model_id: str
    model: PowerLawModel | None
    baseline: Baseline | None
    train_metrics: MetricReport | None
    test_metrics: MetricReport
    test_record_ids: tuple
    test_measured_s_over_y: np.ndarray
    test_predicted_s_over_y: np.ndarray
    n_skipped: int = 0
    fit_trace: np.ndarray | None = None


def _metric_pairs(
    raw_records: Sequence[RawScourRecord],
    predicted_s_over_y: np.ndarray,
    units: Units,
) -> tuple[np.ndarray, np.ndarray]:
    """Measured/predicted arrays in the requested units."""
    if units is Units.METERS:
        measured = np.array([r.S for r in raw_records])
        depth = np.array([r.y for r in raw_records])
        return measured, predicted_s_over_y * depth
    measured = np.array([r.S / r.y for r in raw_records])
    return measured, np.asarray(predicted_s_over_y, dtype=float)


def _evaluate_fitted(
    model: PowerLawModel,
    raw_train: Sequence[RawScourRecord],
    raw_test: Sequence[RawScourRecord],
    test_ids: Sequence[int],
    units: Units,
    g: float,
    fit_trace: np.ndarray | None,
) -> EvaluationReport:
    dim_train = [derive_features(r, g) for r in raw_train]
    dim_test = [derive_features(r, g) for r in raw_test]
    train_pred = model.predict_many(dim_train, allow_cross_scale=True)
    test_pred = model.predict_many(dim_test, allow_cross_scale=True)
    train_metrics = compute_metrics(*_metric_pairs(raw_train, train_pred, units), units=units)
    test_metrics = compute_metrics(*_metric_pairs(raw_test, test_pred, units), units=units)
    return EvaluationReport(
        model_id=model.spec.spec_id,
        model=model,
        baseline=None,
        train_metrics=train_metrics,
        test_metrics=test_metrics,
        test_record_ids=tuple(int(i) for i in test_ids),
        test_measured_s_over_y=np.array([r.s_over_y for r in dim_test]),
        test_predicted_s_over_y=test_pred,
        fit_trace=fit_trace,
    )


@dataclass(frozen=True)
class SensitivityRun:
    """Outcome of a feature-exclusion sensitivity matrix."""

    scale: Scale
    spec_ids: tuple
    split: DatasetSplit
    reports: dict
    failures: dict
    ranking: tuple
    most_effective_feature: Feature | None
    units: Units
    config: dict


def _config_echo(
    scale: Scale,
    spec_ids: Sequence[str],
    config: SwarmConfig,
    a_bounds: tuple,
    exponent_bounds: tuple,
    ratio: float,
    split_seed: int,
    units: Units,
    g: float,
) -> dict:
    return {
        "scale": scale.value,
        "spec_ids": list(spec_ids),
        "swarm": {
            "particle_count": config.particle_count,
            "iteration_count": config.iteration_count,
            "inertia_weight": config.inertia_weight,
            "cognitive_coeff": config.cognitive_coeff,
            "social_coeff": config.social_coeff,
            "velocity_cap_fraction": config.velocity_cap_fraction,
            "seed": config.seed,
        },
        "coefficient_bounds": {
            "a_bounds": list(a_bounds),
            "exponent_bounds": list(exponent_bounds),
        },
        "split": {"ratio": ratio, "seed": split_seed},
        "units": units.value,
        "gravity": g,
    }


def run_sensitivity(
    records: Sequence[RawScourRecord],
    scale: Scale,
    *,
    config: SwarmConfig | None = None,
    split_seed: int = 0,
    ratio: float = 0.7,
    specs: Sequence[ModelSpec] | None = None,
    a_bounds: tuple = A_BOUNDS,
    exponent_bounds: tuple = EXPONENT_BOUNDS,
    units: Units = Units.METERS,
    g: float = GRAVITY,
    workers: int = 1,
) -> SensitivityRun:
    """Fit every spec on one shared split and rank them on the test side.

    Individual spec failures are collected and the run continues; the run
    itself fails only when every spec fails.  A spec whose testing metrics
    are undefined (zero variance in the measured values, as happens on a
    degenerate dataset of identical records) counts as failed.
    """
    records = list(records)
    if len(records) < 10:
        raise ValidationError(f"sensitivity analysis needs at least 10 records, got {len(records)}")
    if any(r.scale is not scale for r in records):
        raise ValidationError(f"all records must be {scale.value}-scale for this run")
    if config is None:
        config = SwarmConfig()
    if specs is None:
        specs = builtin_specs_for(scale)
    else:
        specs = list(specs)
        for spec in specs:
            if spec.scale is not scale:
                raise ValidationError(
                    f"spec {spec.spec_id!r} is {spec.scale.value}-scale, run is {scale.value}"
                )

    parts = split(records, ratio, split_seed)
    dim_train = [derive_features(r, g) for r in parts.training]

    reports: dict[str, EvaluationReport] = {}
    failures: dict[str, str] = {}
    for spec in specs:
        try:
            bounds = coefficient_bounds(spec, a_bounds, exponent_bounds)
            model, result = fit(spec, dim_train, config, bounds, workers=workers)
            report = _evaluate_fitted(
                model,
                parts.training,
                parts.testing,
                parts.testing_indices,
                units,
                g,
                fit_trace=result.best_value_trace,
            )
            if report.test_metrics.r2 is None:
                raise ValidationError(
                    "degenerate evaluation: measured testing values have zero variance"
                )
        except Exception as exc:  # collected per spec, re-raised only if all fail
            failures[spec.spec_id] = f"{type(exc).__name__}: {exc}"
            continue
        reports[spec.spec_id] = report

    if not reports:
        detail = "; ".join(f"{sid}: {msg}" for sid, msg in failures.items())
        raise SensitivityError(f"every spec failed to fit/evaluate: {detail}")

    ranking = tuple(
        sorted(reports, key=lambda sid: (reports[sid].test_metrics.rmse, sid))
    )
    return SensitivityRun(
        scale=scale,
        spec_ids=tuple(s.spec_id for s in specs),
        split=parts,
        reports=reports,
        failures=failures,
        ranking=ranking,
        most_effective_feature=_most_effective_feature(scale, reports),
        units=units,
        config=_config_echo(
            scale,
            [s.spec_id for s in specs],
            config,
            a_bounds,
            exponent_bounds,
            ratio,
            split_seed,
            units,
            g,
        ),
    )


def _most_effective_feature(scale: Scale, reports: dict) -> Feature | None:
    """Excluded feature of the worst single-exclusion spec, by test RMSE.

    Undefined (None) when no evaluated spec excludes exactly one feature
    of the scale's full set, e.g. for custom spec lists.
    """
    full = FULL_FEATURE_SETS[scale]
    candidates = []
    for report in reports.values():
        if report.model is None:
            continue
        used = frozenset(report.model.spec.features)
        excluded = full - used
        if len(excluded) == 1 and used <= full:
            candidates.append((report.test_metrics.rmse, next(iter(excluded))))
    if not candidates:
        return None
    return max(candidates, key=lambda pair: pair[0])[1]


def repeat_sensitivity(
    records: Sequence[RawScourRecord],
    scale: Scale,
    split_seeds: Sequence[int],
    **kwargs,
) -> list[SensitivityRun]:
    """Robustness helper: one sensitivity run per split seed."""
    return [run_sensitivity(records, scale, split_seed=s, **kwargs) for s in split_seeds]


@dataclass(frozen=True)
class ComparisonResult:
    """Fitted models and baselines side by side on one testing split."""

    rows: tuple  # EvaluationReport, models first, then baselines
    split: DatasetSplit
    units: Units
    notes: tuple


def run_comparison(
    parts: DatasetSplit,
    models: Sequence[PowerLawModel],
    baselines: Sequence[Baseline],
    *,
    units: Units = Units.METERS,
    g: float = GRAVITY,
    hancu_squared: bool = False,
) -> ComparisonResult:
    """Evaluate models and baselines on the split's testing records.

    The split must be the one the models were trained on (or a split of a
    different dataset for cross-scale transfer).  A fitted model is only
    evaluated if every testing record carries all of its features; there
    is no silent substitution.  Baselines skip records lacking inputs and
    the skip count is noted.
    """
    raw_test = list(parts.testing)
    if not raw_test:
        raise ValidationError("the testing split is empty")
    test_ids = tuple(int(i) for i in parts.testing_indices)
    rows: list[EvaluationReport] = []
    notes: list[str] = []

    for model in models:
        rows.append(
            _evaluate_fitted(model, parts.training, raw_test, test_ids, units, g, None)
        )

    dim_test = [derive_features(r, g) for r in raw_test]
    for baseline in baselines:
        predictions = np.full(len(raw_test), np.nan)
        for i, record in enumerate(raw_test):
            try:
                predictions[i] = evaluate_baseline(
                    baseline, record, g=g, hancu_squared=hancu_squared
                )
            except MissingInputError:
                continue
        used = np.isfinite(predictions)
        n_skipped = int((~used).sum())
        if not used.any():
            notes.append(f"{baseline.value}: skipped all records (missing inputs)")
            continue
        if n_skipped:
            notes.append(f"{baseline.value}: skipped {n_skipped} record(s) missing inputs")
        used_raw = [r for r, u in zip(raw_test, used) if u]
        measured, estimated = _metric_pairs(used_raw, predictions[used], units)
        rows.append(
            EvaluationReport(
                model_id=baseline.value,
                model=None,
                baseline=baseline,
                train_metrics=None,
                test_metrics=compute_metrics(measured, estimated, units=units),
                test_record_ids=tuple(i for i, u in zip(test_ids, used) if u),
                test_measured_s_over_y=np.array([r.s_over_y for r, u in zip(dim_test, used) if u]),
                test_predicted_s_over_y=predictions[used],
                n_skipped=n_skipped,
            )
        )

    # shared-split fairness: fitted models must see the identical test set
    for row in rows:
        if row.model is not None and row.test_record_ids != test_ids:
            raise SensitivityError(
                f"model {row.model_id} was not evaluated on the shared testing set"
            )
    return ComparisonResult(rows=tuple(rows), split=parts, units=units, notes=tuple(notes))


def _metric_dict(report: MetricReport | None) -> dict | None:
    return None if report is None else report.as_dict()


def evaluation_dict(report: EvaluationReport) -> dict:
    payload = {
        "model_id": report.model_id,
        "kind": "baseline" if report.baseline is not None else "fitted",
        "train_metrics": _metric_dict(report.train_metrics),
        "test_metrics": _metric_dict(report.test_metrics),
        "n_skipped": report.n_skipped,
    }
    if report.model is not None:
        payload["coefficients"] = {
            "a": report.model.a,
            "exponents": list(report.model.exponents),
            "features": [f.value for f in report.model.spec.features],
            "fit_seed": report.model.fit_seed,
            "fit_rmse": report.model.fit_rmse,
        }
    return payload


def emit_report(run: SensitivityRun, path) -> None:
    """Write a sensitivity run as structured JSON text."""
    payload = {
        "kind": "sensitivity",
        "config": run.config,
        "split": {
            "seed": run.split.split_seed,
            "ratio": run.split.ratio,
            "n_training": len(run.split.training),
            "n_testing": len(run.split.testing),
            "training_indices": list(run.split.training_indices),
            "testing_indices": list(run.split.testing_indices),
        },
        "ranking": list(run.ranking),
        "most_effective_feature": (
            None if run.most_effective_feature is None else run.most_effective_feature.value
        ),
        "models": {sid: evaluation_dict(run.reports[sid]) for sid in run.spec_ids if sid in run.reports},
        "failures": dict(sorted(run.failures.items())),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def emit_scatter_data(run: SensitivityRun, path) -> None:
    """Per-record scatter pairs: ``record_id,measured_S_over_y,predicted_S_over_y,model_id``."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["record_id", "measured_S_over_y", "predicted_S_over_y", "model_id"])
        for sid in run.spec_ids:
            report = run.reports.get(sid)
            if report is None:
                continue
            for rid, measured, predicted in zip(
                report.test_record_ids,
                report.test_measured_s_over_y,
                report.test_predicted_s_over_y,
            ):
                writer.writerow([rid, repr(float(measured)), repr(float(predicted)), sid])


def emit_band_table(run: SensitivityRun, path) -> None:
    """Uncertainty-band widths per model: ``model_id,band_m``."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["model_id", "band_m"])
        for sid in run.spec_ids:
            report = run.reports.get(sid)
            if report is None:
                continue
            band = report.test_metrics.band
            writer.writerow([sid, "" if band is None else repr(float(band))])


def emit_comparison_csv(comparison: ComparisonResult, path) -> None:
    """Comparison table in the shared metric-row CSV schema."""
    from .metrics import write_metric_rows

    write_metric_rows(path, [(row.model_id, row.test_metrics) for row in comparison.rows])
