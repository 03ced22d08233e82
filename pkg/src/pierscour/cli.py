"""Command-line entry point.

Subcommands: ``fit`` (calibrate power-law models on a 70/30 split),
``sensitivity`` (feature-exclusion matrix with ranking and band table),
``baselines`` (published equations on a dataset), ``predict`` (one-record
prediction from a saved model file), and ``split`` (write train/test CSVs).

Every command materializes its full configuration, seeds included, and
echoes it as ``config.json`` next to its outputs; replaying the same
resolved configuration reproduces every output byte for byte, regardless
of ``--workers``.  Exit codes: 0 success, 1 usage, 2 data validation,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .baselines import Baseline, run_baseline_suite
from .data import RawScourRecord, Scale, derive_features, load_csv, sniff_scale, split, write_csv
from .errors import (
    ConfigurationError,
    CrossScaleError,
    DegenerateObjectiveError,
    MissingInputError,
    ModelFileError,
    PierScourError,
    SchemaError,
    SensitivityError,
    ValidationError,
)
from .metrics import Units, compute_metrics, write_metric_rows
from .model import (
    A_BOUNDS,
    EXPONENT_BOUNDS,
    builtin_spec,
    builtin_specs_for,
    coefficient_bounds,
    fit,
    load_model,
    save_model,
)
from .swarm import SwarmConfig, write_trace_csv
from .workbench import (
    emit_band_table,
    emit_report,
    emit_scatter_data,
    evaluation_dict,
    run_comparison,
    run_sensitivity,
)

USAGE_EXIT = 1
DATA_EXIT = 2
NUMERICAL_EXIT = 3

_SCALES = {"lab": Scale.LABORATORY, "field": Scale.FIELD}
_UNITS = {"m": Units.METERS, "dimensionless": Units.DIMENSIONLESS}

_CONFIG_KEYS = {
    "particle_count",
    "iteration_count",
    "inertia_weight",
    "cognitive_coeff",
    "social_coeff",
    "velocity_cap_fraction",
    "a_bounds",
    "exponent_bounds",
}


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _fallback_seed() -> int:
    raw = os.environ.get("SCOUR_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"SCOUR_SEED must be an integer, got {raw!r}") from None


def _load_overrides(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            overrides = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: malformed config file: {exc}") from exc
    unknown = set(overrides) - _CONFIG_KEYS
    if unknown:
        raise ConfigurationError(
            f"{path}: unknown config key(s) {sorted(unknown)}; valid: {sorted(_CONFIG_KEYS)}"
        )
    return overrides


def _swarm_config(overrides: dict, seed: int) -> SwarmConfig:
    kwargs = {k: v for k, v in overrides.items() if k not in ("a_bounds", "exponent_bounds")}
    return SwarmConfig(seed=seed, **kwargs)


def _bounds_for(spec, overrides: dict):
    return coefficient_bounds(
        spec,
        tuple(overrides.get("a_bounds", A_BOUNDS)),
        tuple(overrides.get("exponent_bounds", EXPONENT_BOUNDS)),
    )


def _echo_config(out_dir: Path, payload: dict) -> None:
    with open(out_dir / "config.json", "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _base_echo(args, command: str, scale: Scale, overrides: dict, fit_seed: int) -> dict:
    config = _swarm_config(overrides, fit_seed)
    return {
        "command": command,
        "scale": scale.value,
        "data": str(args.data),
        "units": args.units,
        "strict": bool(getattr(args, "strict", False)),
        "split": {"ratio": args.ratio, "seed": args.split_seed},
        "fit_seed": fit_seed,
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
            "a_bounds": list(overrides.get("a_bounds", A_BOUNDS)),
            "exponent_bounds": list(overrides.get("exponent_bounds", EXPONENT_BOUNDS)),
        },
    }


def _load_records(args, scale: Scale):
    result = load_csv(args.data, scale, strict=getattr(args, "strict", False))
    if result.n_rejected:
        for line_no, reason in result.rejected:
            print(f"rejected line {line_no}: {reason}", file=sys.stderr)
    if not result.records:
        raise ValidationError(f"{args.data}: no valid records")
    return list(result.records)


def _cmd_fit(args) -> int:
    scale = _SCALES[args.scale]
    overrides = _load_overrides(args.config)
    fit_seed = args.seed if args.seed is not None else _fallback_seed()
    if args.spec == "all":
        specs = builtin_specs_for(scale)
    else:
        spec = builtin_spec(args.spec)
        if spec.scale is not scale:
            raise ConfigurationError(
                f"spec {args.spec} is {spec.scale.value}-scale but --scale {args.scale} was given"
            )
        specs = [spec]

    records = _load_records(args, scale)
    parts = split(records, args.ratio, args.split_seed)
    config = _swarm_config(overrides, fit_seed)
    units = _UNITS[args.units]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo = _base_echo(args, "fit", scale, overrides, fit_seed)
    echo["spec_ids"] = [s.spec_id for s in specs]
    _echo_config(out_dir, echo)

    dim_train = [derive_features(r) for r in parts.training]
    for spec in specs:
        model, result = fit(
            spec, dim_train, config, _bounds_for(spec, overrides), workers=args.workers
        )
        comparison = run_comparison(parts, [model], [], units=units)
        report = comparison.rows[0]
        save_model(model, out_dir / f"model_{spec.spec_id}.json")
        write_trace_csv(result.best_value_trace, out_dir / f"trace_{spec.spec_id}.csv")
        payload = {
            "kind": "fit",
            "config": echo,
            "split": {
                "seed": parts.split_seed,
                "ratio": parts.ratio,
                "n_training": len(parts.training),
                "n_testing": len(parts.testing),
            },
            "model": evaluation_dict(report),
        }
        with open(out_dir / f"report_{spec.spec_id}.json", "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        print(
            f"{spec.spec_id}: a={model.a:.6g} "
            f"train_rmse={report.train_metrics.rmse:.6g} test_rmse={report.test_metrics.rmse:.6g}"
        )
    return 0


def _cmd_sensitivity(args) -> int:
    scale = _SCALES[args.scale]
    overrides = _load_overrides(args.config)
    fit_seed = args.seed if args.seed is not None else _fallback_seed()
    records = _load_records(args, scale)
    config = _swarm_config(overrides, fit_seed)

    run = run_sensitivity(
        records,
        scale,
        config=config,
        split_seed=args.split_seed,
        ratio=args.ratio,
        a_bounds=tuple(overrides.get("a_bounds", A_BOUNDS)),
        exponent_bounds=tuple(overrides.get("exponent_bounds", EXPONENT_BOUNDS)),
        units=_UNITS[args.units],
        workers=args.workers,
    )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _echo_config(out_dir, _base_echo(args, "sensitivity", scale, overrides, fit_seed))
    emit_report(run, out_dir / "report.json")
    emit_band_table(run, out_dir / "band_table.csv")
    emit_scatter_data(run, out_dir / "scatter.csv")

    print("ranking (best test RMSE first):", ", ".join(run.ranking))
    feature = run.most_effective_feature
    print("most effective feature:", "undefined" if feature is None else feature.value)
    for sid, reason in sorted(run.failures.items()):
        print(f"failed: {sid}: {reason}", file=sys.stderr)
    return 0


def _cmd_baselines(args) -> int:
    scale = _SCALES[args.scale]
    records = _load_records(args, scale)
    suite = run_baseline_suite(
        list(Baseline), records, hancu_squared=args.hancu_squared
    )
    units = _UNITS[args.units]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo = {
        "command": "baselines",
        "scale": scale.value,
        "data": str(args.data),
        "units": args.units,
        "strict": bool(args.strict),
        "hancu_squared": bool(args.hancu_squared),
    }
    _echo_config(out_dir, echo)

    rows = []
    with open(out_dir / "baseline_predictions.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["record_id", "measured_S_over_y", "predicted_S_over_y", "model_id"])
        for baseline in suite.baselines:
            predictions = suite.predictions[baseline]
            used = [i for i in range(len(records)) if np.isfinite(predictions[i])]
            if not used:
                print(f"{baseline.value}: skipped (no applicable records)")
                continue
            for i in used:
                writer.writerow(
                    [
                        i,
                        repr(records[i].S / records[i].y),
                        repr(float(predictions[i])),
                        baseline.value,
                    ]
                )
            if units is Units.METERS:
                measured = [records[i].S for i in used]
                estimated = [float(predictions[i]) * records[i].y for i in used]
            else:
                measured = [records[i].S / records[i].y for i in used]
                estimated = [float(predictions[i]) for i in used]
            rows.append((baseline.value, compute_metrics(measured, estimated, units=units)))
            print(f"{baseline.value}: evaluated {len(used)}/{len(records)} records")
    write_metric_rows(out_dir / "baseline_metrics.csv", rows)
    if suite.hancu_clamped:
        print(f"hancu_1971: clamped {suite.hancu_clamped} clear-water prediction(s) to 0")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    scale = model.spec.scale
    if scale is Scale.LABORATORY and args.Vc is None:
        raise ConfigurationError("laboratory-scale model: --Vc is required")
    if scale is Scale.FIELD and args.L is None:
        raise ConfigurationError("field-scale model: --L is required")
    record = RawScourRecord(
        D=args.D,
        V=args.V,
        y=args.y,
        d50=args.d50,
        sigma=args.sigma,
        S=0.0,  # unknown; prediction input only
        scale=scale,
        Vc=args.Vc if scale is Scale.LABORATORY else None,
        L=args.L if scale is Scale.FIELD else None,
    )
    s_over_y = model.predict(derive_features(record))
    print(f"S/y = {s_over_y!r}")
    print(f"S_m = {s_over_y * args.y!r}")
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _echo_config(
            out_dir,
            {
                "command": "predict",
                "model": str(args.model),
                "inputs": {
                    "D": args.D,
                    "V": args.V,
                    "y": args.y,
                    "d50": args.d50,
                    "sigma": args.sigma,
                    "Vc": args.Vc,
                    "L": args.L,
                },
                "S_over_y": s_over_y,
                "S_m": s_over_y * args.y,
            },
        )
    return 0


def _cmd_split(args) -> int:
    scale = sniff_scale(args.data)
    result = load_csv(args.data, scale, strict=False)
    if result.n_rejected:
        for line_no, reason in result.rejected:
            print(f"rejected line {line_no}: {reason}", file=sys.stderr)
    parts = split(list(result.records), args.ratio, args.seed)
    write_csv(parts.training, args.out_train)
    write_csv(parts.testing, args.out_test)
    out_dir = Path(args.out_train).resolve().parent
    _echo_config(
        out_dir,
        {
            "command": "split",
            "data": str(args.data),
            "scale": scale.value,
            "ratio": args.ratio,
            "seed": args.seed,
            "n_training": len(parts.training),
            "n_testing": len(parts.testing),
        },
    )
    print(f"training: {len(parts.training)} records -> {args.out_train}")
    print(f"testing:  {len(parts.testing)} records -> {args.out_test}")
    return 0


def _add_common(sub, *, data=True, out=True, seeds=True):
    if data:
        sub.add_argument("--data", required=True, help="input CSV path")
    if out:
        sub.add_argument("--out", required=True, help="output directory")
    if seeds:
        sub.add_argument("--seed", type=int, default=None, help="fit seed (default: $SCOUR_SEED or 0)")
        sub.add_argument("--split-seed", type=int, default=0, help="train/test shuffle seed")
        sub.add_argument("--ratio", type=float, default=0.7, help="training fraction")
    sub.add_argument("--workers", type=int, default=1, help="evaluation threads (never changes results)")
    sub.add_argument("--units", choices=sorted(_UNITS), default="m", help="metric reporting units")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pierscour", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fit = commands.add_parser("fit", help="fit power-law model(s) on a train/test split")
    p_fit.add_argument("--scale", choices=sorted(_SCALES), required=True)
    p_fit.add_argument("--spec", default="all", help="model spec id (L1..L6, F1..F6) or 'all'")
    p_fit.add_argument("--config", default=None, help="JSON file with swarm/bounds overrides")
    p_fit.add_argument("--strict", action="store_true", help="reject files with any bad row")
    _add_common(p_fit)
    p_fit.set_defaults(func=_cmd_fit)

    p_sens = commands.add_parser("sensitivity", help="run the feature-exclusion matrix")
    p_sens.add_argument("--scale", choices=sorted(_SCALES), required=True)
    p_sens.add_argument("--config", default=None, help="JSON file with swarm/bounds overrides")
    p_sens.add_argument("--strict", action="store_true")
    _add_common(p_sens)
    p_sens.set_defaults(func=_cmd_sensitivity)

    p_base = commands.add_parser("baselines", help="evaluate published equations on a dataset")
    p_base.add_argument("--scale", choices=sorted(_SCALES), required=True)
    p_base.add_argument("--hancu-squared", action="store_true", help="use Vc^2/(gD) in Hancu")
    p_base.add_argument("--strict", action="store_true")
    _add_common(p_base, seeds=False)
    p_base.set_defaults(func=_cmd_baselines)

    p_pred = commands.add_parser("predict", help="predict scour depth for one pier from a model file")
    p_pred.add_argument("--model", required=True, help="model JSON file")
    p_pred.add_argument("--D", type=float, required=True, help="pier width [m]")
    p_pred.add_argument("--V", type=float, required=True, help="mean velocity [m/s]")
    p_pred.add_argument("--y", type=float, required=True, help="flow depth [m]")
    p_pred.add_argument("--d50", type=float, required=True, help="median grain size [m]")
    p_pred.add_argument("--sigma", type=float, required=True, help="sediment gradation [-]")
    p_pred.add_argument("--Vc", type=float, default=None, help="critical velocity [m/s] (lab models)")
    p_pred.add_argument("--L", type=float, default=None, help="pier length [m] (field models)")
    p_pred.add_argument("--out", default=None, help="optional directory for the config echo")
    p_pred.set_defaults(func=_cmd_predict)

    p_split = commands.add_parser("split", help="write seeded train/test CSVs")
    p_split.add_argument("--data", required=True, help="input CSV path (scale inferred from header)")
    p_split.add_argument("--ratio", type=float, default=0.7)
    p_split.add_argument("--seed", type=int, default=0)
    p_split.add_argument("--out-train", required=True)
    p_split.add_argument("--out-test", required=True)
    p_split.set_defaults(func=_cmd_split)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (SchemaError, ValidationError, ModelFileError, MissingInputError, CrossScaleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except (DegenerateObjectiveError, SensitivityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except PierScourError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
