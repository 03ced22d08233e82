"""Published scour equations vs a freshly fitted model, side by side.

Evaluates the eight published pier-scour equations on synthetic field
data (the laboratory-only Hancu formula is skipped automatically because
field records carry no critical velocity), then fits the field model
matrix on a 70/30 split and compares the best fitted equation against
the applicable baselines on the shared testing split.

Run: python demos/04_baselines_and_comparison.py
"""

from pierscour.baselines import Baseline, run_baseline_suite
from pierscour.data import Scale, split
from pierscour.model import PowerLawModel, builtin_spec
from pierscour.swarm import SwarmConfig
from pierscour.workbench import run_comparison, run_sensitivity
from synthetic import make_records

GENERATOR = PowerLawModel(
    spec=builtin_spec("F2"),
    a=0.1,
    exponents=(0.154, 0.219, -0.145, 0.308),
)

records = make_records(280, seed=11, scale=Scale.FIELD, generator=GENERATOR)

print("=" * 66)
print("1. Baseline applicability on field records")
print("=" * 66)
suite = run_baseline_suite(list(Baseline), records)
for baseline in suite.baselines:
    skipped = suite.skipped[baseline]
    status = "skipped (missing inputs)" if skipped == len(records) else f"{len(records)-skipped} predictions"
    print(f"{baseline.value:>24}: {status}")

print()
print("=" * 66)
print("2. Fit the field matrix, then compare on the shared testing split")
print("=" * 66)
config = SwarmConfig(particle_count=40, iteration_count=300, seed=2)
run = run_sensitivity(records, Scale.FIELD, config=config, split_seed=5)
best = run.reports[run.ranking[0]].model
print(f"best fitted spec: {best.spec.spec_id} (a={best.a:.4f})")

comparison = run_comparison(
    split(records, 0.7, 5),
    [best],
    [
        Baseline.LAURSEN_TOCH_1956,
        Baseline.SHEN_1969,
        Baseline.JOHNSON_1992,
        Baseline.RICHARDSON_DAVIS_2001,
        Baseline.HEC18,
        Baseline.AZAMATHULLA_2009,
        Baseline.SHARAFI_2016,
    ],
)
print(f"{'model':>24} {'R2':>8} {'RMSE [m]':>10} {'bias [m]':>10} {'MAE [m]':>9} {'band [m]':>9}")
for row in sorted(comparison.rows, key=lambda r: r.test_metrics.rmse):
    m = row.test_metrics
    print(
        f"{row.model_id:>24} {m.r2:>8.3f} {m.rmse:>10.4f} {m.bias:>10.4f} {m.mae:>9.4f} {m.band:>9.4f}"
    )
for note in comparison.notes:
    print("note:", note)
print()
print("the fitted equation sits on top: the baselines were calibrated on")
print("other datasets, so their coefficients cannot match a planted law.")
