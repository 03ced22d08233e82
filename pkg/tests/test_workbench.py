import json

import numpy as np
import pytest

from pierscour.baselines import Baseline
from pierscour.data import RawScourRecord, Scale, split
from pierscour.errors import CrossScaleError, SensitivityError, ValidationError
from pierscour.metrics import Units
from pierscour.model import Feature, PowerLawModel, builtin_spec
from pierscour.swarm import SwarmConfig
from pierscour.workbench import (
    emit_band_table,
    emit_report,
    emit_scatter_data,
    load_report,
    run_comparison,
    run_sensitivity,
)

from conftest import make_raw_records

FAST = SwarmConfig(particle_count=25, iteration_count=120, seed=5)

# generator with a dominant pier-width exponent: excluding D/y must hurt most
WIDTH_DOMINANT = PowerLawModel(
    spec=builtin_spec("L1"), a=1.1, exponents=(-0.1, 0.12, 1.4, -0.08, -0.1)
)


@pytest.fixture(scope="module")
def width_run():
    records = make_raw_records(160, seed=100, generator=WIDTH_DOMINANT)
    return run_sensitivity(records, Scale.LABORATORY, config=FAST, split_seed=3)


def test_width_exclusion_ranks_worst(width_run):
    assert width_run.ranking[-1] == "L4"  # the D/y-excluding spec collapses
    assert width_run.most_effective_feature is Feature.D_OVER_Y
    worst = width_run.reports["L4"].test_metrics
    others = [width_run.reports[sid].test_metrics for sid in width_run.ranking[:-1]]
    assert all(worst.rmse > m.rmse for m in others)
    assert all(worst.r2 < m.r2 for m in others)


def test_ranking_is_permutation_of_specs(width_run):
    assert sorted(width_run.ranking) == sorted(width_run.reports)
    assert set(width_run.ranking) <= set(width_run.spec_ids)


def test_shared_split_fairness(width_run):
    expected = width_run.split.testing_indices
    for report in width_run.reports.values():
        assert report.test_record_ids == expected


def test_ranking_reproducible():
    records = make_raw_records(120, seed=101, generator=WIDTH_DOMINANT)
    first = run_sensitivity(records, Scale.LABORATORY, config=FAST, split_seed=7)
    second = run_sensitivity(records, Scale.LABORATORY, config=FAST, split_seed=7)
    assert first.ranking == second.ranking
    for sid in first.reports:
        assert first.reports[sid].model == second.reports[sid].model


def test_identical_records_fail_every_spec():
    record = RawScourRecord(
        D=0.107, V=0.512, y=0.269, d50=0.00118, Vc=0.443, sigma=1.454, S=0.1357,
        scale=Scale.LABORATORY,
    )
    with pytest.raises(SensitivityError, match="every spec failed"):
        run_sensitivity([record] * 20, Scale.LABORATORY, config=FAST, split_seed=1)


def test_single_spec_run_has_no_effective_feature():
    records = make_raw_records(80, seed=102, generator=WIDTH_DOMINANT)
    run = run_sensitivity(
        records,
        Scale.LABORATORY,
        config=FAST,
        split_seed=2,
        specs=[builtin_spec("L1")],
    )
    assert run.ranking == ("L1",)
    assert run.most_effective_feature is None


def test_sensitivity_input_validation():
    records = make_raw_records(5, seed=103)
    with pytest.raises(ValidationError, match="at least 10"):
        run_sensitivity(records, Scale.LABORATORY, config=FAST)
    lab = make_raw_records(20, seed=104)
    with pytest.raises(ValidationError, match="field"):
        run_sensitivity(lab, Scale.FIELD, config=FAST)


def test_comparison_fitted_model_beats_published_baselines():
    records = make_raw_records(150, seed=105, generator=WIDTH_DOMINANT)
    parts = split(records, 0.7, seed=4)
    run = run_sensitivity(records, Scale.LABORATORY, config=FAST, split_seed=4)
    best = run.reports[run.ranking[0]].model
    comparison = run_comparison(
        parts,
        [best],
        [Baseline.LAURSEN_TOCH_1956, Baseline.SHEN_1969, Baseline.HEC18],
    )
    rows = {row.model_id: row.test_metrics.rmse for row in comparison.rows}
    fitted_rmse = rows.pop(best.spec.spec_id)
    assert all(fitted_rmse < rmse for rmse in rows.values())


def test_comparison_without_baselines():
    records = make_raw_records(60, seed=106, generator=WIDTH_DOMINANT)
    parts = split(records, 0.7, seed=1)
    model = WIDTH_DOMINANT
    comparison = run_comparison(parts, [model], [])
    assert [row.model_id for row in comparison.rows] == ["L1"]
    assert comparison.rows[0].test_metrics.rmse == pytest.approx(0.0, abs=1e-12)


def test_comparison_skips_inapplicable_baselines_with_note():
    records = make_raw_records(40, seed=107)
    parts = split(records, 0.7, seed=1)
    comparison = run_comparison(parts, [], [Baseline.SHARAFI_2016, Baseline.HEC18])
    ids = [row.model_id for row in comparison.rows]
    assert "sharafi_2016" not in ids and "hec18" in ids
    assert any("sharafi_2016" in note for note in comparison.notes)


def test_cross_scale_transfer_guard():
    field_records = make_raw_records(60, seed=108, scale=Scale.FIELD)
    parts = split(field_records, 0.7, seed=2)
    # a lab model without V/Vc transfers verbatim to field records
    transferable = PowerLawModel(
        spec=builtin_spec("L6"), a=1.874, exponents=(-0.421, 0.226, 0.595, 0.029)
    )
    comparison = run_comparison(parts, [transferable], [Baseline.HEC18])
    assert {row.model_id for row in comparison.rows} == {"L6", "hec18"}
    # a lab model needing V/Vc is refused outright, never silently patched
    blocked = PowerLawModel(spec=builtin_spec("L1"), a=1.0, exponents=(0.1,) * 5)
    with pytest.raises(CrossScaleError, match="V/Vc"):
        run_comparison(parts, [blocked], [])


def test_metrics_units_selectable():
    records = make_raw_records(60, seed=109, generator=WIDTH_DOMINANT)
    parts = split(records, 0.7, seed=1)
    meters = run_comparison(parts, [WIDTH_DOMINANT], [], units=Units.METERS)
    ratio = run_comparison(parts, [WIDTH_DOMINANT], [], units=Units.DIMENSIONLESS)
    assert meters.rows[0].test_metrics.units is Units.METERS
    assert ratio.rows[0].test_metrics.units is Units.DIMENSIONLESS


def test_emit_report_round_trip(tmp_path, width_run):
    first = tmp_path / "report.json"
    second = tmp_path / "again.json"
    emit_report(width_run, first)
    payload = load_report(first)
    assert payload["ranking"] == list(width_run.ranking)
    assert payload["most_effective_feature"] == "D/y"
    assert set(payload["models"]) == set(width_run.reports)
    emit_report(width_run, second)
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text()) == payload


def test_scatter_row_count(tmp_path, width_run):
    path = tmp_path / "scatter.csv"
    emit_scatter_data(width_run, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "record_id,measured_S_over_y,predicted_S_over_y,model_id"
    expected = len(width_run.split.testing) * len(width_run.reports)
    assert len(lines) - 1 == expected


def test_band_table_shows_exclusion_penalty(tmp_path, width_run):
    path = tmp_path / "bands.csv"
    emit_band_table(width_run, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "model_id,band_m"
    bands = {line.split(",")[0]: float(line.split(",")[1]) for line in lines[1:]}
    worst = bands.pop("L4")
    assert worst > max(bands.values())  # dropping the dominant feature blows up the band
