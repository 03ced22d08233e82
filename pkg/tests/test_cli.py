import hashlib
import json

import pytest

from pierscour.cli import main
from pierscour.data import Scale
from pierscour.model import PowerLawModel, builtin_spec, load_model, save_model

from conftest import write_dataset

FAST_OVERRIDES = {"particle_count": 20, "iteration_count": 60}


@pytest.fixture()
def fast_config(tmp_path):
    path = tmp_path / "swarm.json"
    path.write_text(json.dumps(FAST_OVERRIDES))
    return str(path)


@pytest.fixture()
def lab_csv(tmp_path):
    path = tmp_path / "lab.csv"
    write_dataset(path, 60, seed=1, scale=Scale.LABORATORY)
    return str(path)


@pytest.fixture()
def field_csv(tmp_path):
    path = tmp_path / "field.csv"
    write_dataset(path, 60, seed=2, scale=Scale.FIELD)
    return str(path)


def sha(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def tree_hashes(root):
    return {p.name: sha(p) for p in sorted(root.iterdir()) if p.is_file()}


def test_fit_single_spec_writes_five_coefficients(tmp_path, lab_csv, fast_config):
    out = tmp_path / "out"
    code = main([
        "fit", "--scale", "lab", "--spec", "L3", "--data", lab_csv,
        "--config", fast_config, "--seed", "42", "--out", str(out),
    ])
    assert code == 0
    model = load_model(out / "model_L3.json")
    assert model.spec.spec_id == "L3"
    assert len(model.exponents) == 4  # a + 4 exponents = 5 coefficients
    assert model.fit_seed == 42
    assert (out / "report_L3.json").exists()
    assert (out / "trace_L3.csv").exists()
    assert (out / "config.json").exists()


def test_fit_unknown_spec_lists_valid_ids(tmp_path, lab_csv, capsys):
    code = main([
        "fit", "--scale", "lab", "--spec", "L9", "--data", lab_csv,
        "--out", str(tmp_path / "out"),
    ])
    assert code == 1
    err = capsys.readouterr().err
    assert "L1" in err and "F6" in err


def test_fit_spec_scale_mismatch(tmp_path, lab_csv):
    code = main([
        "fit", "--scale", "lab", "--spec", "F2", "--data", lab_csv,
        "--out", str(tmp_path / "out"),
    ])
    assert code == 1


def test_fit_all_field_specs(tmp_path, field_csv, fast_config):
    out = tmp_path / "out"
    code = main([
        "fit", "--scale", "field", "--data", field_csv,
        "--config", fast_config, "--seed", "7", "--out", str(out),
    ])
    assert code == 0
    for sid in ("F1", "F2", "F3", "F4", "F5", "F6"):
        assert (out / f"model_{sid}.json").exists()


def test_sensitivity_empty_csv_fails(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("D_m,V_mps,Vc_mps,y_m,d50_m,sigma,S_m\n")
    code = main([
        "sensitivity", "--scale", "lab", "--data", str(empty),
        "--out", str(tmp_path / "out"),
    ])
    assert code == 2


def test_sensitivity_outputs_and_rerun_determinism(tmp_path, lab_csv, fast_config):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    args = [
        "sensitivity", "--scale", "lab", "--data", lab_csv,
        "--config", fast_config, "--seed", "3", "--split-seed", "5",
    ]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2), "--workers", "4"]) == 0
    for name in ("report.json", "band_table.csv", "scatter.csv", "config.json"):
        assert (out1 / name).exists()
        assert sha(out1 / name) == sha(out2 / name)


def test_baselines_lab_evaluates_six(tmp_path, lab_csv):
    out = tmp_path / "out"
    assert main(["baselines", "--scale", "lab", "--data", lab_csv, "--out", str(out)]) == 0
    lines = (out / "baseline_metrics.csv").read_text().splitlines()
    ids = [line.split(",")[0] for line in lines[1:]]
    assert len(ids) == 6  # pier-length formulas skipped on lab data
    assert "azamathulla_2009" not in ids and "sharafi_2016" not in ids


def test_baselines_field_skips_hancu(tmp_path, field_csv):
    out = tmp_path / "out"
    assert main(["baselines", "--scale", "field", "--data", field_csv, "--out", str(out)]) == 0
    lines = (out / "baseline_metrics.csv").read_text().splitlines()
    ids = [line.split(",")[0] for line in lines[1:]]
    assert "hancu_1971" not in ids
    assert "sharafi_2016" in ids and "azamathulla_2009" in ids


def test_predict_frozen_oracle(tmp_path, capsys):
    model = PowerLawModel(
        spec=builtin_spec("L3"), a=2.235, exponents=(-0.434, 0.587, 0.111, 0.212)
    )
    model_path = tmp_path / "L3.json"
    save_model(model, model_path)
    # inputs chosen so sigma=1.454, D/y=0.704, d50/y=0.007, V/Vc=1.254
    code = main([
        "predict", "--model", str(model_path),
        "--D", "0.1408", "--V", "0.5554", "--y", "0.2", "--d50", "0.0014",
        "--sigma", "1.454", "--Vc", "0.442902711323764",
    ])
    assert code == 0
    out_lines = capsys.readouterr().out.splitlines()
    s_over_y = float(out_lines[0].split("=")[1])
    s_m = float(out_lines[1].split("=")[1])
    assert s_over_y == pytest.approx(0.9351788712506311, rel=1e-12)
    assert s_m == pytest.approx(s_over_y * 0.2, rel=1e-15)


def test_predict_missing_fifth_flag(tmp_path):
    model = PowerLawModel(
        spec=builtin_spec("L3"), a=2.235, exponents=(-0.434, 0.587, 0.111, 0.212)
    )
    model_path = tmp_path / "L3.json"
    save_model(model, model_path)
    code = main([
        "predict", "--model", str(model_path),
        "--D", "0.14", "--V", "0.55", "--y", "0.2", "--d50", "0.0014", "--sigma", "1.45",
    ])
    assert code == 1


def test_split_command(tmp_path, lab_csv):
    train = tmp_path / "train.csv"
    test = tmp_path / "test.csv"
    code = main([
        "split", "--data", lab_csv, "--ratio", "0.7", "--seed", "11",
        "--out-train", str(train), "--out-test", str(test),
    ])
    assert code == 0
    assert len(train.read_text().splitlines()) == 1 + 42  # round(0.7 * 60)
    assert len(test.read_text().splitlines()) == 1 + 18
    assert (tmp_path / "config.json").exists()


def test_commands_do_not_mutate_inputs(tmp_path, lab_csv, fast_config):
    before = sha(lab_csv)
    main(["fit", "--scale", "lab", "--spec", "L6", "--data", lab_csv,
          "--config", fast_config, "--out", str(tmp_path / "a")])
    main(["baselines", "--scale", "lab", "--data", lab_csv, "--out", str(tmp_path / "b")])
    assert sha(lab_csv) == before


def test_fit_rerun_is_byte_identical(tmp_path, lab_csv, fast_config):
    args = [
        "fit", "--scale", "lab", "--spec", "L6", "--data", lab_csv,
        "--config", fast_config, "--seed", "13", "--split-seed", "2",
    ]
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2), "--workers", "8"]) == 0
    h1, h2 = tree_hashes(out1), tree_hashes(out2)
    assert h1 == h2


def test_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("D_m,V_mps,y_m\n0.1,0.5,0.2\n")
    code = main(["baselines", "--scale", "lab", "--data", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2


def test_usage_error_exit_code():
    assert main(["fit", "--scale", "lab"]) == 1  # missing required flags
    assert main(["no-such-command"]) == 1


def test_sensitivity_with_bounds_overrides(tmp_path, lab_csv):
    # bounds overrides must adapt to each spec's coefficient count
    config = tmp_path / "swarm.json"
    config.write_text(json.dumps({
        "particle_count": 15, "iteration_count": 40,
        "a_bounds": [1e-4, 8.0], "exponent_bounds": [-2.0, 2.0],
    }))
    out = tmp_path / "out"
    code = main([
        "sensitivity", "--scale", "lab", "--data", lab_csv,
        "--config", str(config), "--out", str(out),
    ])
    assert code == 0
    echo = json.loads((out / "config.json").read_text())
    assert echo["coefficient_bounds"]["exponent_bounds"] == [-2.0, 2.0]


def test_scour_seed_env_fallback(tmp_path, lab_csv, fast_config, monkeypatch):
    monkeypatch.setenv("SCOUR_SEED", "77")
    out = tmp_path / "out"
    assert main([
        "fit", "--scale", "lab", "--spec", "L6", "--data", lab_csv,
        "--config", fast_config, "--out", str(out),
    ]) == 0
    assert load_model(out / "model_L6.json").fit_seed == 77
    echo = json.loads((out / "config.json").read_text())
    assert echo["fit_seed"] == 77


def test_predict_config_echo(tmp_path, capsys):
    model = PowerLawModel(
        spec=builtin_spec("L3"), a=2.235, exponents=(-0.434, 0.587, 0.111, 0.212)
    )
    model_path = tmp_path / "L3.json"
    save_model(model, model_path)
    out = tmp_path / "echo"
    assert main([
        "predict", "--model", str(model_path),
        "--D", "0.14", "--V", "0.55", "--y", "0.2", "--d50", "0.0014",
        "--sigma", "1.45", "--Vc", "0.44", "--out", str(out),
    ]) == 0
    echo = json.loads((out / "config.json").read_text())
    assert echo["command"] == "predict"
    assert echo["S_m"] == pytest.approx(echo["S_over_y"] * 0.2, rel=1e-15)
