import json

import pytest

from eegfc.cli import main, parse_thresholds


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    assert main(["synth", "--preset", "high-separation", "--epochs-per-group", "10", "--samples", "200",
                 "--stimuli", "A,V", "--seed", "7", "--out", str(d)]) == 0
    return d


def test_parse_thresholds():
    assert parse_thresholds("0.5:0.95:0.05") == [0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]
    assert parse_thresholds("0.5:0.62:0.05") == [0.5, 0.55, 0.6]
    assert parse_thresholds("0.6,0.8") == [0.6, 0.8]
    with pytest.raises(ValueError):
        parse_thresholds("0.5:0.9")


def test_synth_counts(tmp_path):
    out = tmp_path / "d"
    assert main(["synth", "--preset", "high-separation", "--epochs-per-group", "100", "--seed", "7",
                 "--samples", "16", "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["epochs"]) == 300
    assert len(list((out / "epochs").iterdir())) == 300
    assert (out / "run.json").exists()


def test_classify_report(dataset, tmp_path):
    out = tmp_path / "r"
    code = main(["classify", "--manifest", str(dataset / "manifest.json"), "--stimulus", "A", "--classifier", "rf",
                 "--rho-th", "0.8", "--folds", "10", "--seed", "42", "--out", str(out)])
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["classifier"] == "random_forest" and rep["stimulus"] == "A" and rep["rho_th"] == 0.8
    assert rep["seed"] == 42 and len(rep["fold_accuracies"]) == 10
    assert sum(map(sum, rep["confusion"])) == 30
    run = json.loads((out / "run.json").read_text())
    assert run["config"]["command"] == "classify" and run["config"]["rho_th"] == 0.8


def test_classify_needs_stimulus_when_mixed(dataset, tmp_path, capsys):
    code = main(["classify", "--manifest", str(dataset / "manifest.json"), "--out", str(tmp_path)])
    assert code == 3
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "invalid"


@pytest.mark.filterwarnings("ignore::eegfc.features.FeatureWarning")
def test_sweep_outputs(dataset, tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "--manifest", str(dataset / "manifest.json"), "--thresholds", "0.5:0.95:0.05",
                 "--classifier", "knn", "--folds", "5", "--out", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("stimulus,rho_th,classifier,mean_accuracy,fold_1")
    assert len(lines) == 1 + 2 * 10
    assert (out / "sweep.svg").read_text().count("<polyline") == 2


def test_graphs_features_compare(dataset, tmp_path):
    m = str(dataset / "manifest.json")
    assert main(["graphs", "--manifest", m, "--stimulus", "V", "--out", str(tmp_path / "g")]) == 0
    assert len((tmp_path / "g" / "graphs.jsonl").read_text().splitlines()) == 30
    assert main(["features", "--manifest", m, "--out", str(tmp_path / "f")]) == 0
    assert len((tmp_path / "f" / "features.csv").read_text().splitlines()) == 61
    assert main(["compare", "--manifest", m, "--classifiers", "knn,lr", "--folds", "5", "--out", str(tmp_path / "c")]) == 0
    assert len((tmp_path / "c" / "comparison.csv").read_text().splitlines()) == 5


@pytest.mark.parametrize(
    "argv,code",
    [
        (["frobnicate"], 2),
        (["classify", "--manifest", "m.json", "--bogus"], 2),
        (["classify", "--manifest", "m.json", "--rho-th", "1.5"], 2),
        (["classify", "--manifest", "m.json", "--classifier", "xgb"], 2),
        (["synth", "--preset", "nope", "--out", "x"], 2),
    ],
)
def test_usage_errors(argv, code, capsys):
    assert main(argv) == code
    err = json.loads(capsys.readouterr().err.strip())
    assert err["exit_code"] == code and err["error"] == "usage"


def test_missing_manifest_is_io_error(tmp_path, capsys):
    assert main(["features", "--manifest", str(tmp_path / "none.json"), "--out", str(tmp_path / "o")]) == 4


def test_bad_thresholds_rejected_before_work(dataset, tmp_path):
    code = main(["sweep", "--manifest", str(dataset / "manifest.json"), "--thresholds", "0.5:1.2:0.1",
                 "--out", str(tmp_path / "o")])
    assert code == 3
    assert not (tmp_path / "o" / "sweep.csv").exists()


def test_help_documents_exit_codes(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
    assert "exit codes" in capsys.readouterr().out
