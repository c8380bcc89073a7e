import json

import numpy as np
import pytest

from medshift.bench import DEFAULT_CONFIG, parse_bench_config
from medshift.cli import main
from medshift.datagen import SynthConfig, gen_synthetic
from medshift.exceptions import InvalidConfig
from medshift.fileio import read_labels, read_matrix, write_matrix


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def dataset_dir(tmp_path, capsys):
    d = tmp_path / "d"
    code, _, _ = run(["generate", "--per-class", 50, "--bins", 100, "--seed", 42, "--out", d], capsys)
    assert code == 0
    return d


class TestGenerate:
    def test_outputs(self, dataset_dir):
        X = read_matrix(dataset_dir / "histograms.csv")
        assert X.shape == (100, 100)
        assert (dataset_dir / "histograms.csv").read_text().splitlines()[0].startswith("bin_0,bin_1")
        assert read_labels(dataset_dir / "labels.csv").tolist() == [0] * 50 + [1] * 50
        manifest = json.loads((dataset_dir / "manifest.json").read_text())
        assert manifest["command"] == "generate"
        assert manifest["seeds"] == {"dataset": 42}

    def test_round_trip(self, dataset_dir):
        ds = gen_synthetic(SynthConfig(rng_seed=42))
        X = read_matrix(dataset_dir / "histograms.csv")
        assert X.tobytes() == ds.histograms.tobytes()

    def test_deterministic(self, dataset_dir, tmp_path, capsys):
        other = tmp_path / "again"
        run(["generate", "--seed", 42, "--out", other], capsys)
        for name in ("histograms.csv", "labels.csv"):
            assert (other / name).read_bytes() == (dataset_dir / name).read_bytes()

    def test_invalid_config(self, tmp_path, capsys):
        code, _, err = run(["generate", "--per-class", 0, "--out", tmp_path / "x"], capsys)
        assert code == 4
        assert json.loads(err)["error"] == "InvalidConfig"


class TestCluster:
    def test_wms_contract(self, dataset_dir, tmp_path, capsys):
        out = tmp_path / "r"
        code, _, _ = run(["cluster", "--algo", "wms", "--h", 0.05,
                          "--in", dataset_dir / "histograms.csv", "--out", out], capsys)
        assert code == 0
        labels = read_labels(out / "labels.csv")
        modes = read_matrix(out / "modes.csv")
        assert len(labels) == 100
        assert modes.shape[0] == labels.max() + 1
        assert json.loads((out / "manifest.json").read_text())["config"]["bin_width"] == 0.01

    def test_toy(self, tmp_path, capsys):
        path = tmp_path / "toy.csv"
        write_matrix(path, [[1, 0], [0.9, 0.1], [0, 1]])
        code, _, _ = run(["cluster", "--algo", "wms", "--h", 0.5, "--in", path,
                          "--out", tmp_path / "r"], capsys)
        assert code == 0
        assert read_labels(tmp_path / "r" / "labels.csv").tolist() == [0, 0, 1]

    @pytest.mark.parametrize("algo, flags", [
        ("kmws", ["--k", 2]),
        ("dbscan-ws", ["--eps", 0.03, "--min-pts", 5]),
        ("mean-shift", ["--h", 0.05]),
        ("median-shift", ["--h", 0.5]),
    ])
    def test_other_algorithms(self, dataset_dir, tmp_path, capsys, algo, flags):
        out = tmp_path / algo
        code, _, _ = run(["cluster", "--algo", algo, *flags,
                          "--in", dataset_dir / "histograms.csv", "--out", out], capsys)
        assert code == 0
        assert len(read_labels(out / "labels.csv")) == 100

    def test_missing_parameter(self, dataset_dir, tmp_path, capsys):
        code, _, err = run(["cluster", "--algo", "kmws", "--in", dataset_dir / "histograms.csv",
                            "--out", tmp_path / "r"], capsys)
        assert code == 5
        assert json.loads(err)["error"] == "MissingParameter"

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("bin_0,bin_1\n0.5,0.5\n1.0\n")
        code, _, err = run(["cluster", "--algo", "wms", "--h", 0.5, "--in", bad,
                            "--out", tmp_path / "r"], capsys)
        assert code == 3
        assert json.loads(err)["error"] == "ParseError"

    def test_not_histograms(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        write_matrix(bad, [[0.5, 0.6]])
        code, _, err = run(["cluster", "--algo", "wms", "--h", 0.5, "--in", bad,
                            "--out", tmp_path / "r"], capsys)
        assert code == 9
        assert json.loads(err)["error"] == "InvalidHistogram"

    def test_engine_failure(self, tmp_path, capsys):
        path = tmp_path / "h.csv"
        write_matrix(path, [[1, 0], [0, 1]])
        code, _, err = run(["cluster", "--algo", "kmws", "--k", 3, "--in", path,
                            "--out", tmp_path / "r"], capsys)
        assert code == 6
        assert json.loads(err)["error"] == "KTooLarge"

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run(["cluster", "--algo", "wms", "--h", 0.5, "--in", tmp_path / "nope.csv",
                          "--out", tmp_path / "r"], capsys)
        assert code == 8

    def test_manifest_replay(self, dataset_dir, tmp_path, capsys):
        out = tmp_path / "r"
        run(["cluster", "--algo", "kmws", "--k", 2, "--seed", 3,
             "--in", dataset_dir / "histograms.csv", "--out", out], capsys)
        manifest = json.loads((out / "manifest.json").read_text())
        first = {p: open(p, "rb").read() for p in manifest["outputs"]}
        for p in manifest["outputs"]:
            open(p, "wb").close()
        assert main(manifest["argv"]) == 0
        for p, content in first.items():
            assert open(p, "rb").read() == content


class TestEval:
    def test_identical(self, dataset_dir, tmp_path, capsys):
        truth = dataset_dir / "labels.csv"
        code, out, _ = run(["eval", "--pred", truth, "--truth", truth,
                            "--out", tmp_path / "e.json"], capsys)
        assert code == 0
        assert out.strip() == "ari=1.000000"
        summary = json.loads((tmp_path / "e.json").read_text())
        assert summary == {"ari": 1.0, "n": 100, "clusters_pred": 2, "clusters_true": 2}

    def test_length_mismatch(self, dataset_dir, tmp_path, capsys):
        short = tmp_path / "short.csv"
        short.write_text("label\n0\n1\n")
        code, _, err = run(["eval", "--pred", short, "--truth", dataset_dir / "labels.csv"], capsys)
        assert code == 7
        assert json.loads(err)["error"] == "LengthMismatch"

    def test_wms_scores_well(self, tmp_path, capsys):
        d, r = tmp_path / "d", tmp_path / "r"
        run(["generate", "--out", d], capsys)
        run(["cluster", "--algo", "wms", "--h", 0.05, "--in", d / "histograms.csv", "--out", r], capsys)
        code, out, _ = run(["eval", "--pred", r / "labels.csv", "--truth", d / "labels.csv"], capsys)
        assert code == 0
        assert float(out.strip().split("=")[1]) >= 0.95
        assert (r / "eval.json").exists()


class TestIngest:
    def test_directory(self, tmp_path, capsys):
        series = tmp_path / "series"
        series.mkdir()
        rng = np.random.default_rng(60)
        for i in range(3):
            (series / f"s{i}.txt").write_text("\n".join(map(str, rng.random(50))) + "\n")
        code, _, _ = run(["ingest", "--in", series, "--bins", 10, "--range", 0, 1,
                          "--out", tmp_path / "h"], capsys)
        assert code == 0
        X = read_matrix(tmp_path / "h" / "histograms.csv")
        assert X.shape == (3, 10)
        np.testing.assert_allclose(X.sum(axis=1), 1.0, atol=1e-12)
        manifest = json.loads((tmp_path / "h" / "manifest.json").read_text())
        assert manifest["config"]["sources"] == ["s0.txt", "s1.txt", "s2.txt"]


class TestBench:
    def test_small_bench(self, tmp_path, capsys):
        config = tmp_path / "bench.txt"
        config.write_text(
            "dataset.per_class = 15\n"
            "wms.h = 0.05\nmedian-shift.h = 0.05\nmean-shift.h = 0.05\n"
            "kmws.k = 2\nkmws.restarts = 3\n"
            "dbscan-ws.eps = 0.03\ndbscan-ws.min_pts = 3\n"
        )
        code, out, _ = run(["bench", "--config", config, "--out", tmp_path / "b"], capsys)
        assert code == 0
        lines = (tmp_path / "b" / "report.csv").read_text().splitlines()
        assert lines[0] == "algorithm,params,ari,ari_std,n_clusters,seconds,error"
        assert [l.split(",")[0] for l in lines[1:]] == [
            "wms", "median-shift", "mean-shift", "kmws", "dbscan-ws"
        ]
        assert "wms" in out

    def test_bad_config(self, tmp_path, capsys):
        config = tmp_path / "bench.txt"
        config.write_text("wms.h = 0.05\nfoo = 1\n")
        code, _, _ = run(["bench", "--config", config, "--out", tmp_path / "b"], capsys)
        assert code == 4

    def test_parse_default(self):
        cfg = parse_bench_config(DEFAULT_CONFIG)
        assert [p["h"] for p in cfg.grid("wms")] == [0.02, 0.05, 0.1, 0.2]
        assert len(cfg.grid("dbscan-ws")) == 15
        assert cfg.dataset == SynthConfig()

    @pytest.mark.parametrize("text", ["wms.h = \n", "dataset.nope = 1\n", "bogus.h = 1\n",
                                      "algorithms = wms\n", "wms.h = abc\n"])
    def test_parse_errors(self, text):
        with pytest.raises(InvalidConfig):
            parse_bench_config(text)

    def test_row_errors_do_not_abort(self):
        from medshift.bench import run_bench

        cfg = parse_bench_config("dataset.per_class = 3\nalgorithms = kmws\nkmws.k = 2, 50\n")
        report = run_bench(cfg)
        assert report.rows[0].ari is not None
        assert report.rows[1].ari is None and "KTooLarge" in report.rows[1].error
