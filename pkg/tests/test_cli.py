import json

import pytest

from mcorder.cli import main


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture
def fasta(tmp_path):
    path = tmp_path / "in.fasta"
    path.write_text(">rec1\nACGTACGTNN\n>rec2\nGGCCTTAA\n")
    return path


class TestIngest:
    def test_nucl4(self, tmp_path, fasta, capsys):
        out = tmp_path / "out.sym"
        assert run(["ingest", "--in", fasta, "--out", out]) == 0
        text = out.read_text()
        assert text.startswith("#alphabet=ACGT\n")
        assert "skipped 2" in capsys.readouterr().err

    def test_rr2(self, tmp_path, fasta):
        out = tmp_path / "out.sym"
        assert run(["ingest", "--in", fasta, "--out", out,
                    "--scheme", "rr2"]) == 0
        assert out.read_text().splitlines()[1] == "RYRYRYRYRRYYYYRR"

    def test_missing_input_is_exit_3(self, tmp_path):
        assert run(["ingest", "--in", tmp_path / "nope.fasta",
                    "--out", tmp_path / "x.sym"]) == 3

    def test_malformed_fasta_is_exit_3(self, tmp_path):
        bad = tmp_path / "bad.fasta"
        bad.write_text("ACGT\n")
        assert run(["ingest", "--in", bad, "--out", tmp_path / "x.sym"]) == 3


class TestSimulateAndScan:
    def test_pipeline(self, tmp_path, capsys):
        sym = tmp_path / "sim.sym"
        assert run(["simulate", "--K", 2, "--L", 2, "--N", 1200,
                    "--seed", 13, "--out", sym]) == 0
        report = tmp_path / "scan.csv"
        assert run(["scan", "--in", sym, "--method", "GD1", "--method",
                    "BIC", "--mmax", 3, "--out", report]) == 0
        lines = report.read_text().splitlines()
        assert lines[0] == "method,m,value,null_mean,variance,p_value,reject"
        assert "GD1: estimated order 2" in capsys.readouterr().err

    def test_simulate_deterministic(self, tmp_path):
        a = tmp_path / "a.sym"
        b = tmp_path / "b.sym"
        for out in (a, b):
            assert run(["simulate", "--K", 2, "--L", 1, "--N", 300,
                        "--seed", 4, "--out", out]) == 0
        assert a.read_text() == b.read_text()

    def test_estimate_alias_json(self, tmp_path):
        sym = tmp_path / "sim.sym"
        run(["simulate", "--K", 2, "--L", 1, "--N", 400, "--seed", 2,
             "--out", sym])
        out = tmp_path / "rep.json"
        assert run(["estimate", "--in", sym, "--method", "GD1",
                    "--mmax", 2, "--format", "json", "--out", out]) == 0
        body = json.loads(out.read_text())
        assert body["m_max"] == 2
        assert body["methods"][0]["method"] == "GD1"

    def test_bad_mmax_is_exit_2(self, tmp_path):
        sym = tmp_path / "sim.sym"
        run(["simulate", "--K", 2, "--L", 1, "--N", 200, "--seed", 1,
             "--out", sym])
        assert run(["scan", "--in", sym, "--mmax", 80]) == 2

    def test_headerless_needs_alphabet_flag(self, tmp_path):
        sym = tmp_path / "raw.sym"
        sym.write_text("01010101\n")
        assert run(["scan", "--in", sym, "--mmax", 2]) == 2
        assert run(["scan", "--in", sym, "--alphabet", "01",
                    "--mmax", 2, "--out", str(tmp_path / "r.csv")]) == 0


class TestEval:
    def test_eval_and_parallel_determinism(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "methods": ["GD1", "RD"], "alphabet_size": 2, "true_order": 1,
            "lengths": [250], "realizations": 3, "seed": 21,
            "n_surrogates": 25}))
        csv1 = tmp_path / "r1.csv"
        csv2 = tmp_path / "r2.csv"
        assert run(["eval", "--config", cfg, "--out-csv", csv1,
                    "--out-json", tmp_path / "r1.json"]) == 0
        assert run(["eval", "--config", cfg, "--out-csv", csv2,
                    "--jobs", 2]) == 0
        assert csv1.read_text() == csv2.read_text()
        summary = json.loads((tmp_path / "r1.json").read_text())
        assert summary["config"]["seed"] == 21

    def test_invalid_config_is_exit_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"methods": ["GD1"]}))
        assert run(["eval", "--config", cfg,
                    "--out-csv", tmp_path / "x.csv"]) == 2

    def test_broken_json_is_exit_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert run(["eval", "--config", cfg,
                    "--out-csv", tmp_path / "x.csv"]) == 2


class TestDiagnose:
    def test_diagnose_csv(self, tmp_path):
        sym = tmp_path / "sim.sym"
        run(["simulate", "--K", 2, "--L", 1, "--N", 500, "--seed", 6,
             "--out", sym])
        out = tmp_path / "diag.csv"
        assert run(["diagnose", "--in", sym, "--order", 1,
                    "--surrogates", 12, "--seed", 3, "--out", out]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "record,index,value"
        assert sum(1 for ln in lines if ln.startswith("surrogate,")) == 12
