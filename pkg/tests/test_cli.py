import base64
import csv

import pytest

from votekit.service.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerateData:
    def test_turnout_csv_500_rows(self, tmp_path, capsys):
        out = tmp_path / "turnout.csv"
        code, stdout, _ = run(
            capsys, "generate-data", "--kind", "turnout", "--n", "500", "--seed", "42",
            "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 501
        assert lines[0] == (
            "visibility_km,humidity_pct,temperature_c,wind_speed_ms,cloudiness_pct,"
            "registered_count,participant_count"
        )

    def test_violence_csv(self, tmp_path, capsys):
        out = tmp_path / "violence.csv"
        code, _, _ = run(
            capsys, "generate-data", "--kind", "violence", "--n", "100", "--seed", "7",
            "--out", str(out),
        )
        assert code == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 100
        assert set(rows[0]) == {
            "area_code", "prior_incident_count", "previous_turnout_pct",
            "margin_pct_last_election", "rally_count", "police_stations_per_10k",
            "incident_occurred",
        }

    def test_deterministic_output(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, "generate-data", "--kind", "turnout", "--n", "50", "--seed", "9", "--out", str(a))
        run(capsys, "generate-data", "--kind", "turnout", "--n", "50", "--seed", "9", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestTrain:
    def test_turnout_training_prints_metrics_and_saves(self, tmp_path, capsys):
        data = tmp_path / "turnout.csv"
        model = tmp_path / "model.json"
        run(capsys, "generate-data", "--kind", "turnout", "--n", "200", "--seed", "3", "--out", str(data))
        code, stdout, _ = run(
            capsys, "train", "--kind", "turnout", "--in", str(data),
            "--out-model", str(model), "--seed", "3",
        )
        assert code == 0
        assert "test" in stdout and "holdout" in stdout and "r2" in stdout
        assert model.exists()

        from votekit.forest import load_model

        assert load_model(model).task.value == "regression"

    def test_violence_training(self, tmp_path, capsys):
        data = tmp_path / "violence.csv"
        run(capsys, "generate-data", "--kind", "violence", "--n", "200", "--seed", "3", "--out", str(data))
        code, stdout, _ = run(capsys, "train", "--kind", "violence", "--in", str(data), "--seed", "3")
        assert code == 0
        assert "accuracy" in stdout

    def test_missing_file_fails_cleanly(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "train", "--kind", "turnout", "--in", str(tmp_path / "no.csv"))
        assert code == 1
        assert "error" in stderr


class TestSimulateAndVerify:
    def test_simulation_deterministic_and_chain_valid(self, tmp_path, capsys):
        code, stdout_a, _ = run(
            capsys, "simulate-election", "--voters", "60", "--areas", "3", "--seed", "7",
        )
        assert code == 0
        assert "audit chain valid" in stdout_a
        code, stdout_b, _ = run(
            capsys, "simulate-election", "--voters", "60", "--areas", "3", "--seed", "7",
        )
        assert code == 0

        def tally_lines(text):
            return [line for line in text.splitlines() if line.strip().startswith("CAND-")]

        assert tally_lines(stdout_a) == tally_lines(stdout_b)

    def test_simulation_persists_verifiable_journal(self, tmp_path, capsys):
        data_dir = tmp_path / "simdata"
        code, stdout, _ = run(
            capsys, "simulate-election", "--voters", "30", "--areas", "2", "--seed", "1",
            "--data-dir", str(data_dir),
        )
        assert code == 0
        code, stdout, _ = run(capsys, "verify-audit", "--data-dir", str(data_dir))
        assert code == 0
        assert "chain valid" in stdout

    def test_verify_detects_tampered_journal(self, tmp_path, capsys):
        data_dir = tmp_path / "simdata"
        run(capsys, "simulate-election", "--voters", "20", "--areas", "2", "--seed", "2",
            "--data-dir", str(data_dir))
        journal = next(data_dir.glob("journal_*.jsonl"))
        text = journal.read_text()
        # flip a hex digit inside some stored entry hash
        tampered = text.replace('"entry_hash":"a', '"entry_hash":"b', 1)
        if tampered == text:
            tampered = text.replace('"entry_hash":"', '"entry_hash":"f', 1)
        journal.write_text(tampered)
        code, stdout, _ = run(capsys, "verify-audit", "--data-dir", str(data_dir))
        assert code == 1
        assert "INVALID" in stdout


class TestEnrollBatch:
    def make_csv(self, path, rows):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["nic", "full_name", "area_code", "fingerprint_b64", "face_b64"])
            for nic, name, area in rows:
                writer.writerow([
                    nic, name, area,
                    base64.b64encode(f"fp-{nic}".encode() * 8).decode(),
                    base64.b64encode(f"face-{nic}".encode() * 8).decode(),
                ])

    def test_enrolls_all_rows(self, tmp_path, capsys):
        csv_path = tmp_path / "batch.csv"
        self.make_csv(csv_path, [
            ("901111111V", "A", "COL-01"), ("902222222V", "B", "COL-02"),
        ])
        data_dir = tmp_path / "data"
        code, stdout, _ = run(
            capsys, "enroll-batch", "--csv", str(csv_path), "--data-dir", str(data_dir)
        )
        assert code == 0
        assert "enrolled 2 voters" in stdout

        from votekit.service.config import ServiceConfig
        from votekit.service.state import AppState

        state = AppState(ServiceConfig(data_dir=str(data_dir)))
        assert "901111111V" in state.registry and "902222222V" in state.registry
        state.close()

    def test_bad_header_fails(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("a,b\n1,2\n")
        code, _, stderr = run(
            capsys, "enroll-batch", "--csv", str(csv_path), "--data-dir", str(tmp_path / "d")
        )
        assert code == 1

    def test_duplicate_nic_fails_nonzero(self, tmp_path, capsys):
        csv_path = tmp_path / "dup.csv"
        self.make_csv(csv_path, [
            ("901111111V", "A", "COL-01"), ("901111111V", "B", "COL-02"),
        ])
        code, _, stderr = run(
            capsys, "enroll-batch", "--csv", str(csv_path), "--data-dir", str(tmp_path / "d")
        )
        assert code == 1
        assert "duplicate" in stderr


def test_unknown_command_exits_nonzero(capsys):
    with pytest.raises(SystemExit):
        main(["definitely-not-a-command"])
