import json

import pytest

from roomweaver.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from roomweaver.interchange import load_layout


@pytest.fixture
def generate_args(fixtures_dir, tmp_path):
    def args(out="layout.json", **overrides):
        base = {
            "--room-type": "bedroom",
            "--length": "3.5",
            "--width": "4.2",
            "--description-file": str(fixtures_dir / "query_description.txt"),
            "--store": str(fixtures_dir / "store"),
            "--k": "8",
            "--strategy": "retrieval",
            "--mode": "replay",
            "--fixture-dir": str(fixtures_dir / "replay"),
            "--out": str(tmp_path / out),
        }
        base.update(overrides)
        argv = ["generate"]
        for flag, value in base.items():
            if value is not None:
                argv += [flag, value]
        return argv

    return args


class TestGenerate:
    def test_replay_generation(self, generate_args, tmp_path, capsys):
        assert main(generate_args()) == EXIT_OK
        layout = load_layout(tmp_path / "layout.json")
        assert len(layout.boxes) == 4
        diag = json.loads((tmp_path / "layout.json.diagnostics.json").read_text())
        assert diag["attempts"] == 1
        assert [v["kind"] for v in diag["violations"]] == ["oob"]

    def test_replay_is_byte_identical(self, generate_args, tmp_path):
        assert main(generate_args(out="a.json")) == EXIT_OK
        assert main(generate_args(out="b.json")) == EXIT_OK
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_unknown_strategy_is_config_error(self, generate_args, capsys):
        code = main(generate_args(**{"--strategy": "hope"}))
        assert code == EXIT_CONFIG
        assert "unknown strategy" in capsys.readouterr().err

    def test_unknown_mode_is_config_error(self, generate_args, capsys):
        assert main(generate_args(**{"--mode": "telepathy"})) == EXIT_CONFIG

    def test_missing_fixture_is_runtime_error(self, generate_args, tmp_path, capsys):
        empty = tmp_path / "empty-fixtures"
        empty.mkdir()
        code = main(generate_args(**{"--fixture-dir": str(empty)}))
        assert code == EXIT_RUNTIME
        assert "FixtureMiss" in capsys.readouterr().err

    def test_description_flags_are_exclusive(self, generate_args, capsys):
        code = main(generate_args(**{"--description": "also inline"}))
        assert code == EXIT_CONFIG

    def test_missing_required_flag(self, capsys):
        assert main(["generate", "--room-type", "bedroom"]) == EXIT_CONFIG


class TestEvaluate:
    def test_gt_against_itself_prints_100s(self, fixtures_dir, capsys):
        gt = str(fixtures_dir / "gt")
        assert main(["evaluate", "--pred", gt, "--gt", gt]) == EXIT_OK
        out = capsys.readouterr().out
        assert "scenes: 1" in out
        assert out.splitlines()[-1].split() == ["0.00", "100.00", "100.00", "100.00", "100.00"]

    def test_json_report(self, fixtures_dir, tmp_path, capsys):
        gt = str(fixtures_dir / "gt")
        out = tmp_path / "report.json"
        assert main(["evaluate", "--pred", gt, "--gt", gt, "--json-out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["means"]["accuracy"] == 100.0

    def test_mismatched_ids_fail(self, fixtures_dir, tmp_path, capsys):
        other = tmp_path / "other"
        other.mkdir()
        (other / "different_scene.json").write_text(
            (fixtures_dir / "gt" / "e2e_scene.json").read_text().replace("e2e_scene", "nope")
        )
        code = main(["evaluate", "--pred", str(other), "--gt", str(fixtures_dir / "gt")])
        assert code == EXIT_RUNTIME


class TestDescribeAndAssemble:
    def test_describe_golden(self, fixtures_dir, capsys):
        assert main(["describe", "--layout", str(fixtures_dir / "layout5.json")]) == EXIT_OK
        out = capsys.readouterr().out
        assert out == (fixtures_dir / "golden_sentences.txt").read_text()

    def test_assemble_golden(self, fixtures_dir, tmp_path, capsys):
        out = tmp_path / "scene.json"
        code = main(
            [
                "assemble",
                "--layout", str(fixtures_dir / "layout5.json"),
                "--catalog", str(fixtures_dir / "catalog.json"),
                "--camera-count", "8",
                "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        assert out.read_text() == (fixtures_dir / "golden_scene.json").read_text()

    def test_assemble_trajectory(self, fixtures_dir, tmp_path):
        out = tmp_path / "scene.json"
        traj = tmp_path / "traj.txt"
        code = main(
            [
                "assemble",
                "--layout", str(fixtures_dir / "layout5.json"),
                "--catalog", str(fixtures_dir / "catalog.json"),
                "--camera-count", "4",
                "--out", str(out),
                "--trajectory-out", str(traj),
            ]
        )
        assert code == EXIT_OK
        assert len(traj.read_text().splitlines()) == 4


class TestIngest:
    def test_build_store_from_fixture_dataset(self, fixtures_dir, tmp_path, capsys):
        store_dir = tmp_path / "store"
        code = main(
            [
                "ingest",
                "--root", str(fixtures_dir / "dataset"),
                "--room-type", "bedroom",
                "--out-store", str(store_dir),
            ]
        )
        assert code == EXIT_OK
        manifest = json.loads((store_dir / "manifest.json").read_text())
        polarity = {e["id"]: e["polarity"] for e in manifest["exemplars"]}
        assert polarity["bed_000"] == "positive"
        assert polarity["bed_oob"] == "negative"
        assert "bed_nonrect" not in polarity
        err = capsys.readouterr().err
        assert "bed_nonrect: floor_plan" in err

    def test_broken_dataset_is_runtime_error(self, fixtures_dir, capsys):
        code = main(
            ["ingest", "--root", str(fixtures_dir / "dataset_bad"), "--out-store", "unused"]
        )
        assert code == EXIT_RUNTIME


class TestTopLevel:
    def test_help_exits_zero(self):
        assert main(["--help"]) == EXIT_OK

    def test_unknown_command(self, capsys):
        assert main(["transmogrify"]) == EXIT_CONFIG
