"""End-to-end tests of the command-line interface."""

import json

import pytest
from click.testing import CliRunner

from main import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INVALID, EXIT_OK, cli, parse_exponents


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def e1_path(write_json, e1_document):
    return write_json("e1.json", e1_document)


@pytest.fixture
def overload_path(write_json):
    return write_json(
        "overload.json",
        {
            "switches": 4,
            "streams": [
                {"id": "s1", "src_switch": 1, "dst_switch": 4, "period": 2},
                {"id": "s2", "src_switch": 1, "dst_switch": 3, "period": 2},
                {"id": "s3", "src_switch": 2, "dst_switch": 4, "period": 1},
            ],
        },
    )


@pytest.fixture
def mixed_path(write_json):
    """Streams in both directions with mixed periods."""
    return write_json(
        "mixed.json",
        {
            "switches": 5,
            "streams": [
                {"id": "a", "src_switch": 1, "dst_switch": 5, "period": 4},
                {"id": "b", "src_switch": 2, "dst_switch": 4, "period": 2},
                {"id": "c", "src_switch": 5, "dst_switch": 1, "period": 2},
                {"id": "d", "src_switch": 4, "dst_switch": 2, "period": 8},
            ],
        },
    )


class TestCheck:
    def test_feasible(self, runner, e1_path, tmp_path):
        out = tmp_path / "verdict.json"
        result = runner.invoke(cli, ["check", e1_path, "--out", str(out)])
        assert result.exit_code == EXIT_OK
        assert "verdict: feasible" in result.output
        assert json.loads(out.read_text())["verdict"] == "feasible"

    def test_infeasible(self, runner, overload_path):
        result = runner.invoke(cli, ["check", overload_path])
        assert result.exit_code == EXIT_INFEASIBLE
        assert "link 2" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["check", str(tmp_path / "nope.json")])
        assert result.exit_code == EXIT_INPUT

    def test_malformed_json(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{\n  \"switches\": 4,\n  oops\n}")
        result = runner.invoke(cli, ["check", str(path)])
        assert result.exit_code == EXIT_INPUT
        assert "line 3" in result.output

    def test_invalid_field(self, runner, write_json):
        path = write_json("bad.json", {"switches": 1, "streams": []})
        result = runner.invoke(cli, ["check", path])
        assert result.exit_code == EXIT_INPUT
        assert "switches" in result.output

    def test_format_version_flag(self, runner, e1_path, tmp_path):
        out = tmp_path / "verdict.json"
        result = runner.invoke(cli, ["--format-version", "1", "check", e1_path, "--out", str(out)])
        assert result.exit_code == EXIT_OK
        assert json.loads(out.read_text())["format_version"] == 1
        assert runner.invoke(cli, ["--format-version", "2", "check", e1_path]).exit_code != EXIT_OK

    def test_reject_policy(self, runner, write_json):
        path = write_json(
            "six.json",
            {
                "switches": 3,
                "streams": [{"id": "s", "src_switch": 1, "dst_switch": 3, "period": 6}],
            },
        )
        assert runner.invoke(cli, ["check", path]).exit_code == EXIT_OK
        result = runner.invoke(cli, ["--period-policy", "reject", "check", path])
        assert result.exit_code == EXIT_INPUT


class TestScheduleAndValidate:
    def test_round_trip(self, runner, mixed_path, tmp_path):
        sched = tmp_path / "schedule.json"
        gantt = tmp_path / "gantt.txt"
        gcl = tmp_path / "gcl.json"
        coloring = tmp_path / "coloring.json"
        result = runner.invoke(
            cli,
            [
                "schedule",
                mixed_path,
                "--out",
                str(sched),
                "--gantt",
                str(gantt),
                "--gcl",
                str(gcl),
                "--emit-coloring",
                str(coloring),
            ],
        )
        assert result.exit_code == EXIT_OK, result.output

        document = json.loads(sched.read_text())
        assert [s["direction"] for s in document["schedules"]] == ["ltr", "rtl"]
        assert set(document["streams"]) == {"a", "b", "c", "d"}
        assert "# gantt direction=rtl" in gantt.read_text()
        assert "P5,4" in json.loads(gcl.read_text())["ports"]
        assert set(json.loads(coloring.read_text())["layers"]) == {
            "a#1", "b#1", "b#2", "c#1", "c#2", "c#3", "c#4", "d#1",
        }

        result = runner.invoke(cli, ["validate", mixed_path, str(sched), "--replay"])
        assert result.exit_code == EXIT_OK, result.output
        assert "verdict: pass" in result.output

    def test_reruns_are_byte_identical(self, runner, mixed_path, tmp_path):
        outputs = []
        for run in range(2):
            files = [tmp_path / f"{name}{run}" for name in ("sched", "gantt", "colors")]
            result = runner.invoke(
                cli,
                ["schedule", mixed_path, "--out", str(files[0]), "--gantt", str(files[1]),
                 "--format", "svg", "--emit-coloring", str(files[2])],
            )
            assert result.exit_code == EXIT_OK
            outputs.append([f.read_bytes() for f in files])
        assert outputs[0] == outputs[1]

    def test_infeasible_schedule(self, runner, overload_path):
        result = runner.invoke(cli, ["schedule", overload_path])
        assert result.exit_code == EXIT_INFEASIBLE

    def test_greedy_method(self, runner, e1_path, tmp_path):
        sched = tmp_path / "schedule.json"
        result = runner.invoke(
            cli, ["schedule", e1_path, "--method", "greedy", "--out", str(sched)]
        )
        assert result.exit_code == EXIT_OK
        assert runner.invoke(cli, ["validate", e1_path, str(sched)]).exit_code == EXIT_OK

    def test_validation_failure(self, runner, e1_path, write_json, tmp_path):
        schedule = {
            "format_version": 1,
            "schedules": [
                {
                    "hyperperiod": 2,
                    "direction": "ltr",
                    "switches": 4,
                    "entries": [
                        {"stream": "s1", "replication": 1, "injection_time": 1},
                        {"stream": "s2", "replication": 1, "injection_time": 1},
                        {"stream": "s3", "replication": 1, "injection_time": 3},
                    ],
                }
            ],
        }
        report = tmp_path / "report.json"
        result = runner.invoke(
            cli, ["validate", e1_path, write_json("s.json", schedule), "--out", str(report)]
        )
        assert result.exit_code == EXIT_INVALID
        assert json.loads(report.read_text())["verdict"] == "fail"

    def test_schedule_file_not_an_object(self, runner, e1_path, write_json):
        path = write_json("list.json", [{"hyperperiod": 2}])
        result = runner.invoke(cli, ["validate", e1_path, path])
        assert result.exit_code == EXIT_INPUT
        assert "JSON object" in result.output

    def test_schema_mismatch(self, runner, e1_path, write_json):
        schedule = {"format_version": 7, "schedules": []}
        result = runner.invoke(cli, ["validate", e1_path, write_json("s.json", schedule)])
        assert result.exit_code == EXIT_INPUT


class TestOracle:
    def test_found(self, runner, e1_path):
        assert runner.invoke(cli, ["oracle", e1_path]).exit_code == EXIT_OK

    def test_infeasible(self, runner, overload_path):
        assert runner.invoke(cli, ["oracle", overload_path]).exit_code == EXIT_INFEASIBLE

    def test_budget(self, runner, mixed_path):
        result = runner.invoke(cli, ["oracle", mixed_path, "--budget", "1"])
        assert result.exit_code == EXIT_INPUT
        assert "budget" in result.output


class TestGen:
    def test_writes_instance(self, runner, tmp_path):
        out = tmp_path / "gen.json"
        result = runner.invoke(
            cli,
            ["gen", "-n", "6", "--streams", "9", "--exponents", "1:1,2:1", "--seed", "4",
             "--feasible-only", "--out", str(out)],
        )
        assert result.exit_code == EXIT_OK, result.output
        document = json.loads(out.read_text())
        assert document["switches"] == 6
        assert len(document["streams"]) == 9
        assert runner.invoke(cli, ["check", str(out)]).exit_code == EXIT_OK

    def test_bad_exponents(self, runner):
        result = runner.invoke(cli, ["gen", "--exponents", "x:1"])
        assert result.exit_code == EXIT_INPUT


class TestBench:
    def test_csv(self, runner, tmp_path):
        out = tmp_path / "bench.csv"
        result = runner.invoke(
            cli,
            ["bench", "--sizes", "4,8", "-n", "5", "--repeats", "1", "--max-exponent", "4",
             "--profile", "uniform", "--feasible-only", "--csv", str(out)],
        )
        assert result.exit_code == EXIT_OK, result.output
        lines = out.read_text().splitlines()
        assert lines[0].startswith("format_version,stream_count,n")
        assert len(lines) == 3


class TestParseExponents:
    def test_weights(self):
        assert parse_exponents("0:1,1:2, 3") == {0: 1.0, 1: 2.0, 3: 1.0}

    def test_mapping_from_config(self):
        assert parse_exponents({2: 1}) == {2: 1.0}
