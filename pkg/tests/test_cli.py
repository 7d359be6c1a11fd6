import json

import pytest
from click.testing import CliRunner

from viswork.cli import main
from viswork.core.events import VertexEvent
from viswork.core.polygon_store import format_polygon, parse_polygon, write_polygon
from viswork.core.runner import ALGORITHMS
from viswork.generators.testgen import SQ4, DegenerateKind, gen_degenerate
from viswork.output.formats import CSV_HEADER_COMMENT

from .conftest import L6_TEXT


@pytest.fixture
def runner():
    return CliRunner()


class TestCompute:
    def test_text(self, runner, l6_file):
        result = runner.invoke(main, ["compute", "--input", str(l6_file)])
        assert result.exit_code == 0, result.output
        assert result.output == L6_TEXT

    @pytest.mark.parametrize("algo", ["dnc-det", "dnc-rand"])
    def test_other_algorithms_agree(self, runner, l6_file, algo):
        result = runner.invoke(main, ["compute", "--input", str(l6_file), "--algo", algo, "--s", "2"])
        assert result.exit_code == 0, result.output
        assert result.output == L6_TEXT

    def test_json(self, runner, l6_file):
        result = runner.invoke(main, ["compute", "--input", str(l6_file), "--format", "json"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert len(doc["events"]) == 7
        assert doc["report"]["r_out"] == 1

    def test_svg_to_file(self, runner, l6_file, tmp_path):
        out = tmp_path / "l6.svg"
        result = runner.invoke(main, ["compute", "--input", str(l6_file), "--format", "svg",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").startswith("<svg")

    def test_parse_error_exits_2(self, runner, tmp_path):
        bad = tmp_path / "bad.poly"
        bad.write_text("3\n0 0\n1 zz\n0 1\nq 0 0\n", encoding="utf-8")
        result = runner.invoke(main, ["compute", "--input", str(bad)])
        assert result.exit_code == 2
        assert "line 3" in result.output

    @pytest.mark.parametrize("kind, message", [
        (DegenerateKind.COLLINEAR_PAIR, "collinear"),
        (DegenerateKind.VERTEX_ON_P0_RAY, "horizontal ray"),
        (DegenerateKind.Q_ON_BOUNDARY, "lies on edge"),
    ])
    def test_invalid_input_exits_3(self, runner, tmp_path, kind, message):
        path = tmp_path / "degenerate.poly"
        write_polygon(path, *gen_degenerate(kind))
        result = runner.invoke(main, ["compute", "--input", str(path)])
        assert result.exit_code == 3
        assert message in result.output

    def test_non_utf8_file_exits_2(self, runner, tmp_path):
        bad = tmp_path / "latin1.poly"
        bad.write_bytes(b"3\n0 0\n1 0\n0 1\nq \xff 0\n")
        result = runner.invoke(main, ["compute", "--input", str(bad)])
        assert result.exit_code == 2
        assert "not UTF-8" in result.output

    def test_bad_s_is_a_usage_error(self, runner, l6_file):
        result = runner.invoke(main, ["compute", "--input", str(l6_file), "--algo", "dnc-det", "--s", "0"])
        assert result.exit_code == 2


class TestVerify:
    def test_family(self, runner):
        result = runner.invoke(main, ["verify", "--family", "comb", "--sizes", "1-4",
                                      "--algo", "const", "--algo", "dnc-det", "--s", "1,2"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["instances"] == 4
        assert doc["mismatches"] == 0
        assert doc["first_mismatch"] is None

    def test_files_and_contracts(self, runner, l6_file):
        result = runner.invoke(main, ["verify", "--input", str(l6_file), "--algo", "dnc-rand",
                                      "--seed", "0-2", "--check-contracts"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["runs"] == 3

    def test_threads_from_environment(self, runner):
        result = runner.invoke(main, ["verify", "--family", "convex", "--sizes", "5,6", "--seeds", "0-1"],
                               env={"VISWORK_THREADS": "2"})
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["instances"] == 4

    def test_threads_from_suite_file(self, runner, tmp_path):
        suite = tmp_path / "suite.yaml"
        suite.write_text("instances:\n  - family: convex\n    sizes: [5, 6]\n    seeds: [0]\n"
                         "algorithms: [const, dnc-det]\nthreads: 2\n", encoding="utf-8")
        result = runner.invoke(main, ["verify", "--suite", str(suite)])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["instances"] == 2

    def test_nothing_to_verify_exits_2(self, runner):
        result = runner.invoke(main, ["verify"])
        assert result.exit_code == 2

    def test_mismatch_exits_1(self, runner, l6_file, monkeypatch):
        def faulty(h, ctx, sink, options, stats):
            sink(VertexEvent(0))

        monkeypatch.setitem(ALGORITHMS, "const", faulty)
        result = runner.invoke(main, ["verify", "--input", str(l6_file)])
        assert result.exit_code == 1
        doc = json.loads(result.stdout)
        assert doc["mismatches"] == 1
        assert doc["first_mismatch"]["instance"] == "l6.poly"
        assert parse_polygon(doc["first_mismatch"]["replay"])[0][0].x == 0


class TestBench:
    def test_csv(self, runner):
        result = runner.invoke(main, ["bench", "--family", "comb", "--sizes", "2,4", "--algo", "const",
                                      "--algo", "dnc-det", "--reps", "2"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == CSV_HEADER_COMMENT
        assert lines[1].startswith("family,n,r,r_out,algo")
        assert len(lines) == 2 + 2 * 2 * 2

    def test_suite_file(self, runner, tmp_path):
        suite = tmp_path / "suite.yaml"
        suite.write_text("instances:\n  - family: convex\n    sizes: [5]\n    seeds: [0]\n"
                         "algorithms: [const]\nrepetitions: 1\n", encoding="utf-8")
        out = tmp_path / "bench.csv"
        result = runner.invoke(main, ["bench", "--suite", str(suite), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert len(out.read_text(encoding="utf-8").splitlines()) == 3

    def test_nothing_to_bench_exits_2(self, runner):
        assert runner.invoke(main, ["bench"]).exit_code == 2


class TestGen:
    def test_canonical_square(self, runner):
        result = runner.invoke(main, ["gen", "convex", "4"])
        assert result.exit_code == 0, result.output
        assert parse_polygon(result.output) == (list(SQ4[0]), SQ4[1])
        assert result.output.endswith(format_polygon(*SQ4))

    def test_comb_to_file(self, runner, tmp_path):
        out = tmp_path / "comb.poly"
        result = runner.invoke(main, ["gen", "comb", "3", "--seed", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        vertices, _ = parse_polygon(out.read_text(encoding="utf-8"))
        assert len(vertices) == 16

    def test_star_offset_outside_exits_3(self, runner):
        result = runner.invoke(main, ["gen", "star", "8", "--offset", "10,10"])
        assert result.exit_code == 3

    def test_degenerate(self, runner):
        result = runner.invoke(main, ["gen", "degenerate", "q-on-boundary"])
        assert result.exit_code == 0, result.output
        assert parse_polygon(result.output)[1].x == 4

    def test_bad_size(self, runner):
        assert runner.invoke(main, ["gen", "comb", "many"]).exit_code == 2
