"""Tests for the command line interface."""

import json

import pytest

from rectgeo.cli import _overrides, main
from rectgeo.exceptions import EXIT_INVALID_INPUT, EXIT_IO, EXIT_OK
from rectgeo.serialization import save

pytestmark = pytest.mark.integration


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def workspace(tmp_path, capsys):
    """A generated L complex and its tree-product structure on disk."""
    complex_file = str(tmp_path / "l.json")
    structure_file = str(tmp_path / "l.struct.json")
    assert main(["generate", "--family", "grid-L", "--n", "3", "--out", complex_file]) == EXIT_OK
    assert main(["build", "--complex", complex_file, "--out", structure_file]) == EXIT_OK
    capsys.readouterr()
    return complex_file, structure_file


class TestCommands:
    """Test each command's output document."""

    def test_generate(self, tmp_path, capsys):
        """Test the generate report."""
        code, doc = _run(
            capsys, "generate", "--family", "book", "--n", "3", "--out", str(tmp_path / "b.json")
        )
        assert code == EXIT_OK
        assert doc["type"] == "GenerateReport"
        assert doc["format_version"] == 1
        assert (doc["vertices"], doc["faces"]) == (8, 3)

    def test_plain_complex_file(self, tmp_path, capsys):
        """Test a hand-written untagged complex goes through validate, build and query."""
        complex_file = tmp_path / "square.json"
        complex_file.write_text(
            '{"vertices": 4, "edges": [[0,1],[1,2],[2,3,1.0],[0,3]], "faces": [[0,1,2,3]]}'
        )
        code, doc = _run(capsys, "validate", "--complex", str(complex_file))
        assert code == EXIT_OK
        assert doc["accepted"] is True

        structure_file = str(tmp_path / "square.struct.json")
        code, _ = _run(capsys, "build", "--complex", str(complex_file), "--out", structure_file)
        assert code == EXIT_OK

        code, doc = _run(
            capsys, "query", "--structure", structure_file, "--from", "0,0,0", "--to", "0,1,1"
        )
        assert code == EXIT_OK
        assert doc["length"] == pytest.approx(2 ** 0.5)

    def test_generated_file_uses_vertices_key(self, workspace):
        """Test generate writes the vertex count under 'vertices'."""
        with open(workspace[0]) as f:
            data = json.load(f)
        assert data["vertices"] == 8

    def test_validate(self, workspace, capsys):
        """Test an accepted complex."""
        code, doc = _run(capsys, "validate", "--complex", workspace[0])
        assert code == EXIT_OK
        assert doc["type"] == "ValidationReport"

    def test_theta(self, workspace, capsys):
        """Test the class listing."""
        code, doc = _run(capsys, "theta", "--complex", workspace[0])
        assert code == EXIT_OK
        assert doc["classes"] == [[0, 2, 4], [1, 3], [5, 6, 7], [8, 9]]

    def test_query(self, workspace, capsys):
        """Test the L query from the structure file."""
        code, doc = _run(
            capsys, "query", "--structure", workspace[1], "--from", "1,1,0.5", "--to", "2,0.5,1"
        )
        assert code == EXIT_OK
        assert doc["type"] == "GeodesicPath"
        assert doc["breakpoints"][1] == 4
        assert doc["length"] == pytest.approx(2.2360679775, abs=1e-9)
        assert "micros" not in doc

    def test_query_timing(self, workspace, capsys):
        """Test --timing adds the wall-clock field."""
        code, doc = _run(
            capsys, "--timing", "query", "--structure", workspace[1],
            "--from", "1,1,0.5", "--to", "2,0.5,1",
        )
        assert code == EXIT_OK
        assert "micros" in doc

    def test_boundary(self, workspace, capsys):
        """Test the walk output."""
        code, doc = _run(capsys, "boundary", "--structure", workspace[1], "--p", "2", "--q", "6")
        assert code == EXIT_OK
        assert {tuple(doc["pi1"]), tuple(doc["pi2"])} == {(2, 1, 0, 3, 6), (2, 5, 4, 7, 6)}

    def test_unfold_triangulation(self, workspace, capsys):
        """Test the chain with per-block triangulations."""
        code, doc = _run(
            capsys, "unfold", "--structure", workspace[1], "--p", "2", "--q", "6",
            "--emit-triangulation",
        )
        assert code == EXIT_OK
        assert len(doc["triangulations"]) == 1
        assert len(doc["triangulations"][0]["triangles"]) == 6

    def test_oracle(self, workspace, capsys):
        """Test the oracle reading a complex file."""
        code, doc = _run(
            capsys, "oracle", "--complex", workspace[0],
            "--from", "1,1,0.5", "--to", "2,0.5,1", "--h", "0.25",
        )
        assert code == EXIT_OK
        assert doc["distance"] == pytest.approx(2.2360679775, abs=1e-9)

    def test_bench(self, workspace, capsys):
        """Test a small benchmark run."""
        code, doc = _run(capsys, "bench", "--structure", workspace[1], "--queries", "5")
        assert code == EXIT_OK
        assert doc["queries"] == 5
        assert "percentiles" not in doc
        assert all("micros" not in r for r in doc["records"])

    def test_deterministic_output(self, workspace, capsys):
        """Test repeated runs without --timing print identical documents."""
        argv = ["query", "--structure", workspace[1], "--from", "1,1,0.5", "--to", "2,0.5,1"]
        assert _run(capsys, *argv) == _run(capsys, *argv)
        bench = ["bench", "--structure", workspace[1], "--queries", "5", "--seed", "3"]
        assert _run(capsys, *bench) == _run(capsys, *bench)


class TestExitCodes:
    """Test error handling at the command line."""

    def test_rejected_complex(self, tmp_path, three_squares, capsys):
        """Test a complex failing the link condition exits with 1."""
        filename = str(tmp_path / "corner.json")
        save(three_squares, filename)
        code, doc = _run(capsys, "validate", "--complex", filename)
        assert code == EXIT_INVALID_INPUT
        assert doc["accepted"] is False

    def test_build_rejected_complex(self, tmp_path, three_squares, capsys):
        """Test build refuses a complex that is not CAT(0)."""
        filename = str(tmp_path / "corner.json")
        save(three_squares, filename)
        code = main(["build", "--complex", filename, "--out", str(tmp_path / "s.json")])
        assert code == EXIT_INVALID_INPUT
        assert "rectgeo:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        """Test an unreadable input exits with 3."""
        assert main(["theta", "--complex", str(tmp_path / "nope.json")]) == EXIT_IO

    def test_not_a_structure(self, workspace):
        """Test a complex file passed as a structure."""
        code = main(["boundary", "--structure", workspace[0], "--p", "0", "--q", "1"])
        assert code == EXIT_IO

    def test_unknown_setting(self, workspace):
        """Test --set with an unknown key."""
        assert main(["--set", "bogus=1", "theta", "--complex", workspace[0]]) == EXIT_INVALID_INPUT

    def test_setting_applies(self, workspace, capsys):
        """Test --set reaches the library."""
        code = main([
            "--set", "oracle_node_cap=5", "oracle", "--complex", workspace[0],
            "--from", "0,0.5,0.5", "--to", "2,0.5,0.5", "--h", "0.5",
        ])
        assert code == EXIT_INVALID_INPUT
        assert "nodes" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [[], ["query"], ["query", "--structure", "s.json", "--from", "1,2", "--to", "0,0,0"],
         ["generate", "--family", "torus", "--n", "3", "--out", "x.json"]],
    )
    def test_bad_arguments(self, argv):
        """Test argument errors exit with 1."""
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == EXIT_INVALID_INPUT


class TestOverrides:
    """Test KEY=VALUE parsing."""

    def test_types(self):
        """Test integers stay integers and decimals become floats."""
        assert _overrides(["median_samples=500", "point_atol=1e-9", "closure_atol=0.5"]) == {
            "median_samples": 500, "point_atol": 1e-9, "closure_atol": 0.5
        }

    def test_missing_equals(self):
        """Test a pair without '='."""
        with pytest.raises(ValueError):
            _overrides(["median_samples"])
