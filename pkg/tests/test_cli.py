"""Tests for the qlattice command line."""

import json

import pytest
from typer.testing import CliRunner

from src.cli import app
from src.config import CAPS_ENV
from src.series import VarTable
from src.series_codec import dumps


@pytest.fixture(autouse=True)
def no_env_caps(monkeypatch):
    monkeypatch.delenv(CAPS_ENV, raising=False)


@pytest.fixture
def runner():
    return CliRunner()


class TestVerify:
    def test_functional_equation_passes(self, runner):
        result = runner.invoke(app, ["verify", "functional-eq", "--n", "2", "--caps", "2"])
        assert result.exit_code == 0
        assert "status:   PASS" in result.stdout

    def test_pyramid_passes(self, runner):
        result = runner.invoke(app, ["verify", "vpv-pyramid", "--n", "2", "--caps", "y=4,z=5"])
        assert result.exit_code == 0
        assert "pipelines: product, rhs, newton, taylor" in result.stdout

    def test_numeric_passes(self, runner):
        result = runner.invoke(app, ["verify", "vpv-numeric", "--json"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["status"] == "pass"
        assert report["caps"] == {"a1": 40, "a2": 40}

    def test_perturbed_fails(self, runner):
        """--perturb bumps a left-side coefficient and drives exit 1."""
        result = runner.invoke(app, ["verify", "macmahon", "--k", "1", "--caps", "q=5", "--perturb"])
        assert result.exit_code == 1
        assert "first difference at" in result.stdout

    def test_numeric_inconclusive(self, runner):
        """Caps too small for the requested tol exit 3."""
        result = runner.invoke(app, ["verify", "vpv-numeric", "--caps", "2", "--tol", "1e-9"])
        assert result.exit_code == 3

    def test_bad_tolerance(self, runner):
        result = runner.invoke(app, ["verify", "vpv-numeric", "--tol", "abc"])
        assert result.exit_code == 2

    def test_bad_weights(self, runner):
        """Weights must sum to 1."""
        result = runner.invoke(app, ["verify", "vpv-numeric", "--b", "0.5,0.6"])
        assert result.exit_code == 2

    def test_unknown_identity(self, runner):
        result = runner.invoke(app, ["verify", "riemann"])
        assert result.exit_code == 2

    def test_unknown_cap_variable(self, runner):
        result = runner.invoke(app, ["verify", "qbinom", "--caps", "z=3"])
        assert result.exit_code == 2

    def test_caps_from_environment(self, runner, monkeypatch):
        """QLATTICE_CAPS applies when --caps is absent."""
        monkeypatch.setenv(CAPS_ENV, "q=4,t=5")
        result = runner.invoke(app, ["verify", "binary-weights", "--json"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["caps"] == {"q": 4, "t": 5}


class TestExpand:
    def test_binary_lhs(self, runner):
        result = runner.invoke(app, ["expand", "--product", "binary-lhs", "--caps", "q=1,t=1"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1 + q*t"

    def test_a_equal_one(self, runner):
        """(1 - a) kills every t^k term."""
        result = runner.invoke(app, ["expand", "--product", "f1", "--a", "1", "--caps", "3"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "1"

    def test_json(self, runner):
        result = runner.invoke(app, ["expand", "--product", "qbinom-sum", "--caps", "q=2,a=1,t=1", "--json"])
        assert result.exit_code == 0
        doc = json.loads(result.stdout)
        assert doc["vars"] == ["q", "a", "t"]
        assert doc["caps"] == [2, 1, 1]

    def test_macmahon(self, runner):
        """--k 0 is the unlimited-row form: plane partition counts."""
        result = runner.invoke(app, ["expand", "--product", "macmahon", "--k", "0", "--caps", "q=3"])
        assert result.stdout.strip() == "1 + q + 3*q^2 + 6*q^3"

    def test_unknown_product(self, runner):
        result = runner.invoke(app, ["expand", "--product", "zeta"])
        assert result.exit_code == 2

    def test_bad_rational(self, runner):
        result = runner.invoke(app, ["expand", "--product", "f1", "--a", "1/0"])
        assert result.exit_code == 2


class TestDet:
    def test_constant_a(self, runner):
        result = runner.invoke(app, ["det", "--family", "constant-a", "--k", "3"])
        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "det = 2*a + 3*a^2 + a^3",
            "det/3! = 1/3*a + 1/2*a^2 + 1/6*a^3",
        ]

    def test_powers_a(self, runner):
        result = runner.invoke(app, ["det", "--family", "powers-a", "--k", "4"])
        assert result.stdout.splitlines()[0] == "det = 24*a^4"

    def test_pyramid(self, runner):
        """Pyramid power sums with z carried by the matrix order."""
        result = runner.invoke(app, ["det", "--family", "pyramid", "--k", "4", "--caps", "y=4"])
        assert result.stdout.splitlines()[0] == "det = 24 + 26*y + 17*y^2 + 6*y^3"

    def test_json(self, runner):
        result = runner.invoke(app, ["det", "--family", "powers-a", "--k", "2", "--json"])
        doc = json.loads(result.stdout)
        assert doc["family"] == "powers-a"
        assert doc["det"]["terms"] == [{"e": [2], "n": "2", "d": "1"}]

    def test_order_out_of_range(self, runner):
        result = runner.invoke(app, ["det", "--family", "pyramid", "--k", "9"])
        assert result.exit_code == 2


class TestCompare:
    @pytest.fixture
    def saved(self, tmp_path):
        q = VarTable(("q",), (3,)).var("q")

        def write(name, f):
            path = tmp_path / name
            path.write_text(dumps(f))
            return str(path)
        return q, write

    def test_equal_files(self, runner, saved):
        q, write = saved
        result = runner.invoke(app, ["compare", write("a.json", 1 + q), write("b.json", q + 1)])
        assert result.exit_code == 0
        assert "status:   PASS" in result.stdout

    def test_different_files(self, runner, saved):
        q, write = saved
        result = runner.invoke(app, ["compare", write("a.json", 1 + q), write("b.json", 1 + 2 * q)])
        assert result.exit_code == 1
        assert "first difference at q: a.json=1, b.json=2" in result.stdout

    def test_ring_mismatch(self, runner, saved):
        q, write = saved
        other = VarTable(("q",), (4,)).var("q")
        result = runner.invoke(app, ["compare", write("a.json", q), write("b.json", other)])
        assert result.exit_code == 2

    def test_missing_file(self, runner, saved, tmp_path):
        q, write = saved
        result = runner.invoke(app, ["compare", write("a.json", q), str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_round_trip_through_expand(self, runner, tmp_path):
        """Output of expand --json is accepted as compare input."""
        out = runner.invoke(app, ["expand", "--product", "binary-lhs", "--caps", "q=4,t=4", "--json"])
        rhs = runner.invoke(app, ["expand", "--product", "binary-rhs", "--caps", "q=4,t=4", "--json"])
        (tmp_path / "lhs.json").write_text(out.stdout)
        (tmp_path / "rhs.json").write_text(rhs.stdout)
        result = runner.invoke(app, ["compare", str(tmp_path / "lhs.json"), str(tmp_path / "rhs.json"), "--json"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["status"] == "pass"


class TestPointsAndPartitions:
    def test_vpv_points(self, runner):
        result = runner.invoke(app, ["vpv-points", "--region", "hyperquadrant", "--bounds", "3,3"])
        assert result.exit_code == 0
        assert json.loads(result.stdout) == [[1, 1], [1, 2], [1, 3], [2, 1], [2, 3], [3, 1], [3, 2]]

    def test_bad_region(self, runner):
        result = runner.invoke(app, ["vpv-points", "--region", "cube", "--bounds", "3,3"])
        assert result.exit_code == 2

    def test_plane(self, runner):
        result = runner.invoke(app, ["partitions", "plane", "--n", "5"])
        assert result.stdout.strip() == "n=5 count=24"

    def test_plane_by_trace(self, runner):
        result = runner.invoke(app, ["partitions", "plane", "--n", "3", "--trace", "1", "--json"])
        assert json.loads(result.stdout)["count"] == 3

    def test_vector(self, runner):
        result = runner.invoke(app, ["partitions", "vector", "--target", "1,1", "--json"])
        assert json.loads(result.stdout)["count"] == 2

    def test_integer(self, runner):
        result = runner.invoke(app, ["partitions", "integer", "--n", "5"])
        assert result.stdout.strip() == "n=5 count=7"

    def test_count_b(self, runner):
        result = runner.invoke(app, ["partitions", "count-b", "--j", "3", "--k", "6", "--json"])
        assert json.loads(result.stdout) == {"coefficient": 2, "distinct": 2, "j": 3, "k": 6, "unrestricted": 2}
