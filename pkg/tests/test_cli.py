import json

import pytest
from click.testing import CliRunner

from endokit.cli import main
from endokit.descent import DescentScenario
from endokit.endoscopy import EigenMultiset, EllipticDatumMeta
from endokit.rootsofunity import RootOfUnity


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def scenario_file(tmp_path):
    one = RootOfUnity.one()
    minus = RootOfUnity.minus_one()
    sc = DescentScenario(
        n=3,
        sizes=(1, 1),
        s0=EllipticDatumMeta(1, 0),
        q=3,
        eps_gl=(EigenMultiset.of([one]), EigenMultiset.of([minus])),
        eps_prime=EigenMultiset.of([one, one, one]),
        eps_dblprime=EigenMultiset.of([one]),
    )
    path = tmp_path / "scenario.json"
    path.write_text(sc.to_json())
    return str(path)


class TestEnumerationCommands:
    def test_levi_rows(self, runner):
        result = runner.invoke(main, ["levi", "--n", "2", "--format", "json"])
        assert result.exit_code == 0
        assert len(json.loads(result.output)) == 4

    def test_endo_rows(self, runner):
        result = runner.invoke(main, ["endo", "--m", "2", "--format", "json"])
        assert result.exit_code == 0
        assert len(json.loads(result.output)) == 3

    def test_eset_rows(self, runner):
        result = runner.invoke(main, ["eset", "--i", "2", "--format", "json"])
        assert result.exit_code == 0
        assert len(json.loads(result.output)) == 4

    def test_usage_error_exits_two(self, runner):
        result = runner.invoke(main, ["levi"])
        assert result.exit_code == 2
        result = runner.invoke(main, ["eset", "--m", "1"])
        assert result.exit_code == 2


class TestCoeffCommand:
    def test_nonstandard_half(self, runner):
        result = runner.invoke(
            main, ["coeff", "--kind", "c-nonstandard", "--n", "2", "--sizes", "1,1", "--m", "0", "--format", "json"]
        )
        assert result.exit_code == 0
        assert json.loads(result.output)[0]["value"] == "1/2"

    def test_nonstandard_one(self, runner):
        result = runner.invoke(
            main, ["coeff", "--kind", "c-nonstandard", "--n", "2", "--sizes", "1", "--m", "1", "--format", "json"]
        )
        assert json.loads(result.output)[0]["value"] == "1"

    def test_i_meta_trivial_case(self, runner):
        result = runner.invoke(
            main, ["coeff", "--kind", "i-meta", "--m", "2", "--s0", "1,1", "--format", "json"]
        )
        assert result.exit_code == 0
        assert json.loads(result.output)[0]["value"] == "1"

    def test_d_zero_on_degenerate(self, runner):
        result = runner.invoke(
            main,
            [
                "coeff", "--kind", "d", "--dim", "2",
                "--am", "1,0", "--al", "1,0", "--ar", "1,0;0,1",
                "--format", "json",
            ],
        )
        assert result.exit_code == 0
        assert json.loads(result.output)[0]["d_squared"] == "0"

    def test_domain_error_exits_three(self, runner):
        result = runner.invoke(
            main, ["coeff", "--kind", "d", "--dim", "2", "--am", "1,0,0", "--al", "1,0", "--ar", "1,0;0,1"]
        )
        assert result.exit_code == 3


class TestCorrespondCommand:
    def test_multiplicative(self, runner):
        result = runner.invoke(
            main,
            ["correspond", "--gamma-prime", "2,1,1/2", "--gamma-dblprime", "3,1,1/3", "--format", "json"],
        )
        assert result.exit_code == 0
        assert json.loads(result.output)[0]["image"] == "-3,-1/3,1/2,2"

    def test_lie(self, runner):
        result = runner.invoke(
            main,
            ["correspond", "--gamma-prime", "1,0,-1", "--gamma-dblprime", "2,0,-2", "--lie", "--format", "json"],
        )
        assert json.loads(result.output)[0]["image"] == "-2,-1,1,2"

    def test_invariant_violation_exits_three(self, runner):
        result = runner.invoke(
            main, ["correspond", "--gamma-prime", "2,1", "--gamma-dblprime", "1"]
        )
        assert result.exit_code == 3


class TestDescendCommand:
    def test_report(self, runner, scenario_file):
        result = runner.invoke(main, ["descend", "--scenario", scenario_file, "--format", "json"])
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert any("surviving" in r["detail"] for r in rows)

    def test_bad_file_exits_three(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 1, "sizes": [5], "m_prime": 0, "m_dblprime": 0, "q": 3, "eps_gl": [["0"]], "eps_prime": ["0"], "eps_dblprime": ["0"]}')
        result = runner.invoke(main, ["descend", "--scenario", str(bad)])
        assert result.exit_code == 3


class TestVerifyCommand:
    def test_small_campaign_passes(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main,
            ["verify", "--max-rank", "1", "--suites", "counts,goldens,nonstandard", "--out", str(out)],
        )
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["meta"]["all_passed"] is True
        assert payload["meta"]["complexity"]
        assert all(r["status"] == "pass" for r in payload["checks"])

    def test_fault_injection_fails_with_witness(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main,
            [
                "verify", "--max-rank", "1", "--suites", "descent",
                "--inject-fault", "corrupt-sbar0", "--out", str(out),
            ],
        )
        assert result.exit_code == 1
        payload = json.loads(out.read_text())
        bad = [r for r in payload["checks"] if r["status"] == "fail"]
        assert any(r["check"] == "sign-rule-vs-descent" for r in bad)
        assert any(r["witness"] for r in bad if r["check"] == "sign-rule-vs-descent")

    def test_report_deterministic_modulo_timings(self, runner, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            result = runner.invoke(
                main,
                ["verify", "--max-rank", "1", "--suites", "counts,torsion,diag-oracle", "--seed", "5", "--out", str(out)],
            )
            assert result.exit_code == 0
            payload = json.loads(out.read_text())
            payload.pop("timings")
            outs.append(json.dumps(payload, sort_keys=True))
        assert outs[0] == outs[1]

    def test_env_var_default_dir(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("ENDOKIT_OUT_DIR", str(tmp_path))
        result = runner.invoke(main, ["verify", "--max-rank", "1", "--suites", "goldens"])
        assert result.exit_code == 0
        assert (tmp_path / "verification-report.json").exists()
