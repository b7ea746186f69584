"""Integration tests for the poset-hdx command line."""

import json

import pytest

from poset_hdx.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main


@pytest.fixture
def delta4_json(tmp_path, facet_file):
    """Poset JSON of delta4 built through the CLI."""
    path = tmp_path / "delta4.json"
    assert main(["--quiet", "build", "--facets", str(facet_file), "--out", str(path)]) == EXIT_OK
    return path


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def _stderr_json(capsys):
    return json.loads(capsys.readouterr().err)


class TestBuild:
    """Tests for ``build``."""

    def test_facets(self, tmp_path, facet_file, capsys):
        """Test building delta4 from a facet file."""
        out = tmp_path / "built.json"
        code = main(["--quiet", "build", "--facets", str(facet_file), "--out", str(out)])
        assert code == EXIT_OK
        summary = _stdout_json(capsys)
        assert summary["level_sizes"] == [1, 5, 10, 10]
        assert summary["thickness"] == 2
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["origin"]["kind"] == "simplicial"
        assert "p" not in data

    def test_grassmannian(self, tmp_path, capsys):
        """Test building the subspaces of F_2^4."""
        out = tmp_path / "grass.json"
        code = main(
            ["--quiet", "build", "--grassmannian", "--q", "2", "--n", "4", "--d", "2",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        assert _stdout_json(capsys)["level_sizes"] == [1, 15, 35, 15]
        assert len(json.loads(out.read_text(encoding="utf-8"))["elements"]) == 66

    def test_posetify(self, tmp_path, capsys):
        """Test posetifying a single triangle over F_2."""
        facets = tmp_path / "triangle.facets"
        facets.write_text("1 2 3\n", encoding="utf-8")
        out = tmp_path / "triangle.json"
        code = main(
            ["--quiet", "build", "--facets", str(facets), "--posetify", "--q", "2",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        assert _stdout_json(capsys)["level_sizes"] == [1, 7, 7, 1]
        origin = json.loads(out.read_text(encoding="utf-8"))["origin"]
        assert origin == {"kind": "posetification", "q": 2, "facets": [[1, 2, 3]]}

    def test_jitter_writes_transitions(self, facet_file, capsys):
        """Test that jittered weights are written with their transitions."""
        code = main(["--quiet", "build", "--facets", str(facet_file), "--jitter", "0.05"])
        assert code == EXIT_OK
        data = _stdout_json(capsys)
        assert "p" in data
        assert data["origin"]["jitter"] == pytest.approx(0.05)

    @pytest.mark.parametrize(
        "argv",
        [
            ["build", "--grassmannian", "--q", "6", "--n", "4", "--d", "2"],
            ["build", "--grassmannian", "--q", "2", "--n", "4", "--d", "2", "--max-elements", "10"],
            ["build"],
            ["build", "--grassmannian", "--q", "2"],
        ],
    )
    def test_errors(self, argv, capsys):
        """Test that bad arguments and resource limits exit with 1."""
        assert main(["--quiet", *argv]) == EXIT_ERROR
        assert "\"error" in capsys.readouterr().err


class TestValidateAndCertify:
    """Tests for ``validate`` and ``certify``."""

    def test_validate(self, delta4_json, capsys):
        """Test validation of a built poset."""
        capsys.readouterr()
        assert main(["--quiet", "validate", str(delta4_json)]) == EXIT_OK
        assert _stdout_json(capsys) == {"valid": True, "violations": []}

    @pytest.mark.parametrize("lam, code", [("-0.24", EXIT_OK), ("-0.26", EXIT_FAILED)])
    def test_two_sided(self, delta4_json, capsys, lam, code):
        """Test a passing and a failing two-sided certificate."""
        capsys.readouterr()
        argv = ["--quiet", "certify", str(delta4_json), "--nu", "-0.34", "--lambda", lam]
        assert main(argv) == code
        data = _stdout_json(capsys)
        assert data["verdict"] is (code == EXIT_OK)
        assert data["properties"]["al"]["exact"] is True

    def test_eposet_auto(self, delta4_json, capsys):
        """Test the eposet certificate with the default bound."""
        capsys.readouterr()
        assert main(["--quiet", "certify", str(delta4_json), "--eposet", "auto"]) == EXIT_OK
        certificate = _stdout_json(capsys)["certificates"][0]
        assert certificate["params"]["constants"] == "fitted"



class TestVerifyAndReport:
    """Tests for ``verify``, ``report`` and ``spectrum``."""

    def test_verify_selected_steps(self, delta4_json, capsys):
        """Test a restricted suite run."""
        capsys.readouterr()
        argv = ["--quiet", "verify", str(delta4_json), "--only", "validation", "properties",
                "--trials", "5"]
        assert main(argv) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["success"] is True
        assert data["trials"] == 5

    def test_config_file_overrides_flags(self, tmp_path, delta4_json, capsys):
        """Test that config file keys win over flags."""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"trials": 4, "seed": 9}), encoding="utf-8")
        capsys.readouterr()
        argv = ["--quiet", "--config", str(config), "verify", str(delta4_json),
                "--only", "basic-localization", "--trials", "50"]
        assert main(argv) == EXIT_OK
        data = _stdout_json(capsys)
        assert (data["trials"], data["seed"]) == (4, 9)

    def test_report(self, tmp_path, delta4_json):
        """Test the Markdown report."""
        out = tmp_path / "report.md"
        argv = ["--quiet", "report", str(delta4_json), "--only", "validation", "alev-lau",
                "--out", str(out)]
        assert main(argv) == EXIT_OK
        text = out.read_text(encoding="utf-8")
        assert text.startswith("# delta4.json")
        assert "## alev_lau" in text

    def test_spectrum_and_dump(self, tmp_path, delta4_json, capsys):
        """Test the spectrum of M+_0 and its matrix dump."""
        dump = tmp_path / "walk.txt"
        capsys.readouterr()
        argv = ["--quiet", "spectrum", str(delta4_json), "--operator", "up-down", "--level", "0",
                "--dump-matrix", str(dump)]
        assert main(argv) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["operator"] == "M+_0"
        assert data["lambda_2"] == pytest.approx(0.375)
        assert (tmp_path / "walk.txt.index.json").exists()



@pytest.fixture
def bad_weights_json(tmp_path, delta4_json):
    """Delta4 with transition probabilities that do not sum to 1 per parent."""
    data = json.loads(delta4_json.read_text(encoding="utf-8"))
    data["p"] = {f"{child},{parent}": 0.6 for child, parent in data["covers"]}
    path = tmp_path / "bad-weights.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestExitCodes:
    """Tests for exit codes 1 (error) and 2 (failed verdict) and the stderr payload."""

    def test_missing_input(self, tmp_path, capsys):
        """Test that a missing poset file is an I/O error."""
        missing = tmp_path / "absent.json"
        assert main(["--quiet", "validate", str(missing)]) == EXIT_ERROR
        payload = _stderr_json(capsys)
        assert "absent.json" in payload["error"]

    def test_malformed_input(self, tmp_path, capsys):
        """Test that a file that is not JSON is reported as an invalid poset."""
        broken = tmp_path / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        assert main(["--quiet", "certify", str(broken), "--lambda", "0"]) == EXIT_ERROR
        payload = _stderr_json(capsys)
        assert payload["error_type"] == "InvalidPosetError"
        assert payload["details"]["path"] == str(broken)

    def test_non_pure_facets(self, tmp_path, capsys):
        """Test that facets of mixed sizes are rejected."""
        facets = tmp_path / "mixed.facets"
        facets.write_text("1 2 3\n4 5\n", encoding="utf-8")
        assert main(["--quiet", "build", "--facets", str(facets)]) == EXIT_ERROR
        payload = _stderr_json(capsys)
        assert payload["error_type"] == "NonPureError"
        assert payload["details"]["sizes"] == [2, 3]

    def test_element_cap(self, capsys):
        """Test that a Grassmannian above the element cap is refused."""
        argv = ["--quiet", "build", "--grassmannian", "--q", "2", "--n", "4", "--d", "2",
                "--max-elements", "65"]
        assert main(argv) == EXIT_ERROR
        payload = _stderr_json(capsys)
        assert payload["error_type"] == "ResourceLimitError"
        assert payload["details"]["count"] == 66

    def test_bad_tolerance(self, delta4_json, capsys):
        """Test that a nonpositive tolerance is a configuration error."""
        capsys.readouterr()
        argv = ["--quiet", "verify", str(delta4_json), "--tol-identity", "0"]
        assert main(argv) == EXIT_ERROR
        payload = _stderr_json(capsys)
        assert payload["error"]
        assert any("identity" in detail for detail in payload["details"])

    def test_validate_fails_on_bad_weights(self, bad_weights_json, capsys):
        """Test that invariant violations give exit code 2 and a report on stdout."""
        capsys.readouterr()
        assert main(["--quiet", "validate", str(bad_weights_json)]) == EXIT_FAILED
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["valid"] is False
        assert report["violations"]

    @pytest.mark.parametrize("command", ["verify", "report"])
    def test_suite_fails_on_bad_weights(self, bad_weights_json, capsys, command):
        """Test that a suite stopped by validation gives exit code 2."""
        capsys.readouterr()
        argv = ["--quiet", command, str(bad_weights_json), "--only", "validation", "properties"]
        assert main(argv) == EXIT_FAILED
        out = capsys.readouterr().out
        if command == "verify":
            assert json.loads(out)["success"] is False
        else:
            assert "**FAIL**" in out

    def test_certify_fails_at_tightened_bound(self, delta4_json, capsys):
        """Test that a bound tightened past the root link gives exit code 2."""
        capsys.readouterr()
        argv = ["--quiet", "certify", str(delta4_json), "--nu", "-0.3333343",
                "--lambda", "-0.250001"]
        assert main(argv) == EXIT_FAILED
        data = _stdout_json(capsys)
        assert data["verdict"] is False
        failing = [row["link"] for row in data["certificates"][0]["rows"] if not row["pass"]]
        assert failing == ["{}"]
