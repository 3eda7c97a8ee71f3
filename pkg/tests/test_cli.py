"""Command-line interface: payloads, exit codes, determinism."""

import json

import numpy as np
import pytest

from wcobloch import Classification, cli
from wcobloch.bloch import QReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


class TestClassifyCommand:
    def test_identity_bounded_not_compact(self, capsys):
        code, report = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                           "--psi", "1", "--phi", "z")
        assert code == 0
        assert report["result"]["bounded"] is True
        assert report["result"]["compact"] is False

    def test_dilation_compact(self, capsys):
        code, report = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                           "--psi", "1", "--phi", "dilation(0.5)")
        assert code == 0
        assert report["result"]["compact"] is True

    def test_not_a_selfmap_exits_2(self, capsys):
        code = cli.main(["classify", "--alpha", "1", "--beta", "1",
                         "--psi", "1", "--phi", "1.5*z"])
        assert code == 2
        assert "self-map" in capsys.readouterr().err

    def test_zero_weight_exits_2(self, capsys):
        code = cli.main(["classify", "--alpha", "1", "--beta", "1",
                         "--psi", "0", "--phi", "z"])
        assert code == 2

    def test_parse_error_exits_1(self, capsys):
        code = cli.main(["classify", "--alpha", "1", "--beta", "1",
                         "--psi", "1", "--phi", "z+"])
        assert code == 1

    def test_inconclusive_exits_3(self, capsys, monkeypatch):
        pts = np.array([0.0j])
        ones = np.array([1.0])
        evidence = QReport(points=pts, abs_phi=ones, q1_values=ones,
                           q2_values=ones, q3_values=ones, sup_q1=1.0,
                           sup_q2=1.0, sup_q3=1.0, tail=(),
                           shell_sups={"q1": (), "q2": (), "q3": ()})
        fake = Classification(alpha=1.0, beta=1.0, case="alpha=1",
                              bounded=True, compact=False, inconclusive=True,
                              notes=("synthetic",), evidence=evidence,
                              tolerances={})
        monkeypatch.setattr(cli, "classify", lambda *a, **kw: fake)
        code, report = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                           "--psi", "1", "--phi", "z")
        assert code == 3
        assert report["result"]["inconclusive"] is True

    def test_points_flag_controls_evidence_size(self, capsys):
        code, slim = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                         "--psi", "1", "--phi", "dilation(0.5)", "--grid-k", "8")
        assert "points" not in slim["result"]["evidence"]
        code, full = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                         "--psi", "1", "--phi", "dilation(0.5)", "--grid-k", "8",
                         "--points")
        assert len(full["result"]["evidence"]["points"]) > 1000


class TestNormCommand:
    def test_identity(self, capsys):
        code, report = run(capsys, "norm", "--alpha", "1", "--f", "z")
        assert code == 0
        assert report["result"]["norm"] == 1.0

    def test_square(self, capsys):
        code, report = run(capsys, "norm", "--alpha", "1", "--f", "z^2")
        assert report["result"]["norm"] == pytest.approx(0.7698, abs=1e-3)

    def test_constant_alpha_two(self, capsys):
        code, report = run(capsys, "norm", "--alpha", "2", "--f", "1")
        assert report["result"]["norm"] == 1.0


class TestPairCommand:
    def test_diagonal(self, capsys):
        code, report = run(capsys, "pair", "--alpha", "1", "--f", "z",
                           "--poly", "0,1")
        assert code == 0
        assert report["result"]["value"][0] == pytest.approx(0.25, abs=1e-12)

    def test_orthogonality(self, capsys):
        code, report = run(capsys, "pair", "--alpha", "1", "--f", "z",
                           "--poly", "1")
        assert abs(complex(*report["result"]["value"])) <= 1e-12

    def test_constant_alpha_two(self, capsys):
        code, report = run(capsys, "pair", "--alpha", "2", "--f", "1",
                           "--poly", "1")
        assert report["result"]["value"][0] == pytest.approx(0.25, abs=1e-12)

    def test_complex_coefficients(self, capsys):
        code, report = run(capsys, "pair", "--alpha", "1", "--f", "z",
                           "--poly", "0,0.5i")
        assert report["result"]["value"][1] == pytest.approx(-0.125, abs=1e-12)


class TestTestfnCommand:
    def test_family_f(self, capsys):
        code, report = run(capsys, "testfn", "--family", "f", "--alpha", "0.5",
                           "--w", "0.9")
        result = report["result"]
        assert code == 0
        assert abs(complex(*result["value"])) <= 1e-10
        assert complex(*result["derivative"]).real == pytest.approx(2.06474, abs=1e-5)
        assert result["identities_pass"] is True

    def test_family_h(self, capsys):
        code, report = run(capsys, "testfn", "--family", "h", "--alpha", "2",
                           "--w", "0.9")
        assert complex(*report["result"]["value"]).real == pytest.approx(
            5.26316, abs=1e-5)
        assert report["result"]["identities_pass"] is True

    def test_family_g_corrected(self, capsys):
        code, report = run(capsys, "testfn", "--family", "g", "--w", "0.99")
        assert complex(*report["result"]["value"]).real == pytest.approx(
            3.91703, abs=1e-5)
        assert report["result"]["identities_pass"] is True
        assert report["result"]["little_bloch"] is not None

    def test_family_g_as_printed_fails_identities(self, capsys):
        code, report = run(capsys, "testfn", "--family", "g", "--w", "0.99",
                           "--as-printed")
        assert code == 0
        assert complex(*report["result"]["value"]).real == pytest.approx(
            -18.935, abs=1e-3)
        assert report["result"]["identities_pass"] is False

    def test_family_f_needs_alpha(self, capsys):
        assert cli.main(["testfn", "--family", "f", "--w", "0.9"]) == 2

    def test_degenerate_g_centre_exits_2(self, capsys):
        assert cli.main(["testfn", "--family", "g", "--w", "0"]) == 2

    def test_complex_centre(self, capsys):
        code, report = run(capsys, "testfn", "--family", "f", "--alpha", "1",
                           "--w", "0.3-0.4i")
        assert code == 0 and report["result"]["identities_pass"] is True

    def test_nonconstant_centre_exits_1(self, capsys):
        assert cli.main(["testfn", "--family", "f", "--alpha", "1",
                         "--w", "z"]) == 1


class TestVerifyCommand:
    def test_single_suite_passes(self, capsys):
        code, report = run(capsys, "verify", "--suite", "lowerbound")
        assert code == 0
        assert report["result"]["all_passed"] is True

    def test_prop1_with_dimension_filter(self, capsys):
        code, report = run(capsys, "verify", "--suite", "prop1", "--d", "5")
        assert code == 0
        rows = report["result"]["suites"]["prop1"]["rows"]
        assert rows and all(row["d"] == 5 for row in rows)
        assert all(row["max_abs_deviation"] < 1e-10 for row in rows)

    def test_weaknull_with_alpha_filter(self, capsys):
        code, report = run(capsys, "verify", "--suite", "weaknull",
                           "--alpha", "0.5")
        payload = report["result"]["suites"]["weaknull"]["rows"][0]
        assert payload["certified"] is True
        pairings = [row["max_abs_pairing"] for row in payload["rows"]]
        assert pairings[-1] < 1e-2

    def test_failing_suite_exits_4(self, capsys, monkeypatch):
        monkeypatch.setitem(cli._SUITES, "sandwich",
                            lambda args: ([], ["sandwich: forced failure"]))
        code, report = run(capsys, "verify", "--suite", "sandwich")
        assert code == 4
        assert report["result"]["failures"] == ["sandwich: forced failure"]


class TestReportContract:
    def test_report_envelope(self, capsys):
        code, report = run(capsys, "norm", "--alpha", "1", "--f", "z")
        assert set(report) == {"config", "result", "version", "wall_time_s"}
        assert report["version"] == "0.1.0"
        assert report["config"]["command"] == "norm"
        assert report["config"]["f"] == "z"

    def test_determinism_excluding_wall_time(self, capsys):
        argv = ["classify", "--alpha", "1", "--beta", "1",
                "--psi", "z", "--phi", "blaschke(0.5)"]
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        first.pop("wall_time_s"), second.pop("wall_time_s")
        assert json.dumps(first) == json.dumps(second)

    def test_verify_determinism_with_seed(self, capsys):
        argv = ["verify", "--suite", "sandwich", "--d", "2", "--seed", "7"]
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert json.dumps(first["result"]) == json.dumps(second["result"])

    def test_out_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code = cli.main(["norm", "--alpha", "1", "--f", "z",
                         "--out", str(target)])
        assert code == 0
        assert capsys.readouterr().out == ""
        report = json.loads(target.read_text())
        assert report["result"]["norm"] == 1.0
