import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from isotonic import exact
from isotonic.cli import main
from isotonic.model import PotentialParams, solvability_gate, solvable_a


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestSpectrum:
    def test_reference_rows(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--B2", "0", "--d", "3", "--ell", "0", "--omega", "1", "--a2", "0.5", "--n-max", "2")
        assert code == 0
        got = [(int(r["n"]), float(r["k"]), float(r["eps_shifted"]), float(r["E_unshifted"])) for r in rows(out)]
        assert got == [(0, 0, 6, 3), (1, 0, 10, 7), (2, 0, 14, 11)]

    def test_gate_rejection(self, capsys):
        code, out, err = run(capsys, "spectrum", "--g", "1")
        assert code == 2 and out == ""
        assert "g=2" in err and "omega*a^2=k+1/2" in err and "nearest solvable a" in err

    def test_wrong_a_rejected(self, capsys):
        code, _, err = run(capsys, "spectrum", "--a2", "0.7")
        assert code == 2 and "a2=0.5" in err

    def test_degenerate_tables(self, capsys):
        _, a, _ = run(capsys, "spectrum", "--d", "5", "--ell", "0", "--n-max", "6")
        _, b, _ = run(capsys, "spectrum", "--d", "3", "--ell", "1", "--n-max", "6")
        assert a == b

    def test_a_flag_squared(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--a", str(math.sqrt(0.5)), "--n-max", "0")
        assert code == 0 and rows(out)[0]["eps_shifted"] == "6"

    def test_a_and_a2_exclusive(self, capsys):
        code, _, _ = run(capsys, "spectrum", "--a", "1", "--a2", "1")
        assert code == 2

    def test_invalid_dimension(self, capsys):
        code, _, err = run(capsys, "spectrum", "--d", "1")
        assert code == 2 and "d must be" in err

    def test_json(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--format", "json", "--n-max", "1")
        data = json.loads(out)
        assert code == 0 and data["rows"][1]["eps_shifted"] == 10


class TestWavefunction:
    def test_shape_n0(self, capsys):
        code, out, _ = run(capsys, "wavefunction", "--n", "0", "--samples", "60")
        assert code == 0
        r = np.array([float(x["r"]) for x in rows(out)])
        phi = np.array([float(x["phi"]) for x in rows(out)])
        ratio = phi / (r * (3 + 2 * r * r) * np.exp(-r * r / 2) / (r * r + 0.5))
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)

    def test_single_node_n1(self, capsys):
        _, out, _ = run(capsys, "wavefunction", "--n", "1", "--samples", "400")
        phi = np.array([float(x["phi"]) for x in rows(out)])
        phi = phi[np.abs(phi) > 1e-10 * np.abs(phi).max()]
        assert np.sum(np.signbit(phi[1:]) != np.signbit(phi[:-1])) == 1

    def test_norm_header(self, capsys):
        _, out, _ = run(capsys, "wavefunction", "--n", "3", "--d", "4", "--B2", "2", "--omega", "2")
        header = out.splitlines()[0]
        assert header.startswith("# norm=")
        assert float(header.split("=")[1]) == pytest.approx(1, abs=1e-8)

    def test_csv_round_trip(self, capsys, tmp_path):
        path = tmp_path / "wf.csv"
        code, _, _ = run(capsys, "wavefunction", "--n", "2", "--d", "2", "--ell", "1", "--omega", "0.5", "--out", str(path))
        assert code == 0
        data = rows(path.read_text())
        r = np.array([float(x["r"]) for x in data])
        phi = np.array([float(x["phi"]) for x in data])
        p = PotentialParams(d=2, ell=1, omega=0.5, a=solvable_a(0.0, 2, 1, 0.5))
        e = solvability_gate(p)
        np.testing.assert_allclose(exact.isotonic_wavefunction(e, 0.5, p.a, 2)(r), phi, rtol=1e-12, atol=1e-300)

    def test_n_limit(self, capsys):
        code, _, _ = run(capsys, "wavefunction", "--n", "13")
        assert code == 2


class TestPartner:
    def test_reference_row(self, capsys):
        _, out, _ = run(capsys, "partner", "--r-min", "1", "--r-max", "2", "--samples", "3")
        first = rows(out)[0]
        assert float(first["V1"]) == pytest.approx(1 + 4 * 0.5 / 2.25 + 3, rel=1e-15)
        assert float(first["V1"]) == pytest.approx(44 / 9, rel=1e-15)
        assert float(first["V2"]) == pytest.approx(6, rel=1e-15)
        assert float(first["W"]) == pytest.approx(7 / 3, rel=1e-15)

    def test_asymptotic_offset(self, capsys):
        _, out, _ = run(capsys, "partner", "--omega", "1.5", "--d", "4", "--r-min", "1e4", "--r-max", "4e4", "--samples", "4")
        for row in rows(out):
            assert float(row["V1"]) - float(row["V2"]) == pytest.approx(-3.0, abs=1e-7)

    def test_v2_has_no_rational_term(self, capsys):
        _, out, _ = run(capsys, "partner", "--d", "3", "--ell", "1", "--omega", "2")
        k = 1.0
        for row in rows(out):
            r = float(row["r"])
            assert float(row["V2"]) == pytest.approx(k * (k - 1) / r**2 + 4 * r * r + 2 * (2 * k + 5), rel=1e-14)


@pytest.fixture(scope="module")
def default_verify(tmp_path_factory):
    path = tmp_path_factory.mktemp("verify") / "report.json"
    code = main(["verify", "--format", "json", "--out", str(path)])
    return code, json.loads(path.read_text())


class TestVerify:
    def test_default_sweep_passes(self, default_verify):
        code, report = default_verify
        assert code == 0
        assert report["summary"]["pass"] is True
        assert all(c["gap"] < 1e-6 for c in report["cases"])

    def test_schema(self, default_verify):
        _, report = default_verify
        assert set(report) >= {"version", "cases", "summary"}
        assert set(report["summary"]) >= {"max_gap", "max_gram_dev", "pass"}
        assert set(report["cases"][0]) >= {"params", "n", "gap", "overlap"}
        assert len(report["cases"]) == 12 * 5

    def test_scope_note(self, default_verify):
        _, report = default_verify
        assert "odd" in report["scope"] and "n=0" in report["scope"]

    def test_injected_error_fails(self, capsys):
        code, _, err = run(capsys, "verify", "--no-default-sweep", "--d", "3", "--ell", "1", "--omega", "2",
                           "--inject-energy-error", "1e-3", "--grid-points", "2000")
        assert code == 1
        assert "B2=0,d=3,ell=1,omega=2" in err

    def test_user_case_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "--no-default-sweep", "--B2", "0.7", "--d", "3", "--omega", "1.3", "--n-max", "2")
        assert code == 0
        assert out.startswith("# pass=true")
        assert len(rows(out)) == 3

    def test_unsolvable_user_case(self, capsys):
        code, _, _ = run(capsys, "verify", "--no-default-sweep", "--g", "1.5")
        assert code == 2

    def test_nothing_to_do(self, capsys):
        code, _, _ = run(capsys, "verify", "--no-default-sweep")
        assert code == 2


def test_check_identities(capsys):
    code, out, _ = run(capsys, "check-identities", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"] and len(data["identities"]) == 7


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "isotonic", "spectrum", "--n-max", "0"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "0,0,6,3"


def test_missing_subcommand(capsys):
    assert main([]) == 2
