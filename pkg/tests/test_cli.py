import json
import subprocess
import sys

import pytest

from taukit.cli import main
from tests.conftest import KRONECKER_TEXT, LAMBDA3_TEXT, LOOP_TEXT, SS3_TEXT

CSTAR = "1-1-0,0-1-1,0-0-1,1-0-0"


@pytest.fixture()
def lambda3_file(tmp_path):
    path = tmp_path / "lambda3.alg"
    path.write_text(LAMBDA3_TEXT.format(p=101))
    return str(path)


@pytest.fixture()
def ss3_file(tmp_path):
    path = tmp_path / "ss3.alg"
    path.write_text(SS3_TEXT.format(p=101))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_info(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "info")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 5
    assert data["vertices"] == 3
    assert data["gldim"] == 2


def test_info_echo_spec_round_trip(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "info", "--echo-spec")
    assert code == 0
    data = json.loads(out)
    from taukit.algebra import parse_spec

    assert parse_spec(data["spec"]) == parse_spec(LAMBDA3_TEXT.format(p=101))


def test_indecs_with_oracle(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "--field", "2", "indecs", "--oracle")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 5
    assert data["oracle"]["matches_knitting"] is True


def test_indecs_loop_not_admissible(tmp_path, capsys):
    path = tmp_path / "loop.alg"
    path.write_text(LOOP_TEXT.format(p=5))
    code, out = run_cli(capsys, str(path), "indecs")
    assert code == 4
    assert json.loads(out)["error"] == "NotAdmissibleError"


def test_indecs_kronecker_limit(tmp_path, capsys):
    path = tmp_path / "kron.alg"
    path.write_text(KRONECKER_TEXT.format(p=2))
    code, out = run_cli(capsys, str(path), "--max-indec", "10", "--max-dim", "12", "indecs")
    assert code == 3
    assert json.loads(out)["error"] == "LimitExceededError"


def test_ar_dot(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "ar", "--dot")
    assert code == 0
    assert out.startswith("digraph AR {")


def test_ctcheck(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "ctcheck", "--gens", CSTAR)
    assert code == 0
    data = json.loads(out)
    assert data["is_cluster_tilting"] is True
    code, out = run_cli(capsys, lambda3_file, "ctcheck", "--gens", "1-1-0,0-1-1")
    data = json.loads(out)
    assert data["is_cluster_tilting"] is False
    assert data["violations"]


def test_ctfind_lambda3(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "ctfind", "--d", "2")
    assert code == 0
    data = json.loads(out)
    # exactly one 2-cluster-tilting subcategory exists
    assert data["subcategories"] == [["0-0-1", "1-0-0", "0-1-1", "1-1-0"]]


def test_torsion_enum(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "torsion", "enum", "--ct", CSTAR)
    assert code == 0
    data = json.loads(out)
    assert len(data["pairs"]) == 7


def test_tau2_enum(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "tau2", "enum", "--ct", CSTAR)
    assert code == 0
    data = json.loads(out)
    assert len(data["modules"]) == 8


def test_verify_theorem1_reports_witness(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "verify", "theorem1", "--ct", CSTAR)
    # the fixture falsifies the correspondence (see the S3+S1 witness)
    assert code == 2
    data = json.loads(out)
    assert data["ok"] is False
    assert data["counts"] == {"modules": 8, "pairs": 7}


def test_verify_theorem1_semisimple(ss3_file, capsys):
    code, out = run_cli(capsys, ss3_file, "verify", "theorem1",
                        "--ct", "1-0-0,0-1-0,0-0-1")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert data["counts"] == {"modules": 8, "pairs": 8}


def test_verify_determinism(lambda3_file, capsys):
    _, out1 = run_cli(capsys, lambda3_file, "verify", "theorem1", "--ct", CSTAR)
    _, out2 = run_cli(capsys, lambda3_file, "verify", "theorem1", "--ct", CSTAR)
    assert out1 == out2


def test_bad_generator_name(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "ctcheck", "--gens", "9-9-9")
    assert code == 4
    assert "error" in json.loads(out)


def test_missing_file(capsys):
    code, out = run_cli(capsys, "/nonexistent/path.alg", "info")
    assert code == 4


def test_output_file(lambda3_file, tmp_path, capsys):
    target = tmp_path / "report.json"
    code, _ = run_cli(capsys, lambda3_file, "--out", str(target), "info")
    assert code == 0
    assert json.loads(target.read_text())["dim"] == 5


def test_module_entry_point(lambda3_file):
    proc = subprocess.run(
        [sys.executable, "-m", "taukit", lambda3_file, "info"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim"] == 5


def test_ar_json_dump(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "ar")
    assert code == 0
    data = json.loads(out)
    assert len(data["modules"]) == 5
    assert data["tau"] == {"1": 0, "2": 1}
    assert all(len(a) == 3 for a in data["ar_arrows"])


def test_emit_report_empty_enumeration():
    from taukit.cli import emit_report

    assert emit_report({"pairs": []}) == '{\n  "pairs": []\n}\n'


def test_bundled_fixture_file(capsys):
    import os

    path = os.path.join(os.path.dirname(__file__), "..", "fixtures", "a3_zero_relation.alg")
    code, out = run_cli(capsys, path, "info")
    assert code == 0
    assert json.loads(out)["dim"] == 5


def test_torsion_enum_with_certificates(lambda3_file, capsys):
    code, out = run_cli(capsys, lambda3_file, "torsion", "enum", "--ct", CSTAR, "--certs")
    assert code == 0
    data = json.loads(out)
    pair = data["pairs"][0]
    assert set(pair["finiteness_certificates"]) == {"T_contra", "T_co", "F_contra", "F_co"}
    assert len(pair["canonical_sequences"]) == 4
