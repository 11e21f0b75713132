import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import bell_state, two_control_mixture
from netcoh.cli import main
from netcoh.linalg import matrix_to_json
from netcoh.reporting import canonical_dumps


def write_state(path, rho, dims=None):
    obj = matrix_to_json(rho.matrix if hasattr(rho, "matrix") else rho)
    if dims is not None:
        obj["dims"] = list(dims)
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def control_state_file(tmp_path):
    return write_state(tmp_path / "control.json", two_control_mixture(), (2, 2))


@pytest.fixture
def descriptor_file(tmp_path):
    desc = {
        "task": 2,
        "shots": 4000,
        "seed": 42,
        "unitary_a": matrix_to_json(np.eye(2, dtype=complex)),
        "unitary_b": {"qubits": 1, "gates": [{"name": "T", "targets": [0]}]},
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(desc))
    return str(path)


class TestCoherenceCommand:
    def test_correlated_control_report(self, control_state_file, capsys):
        assert main(["coherence", control_state_file]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rec_net"] == 1.0

    def test_product_state_report(self, tmp_path, capsys):
        rho = np.kron(np.diag([0.7, 0.3]), np.diag([0.6, 0.4]))
        path = write_state(tmp_path / "prod.json", rho, (2, 2))
        assert main(["coherence", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["rec_net"]) <= 1e-9

    def test_malformed_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert main(["coherence", str(bad)]) == 2

    def test_invalid_state_exits_3(self, tmp_path):
        path = write_state(tmp_path / "bad_state.json", np.eye(4, dtype=complex), (2, 2))
        assert main(["coherence", str(path)]) == 3

    def test_cut_and_basis_flags(self, tmp_path, capsys):
        path = write_state(tmp_path / "bell.json", bell_state(), (2, 2))
        basis = {"local_bases": [matrix_to_json(np.eye(2)), matrix_to_json(np.eye(2))]}
        basis_path = tmp_path / "basis.json"
        basis_path.write_text(json.dumps(basis))
        assert main(["coherence", path, "--cut", "0|1", "--basis", str(basis_path)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rec_net"] == 1.0

    def test_bad_cut_spec(self, tmp_path):
        path = write_state(tmp_path / "bell.json", bell_state(), (2, 2))
        assert main(["coherence", path, "--cut", "nonsense"]) == 2


class TestClassifyCommand:
    def test_bell_state_verdict(self, tmp_path, capsys):
        path = write_state(tmp_path / "bell.json", bell_state(), (2, 2))
        assert main(["classify", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["is_ppt"] is False
        assert payload["quantum_correlated"] is True

    def test_correlated_control_verdict(self, control_state_file, capsys):
        assert main(["classify", control_state_file]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["is_cc"] is True
        assert payload["rec_net_in_basis"] == 1.0

    def test_maximally_mixed_verdict(self, tmp_path, capsys):
        path = write_state(tmp_path / "mixed.json", np.eye(4, dtype=complex) / 4, (2, 2))
        assert main(["classify", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["is_product"] and payload["is_cc"]
        assert not payload["quantum_correlated"]

    def test_dims_default_to_qubit_factorization(self, tmp_path, capsys):
        path = write_state(tmp_path / "nodims.json", two_control_mixture())
        assert main(["classify", path]) == 0
        assert json.loads(capsys.readouterr().out)["is_cc"] is True

    def test_unsupported_dims_exit_2(self, tmp_path):
        path = write_state(tmp_path / "big.json", np.eye(8, dtype=complex) / 8, (2, 4))
        assert main(["classify", path]) == 2


class TestNdqc2Command:
    def test_runs_and_writes_reports(self, descriptor_file, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["ndqc2", descriptor_file, "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["task"] == 2 and report["seed"] == 42
        transcript = json.loads((out / "transcript.json").read_text())
        assert len(transcript) == 6
        assert not any(
            {m["sender"], m["receiver"]} == {"alice", "bob"} for m in transcript
        )
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 42 and descriptor_file in manifest["inputs"]

    def test_seed_reuse_is_byte_identical(self, descriptor_file, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["ndqc2", descriptor_file, "--out", str(out1)]) == 0
        assert main(["ndqc2", descriptor_file, "--out", str(out2)]) == 0
        assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
        assert (out1 / "transcript.json").read_bytes() == (out2 / "transcript.json").read_bytes()

    def test_injected_violation_exits_4(self, tmp_path):
        desc = {
            "task": 2,
            "shots": 100,
            "seed": 1,
            "unitary_a": matrix_to_json(np.eye(2)),
            "unitary_b": matrix_to_json(np.eye(2)),
            "inject_violation": "alice_to_bob",
        }
        path = tmp_path / "bad_run.json"
        path.write_text(json.dumps(desc))
        assert main(["ndqc2", str(path)]) == 4

    def test_malformed_descriptor_exits_2(self, tmp_path):
        path = tmp_path / "desc.json"
        path.write_text(json.dumps({"task": 2}))
        assert main(["ndqc2", str(path)]) == 2

    def test_unitary_file_reference(self, tmp_path, capsys):
        upath = tmp_path / "u.json"
        upath.write_text(json.dumps(matrix_to_json(np.eye(2, dtype=complex))))
        desc = {
            "task": 1,
            "shots": 400,
            "seed": 5,
            "unitary_a": "u.json",
            "unitary_b": "u.json",
        }
        dpath = tmp_path / "run.json"
        dpath.write_text(json.dumps(desc))
        assert main(["ndqc2", str(dpath)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rec_control"] == 2.0


class TestVerifyCommand:
    def test_small_suite_passes_with_csv(self, tmp_path, capsys):
        out = tmp_path / "verify"
        code = main(
            [
                "verify",
                "lemma1",
                "--ensemble-size",
                "0.05",
                "--out",
                str(out),
                "--format",
                "csv",
            ]
        )
        assert code == 0
        text = (out / "lemma1.csv").read_text()
        assert text.splitlines()[0] == "family,incoherent,index,strict"

    def test_unknown_suite_exits_2(self):
        assert main(["verify", "not-a-suite"]) == 2

    def test_json_rows_export(self, tmp_path):
        out = tmp_path / "verify"
        assert main(["verify", "isomorphism", "--ensemble-size", "0.05", "--out", str(out)]) == 0
        payload = json.loads((out / "isomorphism.json").read_text())
        assert payload["passed"] is True and payload["rows"]

    def test_worker_count_does_not_change_results(self, tmp_path, monkeypatch):
        out1, out2 = tmp_path / "w1", tmp_path / "w2"
        monkeypatch.setenv("NETCOH_WORKERS", "1")
        assert main(["verify", "thm4", "--ensemble-size", "0.04", "--out", str(out1)]) == 0
        monkeypatch.setenv("NETCOH_WORKERS", "2")
        assert main(["verify", "thm4", "--ensemble-size", "0.04", "--out", str(out2)]) == 0
        assert (out1 / "thm4.json").read_bytes() == (out2 / "thm4.json").read_bytes()


class TestDeterminism:
    def test_repeated_reports_identical(self, control_state_file, capsys):
        main(["coherence", control_state_file])
        first = capsys.readouterr().out
        main(["coherence", control_state_file])
        second = capsys.readouterr().out
        assert first == second

    def test_canonical_dumps_sorts_keys(self):
        assert canonical_dumps({"b": 1, "a": 2}) == '{"a":2,"b":1}'


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "netcoh.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "netcoh" in proc.stdout
