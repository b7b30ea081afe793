import json

import pytest

from racahlie.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wigner_values(capsys):
    code, out, _ = run(capsys, "wigner", "cg", "1/2", "1/2", "1/2", "-1/2", "0", "0")
    assert code == EXIT_OK
    assert out.strip() == "1/2*sqrt(2) ≈ 0.70711"
    assert run(capsys, "wigner", "sixj", "1", "1", "0", "1", "1", "1")[1].strip() == "-1/3 ≈ -0.33333"
    assert run(capsys, "wigner", "cg", "1", "0", "1", "0", "3", "0")[1].strip() == "0"


def test_wigner_bad_input_is_usage_error(capsys):
    assert run(capsys, "wigner", "cg", "0.5", "1/2", "1/2", "-1/2", "0", "0")[0] == EXIT_USAGE
    assert run(capsys, "wigner", "cg", "1/2", "3/2", "1/2", "-1/2", "0", "0")[0] == EXIT_USAGE


def test_commute_pair(capsys):
    code, out, _ = run(capsys, "commute", "pair", "--a", "0,1,0,1", "--b", "0,1,0,-1")
    assert code == EXIT_OK
    assert out.strip() == "1/10*sqrt(5) * W[0,1,0,0]"


def test_commute_pair_requires_both_labels(capsys):
    with pytest.raises(SystemExit) as info:
        main(["commute", "pair", "--a", "0,1,0,1"])
    assert info.value.code == EXIT_USAGE


def test_table_round_trip_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "table.json"
    assert run(capsys, "commute", "table", "-o", str(first))[0] == EXIT_OK
    data = json.loads(first.read_text())
    assert len(data["records"]) == 100
    assert data["config"]["convention"] == {"tilde_phase": True, "tilde_sign": -1}
    again = json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    assert again == first.read_text()
    second = tmp_path / "again.json"
    run(capsys, "commute", "table", "-o", str(second))
    assert second.read_bytes() == first.read_bytes()


def test_verify_pair(capsys):
    code, out, _ = run(capsys, "verify", "--pair", "0,3,0,1", "0,3,0,-1")
    assert code == EXIT_OK
    assert "verdict: equal" in out


def test_verify_pair_plain_convention_mismatch(capsys):
    code, out, _ = run(capsys, "verify", "--convention", "plain", "--pair", "0,1,0,1", "0,1,0,-1")
    assert code == 1
    assert "verdict: equal" not in out


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--preset", "sigma0-odd-k", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["type"] == "B2"
    assert data["dimension"] == 10 and data["rank"] == 2 and data["roots"] == 8
    assert data["cartan_matrix"] == [[2, -2], [-1, 2]]
    assert data["squared_length_ratio"] == "2"
    assert data["killing_nondegenerate"]


def test_classify_basis_file(tmp_path, capsys):
    basis = [[{"label": [0, 1, 0, q], "coeff": "1"}] for q in (-1, 0, 1)]
    path = tmp_path / "basis.json"
    path.write_text(json.dumps({"names": ["Jm", "J0", "Jp"], "elements": basis}))
    code, out, _ = run(capsys, "classify", "--basis", str(path), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["type"] == "A1"


def test_classify_open_basis_is_usage_error(tmp_path, capsys):
    basis = [[{"label": [0, 3, 0, q], "coeff": "1"}] for q in (-1, 1)]
    path = tmp_path / "open.json"
    path.write_text(json.dumps(basis))
    assert run(capsys, "classify", "--basis", str(path))[0] == EXIT_USAGE


def test_roots_emitters(capsys):
    code, out, _ = run(capsys, "roots", "--emit", "text")
    assert code == EXIT_OK and "type: B2" in out
    code, out, _ = run(capsys, "roots", "--emit", "svg")
    assert out.lstrip().startswith("<svg") and out.rstrip().endswith("</svg>")
    assert out.count("<line") >= 8 + 2
    code, out, _ = run(capsys, "roots", "--emit", "json")
    data = json.loads(out)
    assert data["type"] == "B2" and len(data["roots"]) == 8


def test_tensor_build_and_list(capsys):
    code, out, _ = run(capsys, "tensor", "build", "--sigma", "0", "--k", "1", "--pi", "0", "--q", "1")
    assert code == EXIT_OK
    assert out.startswith("# W[0,1,0,1] tilde(-) nnz=")
    code, out, _ = run(capsys, "tensor", "list")
    assert len(out.split()) == 100


def test_missing_input_is_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "classify", "--basis", str(tmp_path / "absent.json"))
    assert code == EXIT_IO
    assert "I/O error" in err


def test_unwritable_output_is_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, _ = run(capsys, "commute", "pair", "--a", "0,1,0,1", "--b", "0,1,0,-1", "-o", str(blocker / "x.txt"))
    assert code == EXIT_IO


def test_reference_document(tmp_path, capsys):
    path = tmp_path / "ref.md"
    assert run(capsys, "reference", "-o", str(path))[0] == EXIT_OK
    text = path.read_text()
    assert "J0" in text and "F3" in text
    assert "Jacobi" in text
