# Run tests: pytest -q
import io
import json
from pathlib import Path
import sys

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from cli.run import read_literal, run  # noqa: E402

TYPE_IV_A = "n=3; {0,1,2,4}"
TYPE_IV_B = "n=3; {3,5,6,7}"


def invoke(argv, stdin_text=""):
    out = io.StringIO()
    code = run(argv, stdin=io.StringIO(stdin_text), stdout=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_check_main_confirms_the_type_four_pair():
    code, out = invoke(["check", "--theorem", "main", "--A", TYPE_IV_A, "--B", TYPE_IV_B])
    assert code == 0
    (record,) = records(out)
    assert record["outcome"] == "confirmed"
    assert record["sumset_size"] == 7
    assert record["span_index"] == 8
    assert record["A"] == TYPE_IV_A


def test_vacuous_check_uses_the_vacuous_exit_code():
    argv = ["check", "--theorem", "main", "--A", "n=2; {0,1}", "--B", "n=2; {0,1}"]
    assert invoke(argv)[0] == 2
    assert invoke(["--vacuous-exit", "0"] + argv)[0] == 0


def test_check_asym_requires_k(capsys):
    code, _ = invoke(["check", "--theorem", "asym", "--A", TYPE_IV_A, "--B", TYPE_IV_B])
    assert code == 1
    assert "needs --k" in capsys.readouterr().err


def test_check_hp_reads_the_set_from_stdin():
    code, out = invoke(["check", "--theorem", "hp", "--A", "-"], stdin_text=TYPE_IV_A + "\n")
    assert code == 0
    assert records(out)[0]["outcome"] == "confirmed"


def test_literal_from_file(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text(TYPE_IV_A + "\n", encoding="utf-8")
    assert set(read_literal(f"@{path}", io.StringIO())) == {0, 1, 2, 4}
    code, out = invoke(["check", "--theorem", "main", "--A", f"@{path}", "--B", TYPE_IV_B])
    assert code == 0


def test_certify_then_check_cert(tmp_path, capsys):
    cert_path = tmp_path / "certs" / "pair.json"
    code, out = invoke(["certify", "--A", TYPE_IV_A, "--B", TYPE_IV_B, "--out", str(cert_path)])
    assert code == 0
    assert records(out)[0]["node_kinds"] == ["elementary"]
    assert "Saved certificate to" in capsys.readouterr().err

    code, out = invoke(["check-cert", "--A", TYPE_IV_A, "--B", TYPE_IV_B, "--cert", str(cert_path)])
    assert code == 0
    assert records(out)[0]["valid"] is True

    data = json.loads(cert_path.read_text(encoding="utf-8"))
    data["witness"]["g1"] ^= 1
    cert_path.write_text(json.dumps(data), encoding="utf-8")
    code, out = invoke(["check-cert", "--A", TYPE_IV_A, "--B", TYPE_IV_B, "--cert", str(cert_path)])
    assert code == 1
    assert records(out)[0]["valid"] is False
    assert "certificate rejected: elementary" in capsys.readouterr().err


def test_certify_without_small_sumset_is_vacuous():
    code, out = invoke(["certify", "--A", "n=2; {0,1}", "--B", "n=2; {0,2}"])
    assert code == 2
    assert records(out)[0]["certified"] is False


def test_malformed_certificate_file_is_an_error(tmp_path, capsys):
    cert_path = tmp_path / "bad.json"
    cert_path.write_text("{not json", encoding="utf-8")
    code, _ = invoke(["check-cert", "--A", TYPE_IV_A, "--B", TYPE_IV_B, "--cert", str(cert_path)])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_construct_tight_has_no_mismatches():
    code, out = invoke(["construct", "--family", "tight", "--k", "3", "--rank-f", "1"])
    assert code == 0
    (record,) = records(out)
    assert record["mismatches"] == []
    assert record["predicted"]["complement_span_index"] == 8


def test_construct_elementary_and_missing_arguments(capsys):
    code, out = invoke(["construct", "--family", "elementary", "--kind", "III", "--n", "3", "--h1", "1,2,4"])
    assert code == 0
    assert records(out)[0]["B"] == "n=3; {0,3,5,6,7}"
    assert invoke(["construct", "--family", "necessity", "--n", "3"])[0] == 1
    assert "usage error" in capsys.readouterr().err


def test_sweep_writes_the_report(tmp_path, capsys):
    out_path = tmp_path / "main_n3.json"
    code, out = invoke(["sweep", "--theorem", "main", "--n", "3", "--out", str(out_path)])
    assert code == 0
    (record,) = records(out)
    saved = json.loads(out_path.read_text(encoding="utf-8"))
    assert saved["pairs_satisfying_hypotheses"] == record["pairs_satisfying_hypotheses"] > 0
    assert saved["violations"] == []
    assert len(record["fingerprint"]) == 64
    assert "Saved main sweep report" in capsys.readouterr().err


def test_vacuous_sweep_exit_code():
    assert invoke(["sweep", "--theorem", "main", "--n", "2"])[0] == 2


def test_random_sweep_fingerprint_is_reproducible():
    argv = ["sweep", "--theorem", "hp", "--n", "5", "--mode", "random", "--budget", "300", "--seed", "4"]
    first, second = invoke(argv)[1], invoke(argv)[1]
    assert records(first)[0]["fingerprint"] == records(second)[0]["fingerprint"]


def test_classify_reports_the_elementary_type():
    code, out = invoke(["classify", "--A", TYPE_IV_A, "--B", TYPE_IV_B])
    assert code == 0
    record = records(out)[0]
    assert record["elementary"] == "IV"
    assert record["mu"] == 2
    assert record["kemperman_condition"] is True


def test_table_format():
    code, out = invoke(["--format", "table", "check", "--theorem", "main", "--A", TYPE_IV_A, "--B", TYPE_IV_B])
    assert code == 0
    assert "outcome" in out and "confirmed" in out


def test_parse_and_usage_errors(capsys):
    assert invoke(["check", "--theorem", "main", "--A", "n=3; {0,9}", "--B", TYPE_IV_B])[0] == 1
    assert "error:" in capsys.readouterr().err
    assert invoke(["check", "--theorem", "main", "--A", "n=2; {0}", "--B", TYPE_IV_B])[0] == 1
    assert "error:" in capsys.readouterr().err
    assert invoke(["check", "--theorem", "nonsense", "--A", TYPE_IV_A])[0] == 1
    assert "usage error" in capsys.readouterr().err
    assert invoke([])[0] == 1


def test_check_hp_rejects_a_second_set(capsys):
    code, out = invoke(["check", "--theorem", "hp", "--A", TYPE_IV_A, "--B", TYPE_IV_B])
    assert code == 1
    assert out == ""
    assert "usage error" in capsys.readouterr().err
