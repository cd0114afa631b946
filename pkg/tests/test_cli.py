import json
import subprocess
import sys

import pytest

from twistfree.avoidance import FreenessReport, RepetitionQuery, theorem_campaign
from twistfree.cli import main
from twistfree.reports import render_report
from twistfree.repetition import Occurrence
from twistfree.words import Permutation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate(capsys):
    assert run(capsys, "generate", "--N", "3", "--j", "1", "--seed", "a", "--length", "8")[:2] == (0, "abbcbcca\n")


def test_twist(capsys):
    assert run(capsys, "twist", "--N", "3", "--j", "1", "--input-word", "ab")[:2] == (0, "bc\n")
    assert run(capsys, "twist", "--N", "3", "--j", "2", "--input-word", "ab")[:2] == (0, "ca\n")


def test_scan_free(capsys):
    code, out, _ = run(capsys, "scan", "--k", "3", "--j", "2", "--N", "3", "--length", "4096", "--m-max", "64")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "start\tm\tk\tj\tN"
    assert len(lines) == 2 and lines[1].startswith("# free within range")


def test_scan_row_format(capsys):
    code, out, _ = run(capsys, "scan", "--N", "3", "--j", "1", "--length", "9", "--m-max", "3")
    assert code == 0
    assert out.splitlines()[1] == "6\t1\t3\t1\t3"


def test_scan_naive_matches_fast(capsys):
    args = ["scan", "--N", "3", "--j", "1", "--length", "300", "--m-max", "40"]
    fast = run(capsys, *args)[1]
    naive = run(capsys, *args, "--algorithm", "naive")[1]
    assert fast == naive


def test_scan_input_word(capsys, tmp_path):
    (tmp_path / "w.txt").write_text("babbccab\n")
    code, out, _ = run(capsys, "scan", "--N", "3", "--j", "1", "--input", str(tmp_path / "w.txt"))
    assert code == 0
    assert out.splitlines()[1:3] == ["5\t1\t3\t1\t3", "1\t2\t3\t1\t3"]


def test_invalid_config_exit_2(capsys):
    code, _, err = run(capsys, "generate", "--length", "8")
    assert code == 2 and "--N" in err
    code, _, err = run(capsys, "scan", "--N", "3", "--length", "10", "--k", "1")
    assert code == 2 and "--k" in err
    code, _, err = run(capsys, "generate", "--N", "3", "--seed", "e", "--length", "4")
    assert code == 2 and "--seed" in err
    code, _, err = run(capsys, "twist", "--N", "3", "--input-word", "abd")
    assert code == 2 and "position 2" in err
    code, _, err = run(capsys, "scan", "--N", "3", "--sigma", "(0 1", "--length", "9")
    assert code == 2 and "--sigma" in err
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--format", "xml"])
    assert exc.value.code == 2


def test_unreadable_input(capsys, tmp_path):
    code, _, err = run(capsys, "scan", "--N", "3", "--input", str(tmp_path / "missing.txt"))
    assert code == 1 and "I/O error" in err


def test_j_zero_warns(capsys, caplog):
    code, out, _ = run(capsys, "scan", "--N", "3", "--j", "3", "--length", "64", "--k", "2", "--m-max", "4")
    assert code == 0
    assert "identity" in caplog.text
    assert "\t0\t3" in out


def test_sigma_flag(capsys):
    code, out, _ = run(capsys, "generate", "--N", "3", "--sigma", "(0 2 1)", "--length", "8")
    assert out == "accbcbba\n"  # a -> ac -> accb -> accbcbba


def test_campaign_json(capsys):
    code, out, _ = run(
        capsys, "campaign", "--N-values", "3", "--j-policy", "all_j", "--length", "4096", "--m-max", "128",
        "--format", "json", "--no-timestamp",
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"tool_version", "params", "generated_at", "body"}
    assert doc["generated_at"] is None
    cells = doc["body"]["cells"]
    assert [(c["N"], c["j"]) for c in cells] == [(3, 1), (3, 2)]
    assert cells[1]["occurrences"] == []
    assert {"start": 6, "m": 1, "k": 3} in cells[0]["occurrences"]


def test_timestamp_present_by_default(capsys):
    out = run(capsys, "audit3", "--N", "3", "--length", "64", "--format", "json")[1]
    assert json.loads(out)["generated_at"]


def test_complexity_tsv(capsys):
    code, out, _ = run(capsys, "complexity", "--N", "2", "--length", "4096", "--k-max", "16", "--window", "4:5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k\tp(k)\tstable"
    assert [l.split("\t")[1] for l in lines[1:6]] == ["2", "4", "6", "10", "12"]
    assert any(l.startswith("# fit window=4..5 slope=2") for l in lines)
    code, _, err = run(capsys, "complexity", "--N", "2", "--length", "64", "--k-max", "40", "--window", "8:40")
    assert code == 2 and "--window" in err


def test_descend(capsys):
    code, out, _ = run(capsys, "descend", "--N", "3", "--j", "1", "--length", "64", "--m-max", "8")
    assert code == 0
    rows = [l.split("\t") for l in out.splitlines()[1:] if not l.startswith("#")]
    assert ["6", "1", "3", "0", "0", "-", "-"] in rows
    assert ["12", "2", "3", "0", "1", "c|a|b", "1"] in rows
    code, _, err = run(capsys, "descend", "--N", "3", "--j", "1", "--length", "64", "--start", "0", "--m", "1")
    assert code == 2


def test_audit3(capsys):
    code, out, _ = run(capsys, "audit3", "--N", "3", "--length", "1024")
    assert code == 0
    assert "abb\t0\t0" in out.splitlines()
    assert "abc\t7\t1" in out.splitlines()


def test_generate_binary_file(tmp_path, capsys):
    path = tmp_path / "w.bin"
    assert run(capsys, "generate", "--N", "3", "--length", "16", "--binary", "--output", str(path))[0] == 0
    raw = path.read_bytes()
    assert raw[:8] == (16).to_bytes(8, "little") and len(raw) == 24
    code, out, _ = run(capsys, "scan", "--N", "3", "--j", "1", "--input", str(path), "--m-max", "2")
    assert out.splitlines()[1] == "6\t1\t3\t1\t3"


def test_recheck_roundtrip(tmp_path, capsys):
    tsv = tmp_path / "scan.tsv"
    js = tmp_path / "camp.json"
    run(capsys, "scan", "--N", "3", "--j", "1", "--length", "2048", "--m-max", "32", "--output", str(tsv))
    run(capsys, "campaign", "--N-values", "3,4", "--j-policy", "all_j", "--length", "1024", "--m-max", "32",
        "--format", "json", "--output", str(js))
    for path in (tsv, js):
        code, out, _ = run(capsys, "verify", "--recheck", str(path))
        assert code == 0 and "0 failed" in out
    rows = tsv.read_text().splitlines()
    rows.insert(1, "0\t1\t3\t1\t3")
    tsv.write_text("\n".join(rows) + "\n")
    code, _, err = run(capsys, "verify", "--recheck", str(tsv))
    assert code == 3 and "FAILED 0\t1\t3\t1\t3" in err


def test_empty_freeness_report_tsv():
    rep = FreenessReport(RepetitionQuery(3, Permutation.cyclic_shift(3, 2), 64), 4096, ())
    lines = render_report(rep, "tsv").splitlines()
    assert lines == ["start\tm\tk\tj\tN", "# free within range (word_length=4096 k=3 m=1..64)"]


def test_occurrence_row_format():
    rep = FreenessReport(RepetitionQuery(3, Permutation.cyclic_shift(3, 1), 3), 9, (Occurrence(6, 1, 3),))
    assert render_report(rep, "tsv").splitlines()[1] == "6\t1\t3\t1\t3"


def test_campaign_json_two_cells_sorted():
    rep = theorem_campaign([4, 3], "theorem_only", 256, 16)
    body = json.loads(render_report(rep, "json", timestamp=False))["body"]
    assert [(c["N"], c["j"]) for c in body["cells"]] == [(3, 2), (4, 2), (4, 3)]
    rep = theorem_campaign([3], "all_j", 256, 16)
    body = json.loads(render_report(rep, "json", timestamp=False))["body"]
    assert len(body["cells"]) == 2


def test_cli_byte_determinism(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"c{i}.json"
        subprocess.run(
            [sys.executable, "-m", "twistfree.cli", "campaign", "--N-values", "3,4", "--j-policy", "all_j",
             "--length", "2048", "--m-max", "64", "--format", "json", "--no-timestamp", "--output", str(target)],
            check=True,
            env={"TW_THREADS": str(1 + 3 * i), "PATH": ""},
        )
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
