import csv
import io

import pytest

from gridmul.cli import main


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    rc = main(["bench", "--n", "8", "--k", "8", "--m", "8", "--trials", "3", "--delta", "0.1",
               "--scenarios", "a,f", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert {(r["scenario"], r["method"]) for r in rows} == {("a", "grid"), ("a", "checksum"), ("f", "grid"), ("f", "checksum")}
    assert next(r for r in rows if r["scenario"] == "f" and r["method"] == "checksum")["rate"] == "−"


def test_bench_markdown_stdout(capsys):
    assert main(["bench", "--n", "8", "--k", "8", "--m", "8", "--trials", "2", "--format", "markdown",
                 "--scenarios", "c", "--methods", "grid"]) == 0
    assert capsys.readouterr().out.startswith("| scenario |")


def test_bad_config_exit_code(capsys):
    assert main(["bench", "--trials", "0"]) == 2
    assert "error" in capsys.readouterr().err
    # argparse rejects malformed values itself, with the same status
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--scenarios", "q"])
    assert exc.value.code == 2


def test_rank_sweep(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["rank-sweep", "--trials", "10", "--seed", "1", "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["s1", "s2", "s3", "t1", "t2", "t3", "rank"]
    assert len(rows) == 11 and all(r[-1] == "8" for r in rows[1:])


def test_demo(capsys):
    assert main(["demo", "--size", "5"]) == 0
    text = capsys.readouterr().out
    assert "outcome: corrected" in text and "row,col,old,new,e_hat" in text
    assert main(["demo", "--size", "2"]) == 2
