import json
import subprocess
import sys

import pytest

from doubling_lab.cli import main


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["bogus"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["multtable", "--n-list", "a,b"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["multtable", "--format", "xml"])
    assert err.value.code == 2
    assert main(["omega-stats", "--gap", "0;0:3"]) == 2
    assert "'0:3'" in capsys.readouterr().err
    assert main(["energy", "--set-file", "/nonexistent/file"]) == 2
    assert main(["multtable", "--n-list", "0"]) == 2


def test_gate_failure_exit_1(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["multtable", "--n-list", "100,10", "--out", str(out)]) == 1
    assert out.read_text().startswith("n,size,density\n")


def test_success_writes_file(tmp_path):
    out = tmp_path / "m.json"
    assert main(["multtable", "--n-list", "10,100", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert [r["size"] for r in doc["rows"]] == [42, 2906] and doc["gate"]["passed"] is True


def test_stdout_when_no_out(capsys):
    assert main(["sumset", "--n-list", "4"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "[1..4],4,7,9,7/4,9/4"


def test_console_script_runs(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run([sys.executable, "-m", "doubling_lab.cli", "sumset", "--n-list", "3", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().splitlines()[1].startswith("[1..3],3,5,6")
