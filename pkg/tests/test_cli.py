import json
import subprocess
import sys

from tracering.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identity(capsys):
    code, out, _ = run(capsys, "identity", "-n", "2", "(12,3,4)")
    assert code == 0
    assert out.strip() == "[1234] + [1243] - [12][34] - [123][4] - [124][3] + [12][3][4]"


def test_identity_arity_error(capsys):
    code, out, err = run(capsys, "identity", "-n", "2", "(12,3)")
    assert code == 2 and out == "" and "takes 3 entries" in err


def test_identity_json_verify(capsys):
    code, out, _ = run(capsys, "identity", "-n", "1", "(1,2)", "--verify", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["vanishes"] and data["expansion"] == "[12] - [1][2]"


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--degrees", "6x10,5x9,4x9,3x11,2x6,1x3", "--dim", "19", "--a", "-27")
    assert (code, out.strip()) == (0, "82")
    assert run(capsys, "bound", "--generic", "3", "3")[1].strip() == "161"
    out = run(capsys, "bound", "--degrees", "6x10,5x9,4x9,3x11,2x6,1x3", "--a", "-27", "--hsop-degrees", "c33")[1]
    assert out.strip() == "27"


def test_bound_too_few_degrees(capsys):
    code, _, err = run(capsys, "bound", "--degrees", "2x3", "--dim", "5", "--a", "0")
    assert code == 2 and "dim+1" in err


def test_generators(capsys):
    code, out, err = run(capsys, "generators", "-n", "2", "-d", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 10
    assert data["multiplicities"] == {"1": 3, "2": 6, "3": 1}
    assert "generators (1, 1, 1): 1 new" in err  # progress goes to stderr


def test_reduce_example_columns(capsys):
    code, out, _ = run(capsys, "reduce", "-n", "2", "--columns", "example", "-q")
    assert code == 0
    assert "traceless: (1/2)[12][34] + (1/2)[123][4] - (1/2)[13][24] + (1/2)[14][23]" in out


def test_unsupported_n(capsys):
    assert run(capsys, "reduce", "-n", "4", "-q")[0] == 4


def test_cutoff_exit_code(capsys):
    assert run(capsys, "hilbert", "-n", "3", "-d", "3", "-k", "8", "-q")[0] == 5


def test_hilbert_check(capsys):
    code, out, _ = run(capsys, "hilbert", "-n", "2", "-d", "3", "-k", "7", "--check", "-q", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["agree"] and data["values"][:3] == [1, 3, 12]


def test_relations_json_identical_across_threads(capsys, monkeypatch):
    base = ["relations", "-n", "3", "-d", "3", "--max-degree", "7", "--from-degree", "7", "--format", "json", "-q"]
    one = run(capsys, *base, "--threads", "1")[1]
    monkeypatch.setenv("TRACERING_THREADS", "3")
    many = run(capsys, *base)[1]
    assert one == many
    assert json.loads(one)["counts"] == {"3,2,2": 1, "2,3,2": 1, "2,2,3": 1}


def test_certify_identical_across_threads(capsys):
    base = ["certify", "--data", "c33_relations.json", "--max-degree", "7", "--format", "json", "-q"]
    a = run(capsys, *base, "--threads", "1")
    b = run(capsys, *base, "--threads", "4")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    report = json.loads(a[1])
    assert report["summary"]["status"] == {"certified": 1}


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "tracering.cli", "identity", "-n", "1", "(1,2)"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "[12] - [1][2]"
