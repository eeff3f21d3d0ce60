import io
import json
import subprocess
import sys

import pytest

from schreier.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def doc(*argv):
    code, text = call(*argv)
    assert code == 0, text
    data = json.loads(text)
    assert data["schema"] == "v1" and data["citations"]
    return data


def test_family_commands():
    assert doc("family", "contains", "--fam", "S(1)", "--set", "3,5,9")["result"] is True
    assert doc("family", "maximal", "--fam", "F(3)", "--set", "2,5,9")["result"] is True
    assert doc("family", "decompose", "--fam", "S(1)", "--set", "2,3,4,5,6,7")["result"] == [[2, 3], [4, 5, 6, 7]]
    assert doc("family", "rank", "--fam", "F(2)", "--N", "4")["result"] == 3


def test_block_measure_sums_to_one():
    data = doc("block", "measure", "--block", "RA(2)", "--prefix", "2,3,4,5,6,7,8,9")
    assert data["result"]["4"] == "1/8" and data["total"] == "1"


def test_norm_commands():
    assert doc("norm", "eval", "--space", "T(mu=1,theta=1/2)", "--vec", "4:1,5:1,6:1,7:1")["value"] == "2"
    data = doc("norm", "dominate", "--space", "l2", "--vecs", "1:1;2:1;3:1;4:1", "--target", "inf")
    assert data["value"] == "2"


def test_witness_star_replays():
    data = doc("witness", "star", "--P", "S(1)", "--Q", "S(1)", "--M", "1,2,3,...", "--L", "1,2,3,...",
               "--K", "1,2,3,...", "--m", "2")
    assert data["result"]["F"] == [3, 4, 5] and data["validation"]["ok"]
    for cmd in data["replay"]:
        import shlex

        assert doc(*shlex.split(cmd))["result"] is True


def test_audit_goodness():
    data = doc("audit", "goodness", "--set", "2,4,5,7", "--vecs", "1:1;2:1;3:1;4:1;5:1;6:1;7:1;8:1")
    assert data["result"]["value"] == "2"


def test_csv_output():
    code, text = call("family", "contains", "--fam", "S(1)", "--set", "3,5,9", "--format", "csv")
    assert code == 0 and "result" in text and "true" in text.lower()


@pytest.mark.parametrize(
    "argv",
    [
        ("family", "contains", "--fam", "S(w+w^2)", "--set", "1"),
        ("family", "contains", "--fam", "nope", "--set", "1"),
        ("norm", "eval", "--space", "l0", "--vec", "1:1"),
        ("family", "frobnicate"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, _ = call(*argv)
    assert code == 2


def test_domain_errors_exit_1():
    code, text = call("family", "decompose", "--fam", "S(1)", "--set", "3,4")
    assert code == 1
    assert json.loads(text)["error"]


def test_output_is_byte_stable():
    argv = ["family", "decompose", "--fam", "S(1)", "--set", "2,3,4,5,6,7"]
    a = subprocess.run([sys.executable, "-m", "schreier", *argv], capture_output=True)
    b = subprocess.run([sys.executable, "-m", "schreier", *argv], capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_selftest_subset():
    code, text = call("selftest", "--only", "1,2")
    data = json.loads(text)
    assert code == 0 and data["ok"] and [r["id"] for r in data["rows"]] == [1, 2]
