import io
import json
import math
import subprocess
import sys

import pytest

from sgshift.cli import run
from sgshift.graph import serialize_sgraph
from sgshift.nset import NSet, parse_literal
from shift_zoo import PHI, directed_cycle, even_shift, golden_mean


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def gm(tmp_path):
    path = tmp_path / "gm.json"
    path.write_text(serialize_sgraph(golden_mean()))
    return path


def write(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(serialize_sgraph(g))
    return path


def test_entropy_command(gm):
    code, out, _ = call("entropy", gm, "--method", "spectral")
    doc = json.loads(out)
    assert code == 0
    assert doc["lambda_inv"] == pytest.approx(1.6180339887, abs=1e-9)
    assert doc["entropy_nat"] == pytest.approx(0.4812118, abs=1e-7)


@pytest.mark.parametrize("method", ["det", "cycles"])
def test_entropy_methods(gm, method):
    code, out, _ = call("entropy", gm, "--method", method)
    assert code == 0 and json.loads(out)["lambda_inv"] == pytest.approx(PHI, abs=1e-9)


def test_oracle_words(gm):
    code, out, _ = call("oracle", "words", gm, "-n", 3)
    assert code == 0
    assert out.splitlines() == ["000", "001", "010", "100", "101"]
    code, out, _ = call("oracle", "words", gm, "-n", 3, "--format", "json")
    assert json.loads(out)["count"] == 5


def test_oracle_periodic_and_estimate(gm):
    _, out, _ = call("oracle", "periodic", gm, "-n", 2)
    assert json.loads(out)["p_n"] == 3
    _, out, _ = call("oracle", "estimate", gm, "-n", 20)
    assert json.loads(out)["word_count"] == 17711


def test_construct_then_entropy(tmp_path):
    target = tmp_path / "k33.json"
    code, out, _ = call("construct", "--lambda", "3.7320508", "--out", target)
    assert code == 0 and target.exists()
    code, out, _ = call("entropy", target)
    doc = json.loads(out)
    assert code == 0
    assert doc["entropy_nat"] == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-6)
    assert doc["entropy_nat"] == pytest.approx(math.log(3.7320508), abs=1e-9)


def test_construct_spiced_fails_cleanly():
    code, _, err = call("construct", "--lambda", "2+sqrt(3)", "--flavor", "spiced")
    assert code == 1 and "spiced" in err


def test_family(tmp_path):
    code, out, _ = call("family", "--lambda", "2+sqrt(3)", "--seed", 3)
    doc = json.loads(out)
    assert code == 0 and doc["spec"] is True
    assert len(doc["graph"]["vertices"]) == 7
    assert doc["entropy"]["entropy_nat"] == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-7)


def test_props(gm, tmp_path):
    _, out, _ = call("props", gm)
    doc = json.loads(out)
    assert all(doc[k] for k in ("is_sft", "is_sofic", "is_mixing", "weak_spec", "spec"))
    assert doc["spec_constants"] == {"d": 1, "t": 1, "r": 1, "skipped_vertices": []}
    _, out, _ = call("props", write(tmp_path, "even.json", even_shift()))
    assert json.loads(out)["is_sft"] is False


def test_zeta_and_fingerprint(gm, tmp_path):
    _, out, _ = call("zeta", gm, "--order", 8)
    doc = json.loads(out)
    assert doc["zeta"] == [1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert doc["p"] == [1, 3, 4, 7, 11, 18, 29, 47]
    even = write(tmp_path, "even.json", even_shift())
    _, out, _ = call("fingerprint", gm, even, "--order", 8)
    assert json.loads(out)["comparison"] == "distinct"
    _, out, _ = call("fingerprint", gm, gm)
    assert json.loads(out)["comparison"] == "indistinguishable_at_order"


def test_series_order_env(gm, monkeypatch):
    monkeypatch.setenv("SGS_SERIES_ORDER", "5")
    _, out, _ = call("zeta", gm)
    assert json.loads(out)["order"] == 5


def test_op_and_lift(gm, tmp_path):
    target = tmp_path / "clone.json"
    code, out, _ = call("op", "clone", gm, "--vertex", "0", "--s1", "1", "--s2", "2+1k", "--out", target)
    doc = json.loads(out)
    assert code == 0 and doc["record"]["conjugacy"] == "yes"
    _, out, _ = call("entropy", target)
    assert json.loads(out)["lambda_inv"] == pytest.approx(PHI, abs=1e-9)
    code, out, _ = call("op", "out-split", target, "--vertex", "1", "--e1", "0", "--e2", "0'")
    assert code == 0 and json.loads(out)["record"]["kind"] == "out_split"
    code, out, _ = call("lift", gm, "-q", 3)
    assert code == 0 and len(json.loads(out)["graph"]["vertices"]) == 3


def test_builders(tmp_path):
    _, out, _ = call("builders", "s-gap", "--set", "0+2k")
    doc = json.loads(out)
    assert [NSet.from_json(v["set"]) for v in doc["vertices"]] == [parse_literal("2+2k"), NSet.naturals()]
    _, out, _ = call("builders", "unordered", "--set", "N;1;1,2")
    assert len(json.loads(out)["edges"]) == 6
    _, out, _ = call("builders", "ss-gap", "--set", "1,2", "--set-prime", "3")
    assert len(json.loads(out)["vertices"]) == 2


def test_crosscheck(gm):
    code, out, _ = call("crosscheck", gm, "-N", 8)
    assert code == 0 and all(json.loads(out)["checks"].values())


def test_human_format(gm):
    code, out, _ = call("entropy", gm, "--format", "human")
    assert code == 0 and "lambda_inv: 1.618" in out


def test_exit_codes(gm, tmp_path):
    assert call("bogus")[0] == 1
    assert call("entropy", gm, "--no-such-flag")[0] == 1
    assert call("entropy", tmp_path / "missing.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"name": "a", "set": "N"}], "edges": [["a", "a"]]}')
    code, _, err = call("entropy", bad)
    assert code == 1 and "loop" in err
    assert call("lift", write(tmp_path, "c.json", directed_cycle("1", "1")), "-q", 3)[0] == 1
    assert call("op", "clone", gm, "--vertex", "0")[0] == 1


def test_internal_error_exit_code(gm, monkeypatch):
    from sgshift import cli
    from sgshift.errors import InvariantError

    def boom(args):
        raise InvariantError("broken")

    monkeypatch.setitem(cli._COMMANDS, "entropy", boom)
    assert call("entropy", gm)[0] == 2


def test_deterministic_output(gm):
    assert call("zeta", gm, "--order", 10)[1] == call("zeta", gm, "--order", 10)[1]
    assert call("family", "--lambda", "phi", "--seed", 2)[1] == call("family", "--lambda", "phi", "--seed", 2)[1]


def test_console_script_module(gm):
    proc = subprocess.run(
        [sys.executable, "-c", "import sys; from sgshift.cli import main; sys.argv[0] = 'sgs'; main()", "oracle", "words", str(gm), "-n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.split() == ["00", "01", "10"]
