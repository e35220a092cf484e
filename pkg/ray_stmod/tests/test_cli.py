import io
import json
import os

import pandas as pd
import pytest

from ray_stmod.cli import main
from ray_stmod.serialization import DATA_DIR, load_module

EXAMPLE = os.path.join(DATA_DIR, "c3xs3_cokernel.json")


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_decompose(capsys):
    code, out, _ = _run(capsys, ["decompose", "--group", "A4", "--field",
                                 "GF4"])
    assert code == 0
    d = json.loads(out)
    assert [p["dim"] for p in d["projectives"]] == [4, 4, 4]


def test_suspend(capsys):
    code, out, _ = _run(
        capsys, ["suspend", "--group", "C3", "--field", "GF3", "-n", "1"])
    assert code == 0
    assert json.loads(out) == {"n": 1, "input_dim": 1, "dim": 2}


def test_suspend_emits_module(capsys, tmp_path):
    path = str(tmp_path / "sigma.json")
    code, _, _ = _run(capsys, [
        "suspend", "--group", "C9", "--field", "GF3", "-n", "-1",
        "--emit-module", "--out", path
    ])
    assert code == 0
    with open(path) as f:
        d = json.load(f)
    assert d["dim"] == 8
    assert d["module"]["dim"] == 8


def test_check(capsys):
    code, out, _ = _run(capsys, ["check", "--in", EXAMPLE])
    assert code == 0
    d = json.loads(out)
    assert d["dim"] == 4
    assert d["fingerprint"] == load_module(EXAMPLE).fingerprint


def test_usage_errors(capsys):
    code, _, err = _run(capsys, [
        "suspend", "--in", EXAMPLE, "--group", "C3", "--field", "GF3", "-n",
        "1"
    ])
    assert code == 2
    assert json.loads(err)["error"] == "UsageError"
    code, _, err = _run(capsys,
                        ["decompose", "--group", "C3", "--field", "GF6"])
    assert code == 2
    code, _, _ = _run(capsys, [
        "decompose", "--group", "C3", "--field", "GF3", "--format", "csv"
    ])
    assert code == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\n  \"dim\": ,\n}")
    code, _, err = _run(capsys, ["check", "--in", str(path)])
    assert code == 1
    d = json.loads(err)
    assert d["error"] == "ParseError"
    assert d["line"] == 2


def test_projfree_of_free_suspension(capsys):
    code, out, _ = _run(capsys, [
        "projfree", "--group", "A4", "--field", "GF4", "-n", "1"
    ])
    assert code == 0
    d = json.loads(out)
    assert (d["input_dim"], d["core_dim"]) == (11, 3)
    assert d["projective_summands"] == [4, 4]


def test_random_is_deterministic(capsys):
    argv = [
        "random", "--group", "C9", "--field", "GF3", "-n", "2", "-s", "2",
        "--seed", "4"
    ]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second
    assert json.loads(first)["length_bound"] == 3


def test_experiment_csv(capsys):
    code, out, _ = _run(capsys, [
        "experiment", "--group", "C9", "--field", "GF3", "--trials", "2",
        "-n", "1", "-s", "2", "-m", "1", "--format", "csv"
    ])
    assert code == 0
    frame = pd.read_csv(io.StringIO(out), index_col=0)
    assert list(frame.columns) == ["0", "1"]
    assert frame.sum().tolist() == [2, 2]


def test_bench(capsys):
    code, out, _ = _run(capsys, [
        "bench", "--group", "A4", "--field", "GF4", "--task", "suspend",
        "-n", "1"
    ])
    assert code == 0
    d = json.loads(out)
    assert (d["new_dim"], d["old_dim"]) == (3, 11)


@pytest.mark.slow
def test_gel_of_example(capsys):
    code, out, _ = _run(capsys, ["gel", "--in", EXAMPLE, "-m", "3"])
    assert code == 0
    d = json.loads(out)
    assert d["gel"] == 3
    assert d["dim"] == 4


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
