import json

import numpy as np
import pytest

from ray_stmod.config import StmodConfig, get_config
from ray_stmod.exceptions import NoSolution, UsageError
from ray_stmod.utils import dumps, timed, write_output


def test_defaults(monkeypatch):
    for var in ("STMOD_SEED", "STMOD_KRON_LIMIT"):
        monkeypatch.delenv(var, raising=False)
    config = get_config()
    assert config.kron_limit == 256
    assert config.seed == 0


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("STMOD_KRON_LIMIT", "16")
    monkeypatch.setenv("STMOD_ISO_DRAWS", "")
    config = get_config()
    assert config.kron_limit == 16
    assert config.iso_draws == 64
    monkeypatch.setenv("STMOD_KRON_LIMIT", "-1")
    with pytest.raises(UsageError) as exc:
        get_config()
    assert exc.value.context["variable"] == "STMOD_KRON_LIMIT"


def test_set_params():
    config = StmodConfig().set_params(seed=3)
    assert config.seed == 3
    with pytest.raises(UsageError):
        StmodConfig().set_params(speed=3)


def test_error_dict():
    error = NoSolution("no", columns=[1], path=None)
    assert error.to_dict() == {
        "error": "NoSolution",
        "message": "no",
        "columns": [1]
    }


def test_dumps_handles_numpy():
    text = dumps({1: np.int64(2), "b": (np.float64(0.5), np.arange(2))})
    assert json.loads(text) == {"1": 2, "b": [0.5, [0, 1]]}


def test_timed_and_write_output(tmp_path, capsys):
    out, seconds = timed(sum, [1, 2])
    assert out == 3 and seconds >= 0
    write_output("x")
    assert capsys.readouterr().out == "x\n"
    path = tmp_path / "out.txt"
    write_output("y\n", str(path))
    assert path.read_text() == "y\n"


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
