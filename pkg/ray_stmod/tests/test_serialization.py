import json

import pytest

from ray_stmod.exceptions import ParseError
from ray_stmod.module import regular_representation, restrict
from ray_stmod.projective import decompose_module
from ray_stmod.serialization import (dumps_module, load_example_module,
                                     load_module, loads_module,
                                     module_to_dict, save_module)


def test_example_module():
    M = load_example_module()
    assert M.dim == 4
    assert M.label == "M"
    assert M.group.preset == "C3xS3"
    assert M.field.order == 3


def test_save_and_load(tmp_path):
    M = load_example_module()
    path = str(tmp_path / "m.json")
    save_module(M, path)
    assert load_module(path).fingerprint == M.fingerprint


def test_extension_field_entries(a4, gf4):
    kG = regular_representation(a4, gf4)
    d = module_to_dict(kG)
    # GF(4) entries are written as coefficient lists
    assert d["generators"][0][0][0] in ([0, 0], [1, 0])
    assert loads_module(dumps_module(kG)).fingerprint == kG.fingerprint


def test_explicit_permutation_group():
    M = restrict(load_example_module(), ["x", "z"])
    d = module_to_dict(M)
    assert "preset" not in d["group"]
    assert d["group"]["names"] == ["x", "z"]
    loaded = loads_module(json.dumps(d))
    assert loaded.fingerprint == M.fingerprint
    summands = decompose_module(loaded)
    assert sum(s.module.dim for s in summands) == 4


def test_malformed_json():
    with pytest.raises(ParseError) as exc:
        loads_module("{\n  \"dim\": ,\n}", path="bad.json")
    assert exc.value.context["line"] == 2
    assert exc.value.context["path"] == "bad.json"


def test_missing_key():
    d = module_to_dict(load_example_module())
    del d["generators"]
    with pytest.raises(ParseError) as exc:
        loads_module(json.dumps(d))
    assert "generators" in exc.value.message


def test_invalid_representation():
    d = module_to_dict(load_example_module())
    d["generators"][0][0] = [0, 0, 0, 0]
    with pytest.raises(ParseError) as exc:
        loads_module(json.dumps(d))
    assert exc.value.context["field"] == "generators"


def test_unreadable_file(tmp_path):
    with pytest.raises(ParseError):
        load_module(str(tmp_path / "missing.json"))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main(["-v", __file__]))
