"""JSON module files.

A module file looks like::

    {"field": {"p": 3, "n": 1, "modulus": [0, 1]},
     "group": {"preset": "C3xS3"},
     "dim": 4,
     "generators": [[[1, 0, ...], ...], ...],
     "label": "M"}

``group`` is either a preset name or explicit permutation generators
``{"degree": d, "generators": [[...], ...], "names": [...], "name": ...}``.
Matrix entries are integers for prime fields and little-endian coefficient
lists otherwise.
"""
import json
import os
from typing import Any, Dict, Optional

from ray_stmod.constants import EXAMPLE_MODULE_FILE
from ray_stmod.exceptions import ParseError, StmodError
from ray_stmod.field import FieldSpec
from ray_stmod.group import GroupData, enumerate_group, parse_group
from ray_stmod.module import Module, make_module

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def field_to_dict(field: FieldSpec) -> Dict[str, Any]:
    return {"p": field.p, "n": field.n, "modulus": list(field.modulus)}


def group_to_dict(group: GroupData) -> Dict[str, Any]:
    if group.preset:
        return {"preset": group.preset}
    return {
        "degree": group.degree,
        "generators": [list(g) for g in group.generator_perms],
        "names": list(group.generator_names),
        "name": group.name,
    }


def module_to_dict(M: Module) -> Dict[str, Any]:
    return {
        "field": field_to_dict(M.field),
        "group": group_to_dict(M.group),
        "dim": M.dim,
        "generators": [M.field.to_json_matrix(g) for g in M.gens],
        "label": M.label,
    }


def _require(d: Dict, key: str, where: str, path: Optional[str]):
    if not isinstance(d, dict):
        raise ParseError(
            f"{where} must be a JSON object, got {type(d).__name__}",
            path=path,
            field=where)
    if key not in d:
        raise ParseError(
            f"Missing key {key!r} in {where}", path=path, field=where)
    return d[key]


def field_from_dict(d: Dict, path: Optional[str] = None) -> FieldSpec:
    p = _require(d, "p", "field", path)
    n = d.get("n", 1)
    modulus = d.get("modulus")
    try:
        if modulus is None:
            return FieldSpec.from_order(int(p)**int(n))
        return FieldSpec(int(p), int(n), tuple(int(c) for c in modulus))
    except (TypeError, ValueError) as e:
        raise ParseError(f"Invalid field {d}: {e}", path=path, field="field")


def group_from_dict(d: Dict, path: Optional[str] = None) -> GroupData:
    try:
        if isinstance(d, dict) and "preset" in d:
            return parse_group(str(d["preset"]))
        generators = _require(d, "generators", "group", path)
        group = enumerate_group(
            generators, d.get("names"), name=d.get("name", "G"))
    except ParseError:
        raise
    except (StmodError, TypeError, ValueError) as e:
        raise ParseError(f"Invalid group {d}: {e}", path=path, field="group")
    degree = d.get("degree")
    if degree is not None and int(degree) != group.degree:
        raise ParseError(
            f"Group degree {degree} does not match generators of degree "
            f"{group.degree}",
            path=path,
            field="group.degree")
    return group


def module_from_dict(d: Dict, path: Optional[str] = None) -> Module:
    """Build and check the module described by ``d``.

    Raises:
        ParseError: If a key is missing or malformed, or the matrices do
            not define a representation.
    """
    field = field_from_dict(_require(d, "field", "module", path), path)
    group = group_from_dict(_require(d, "group", "module", path), path)
    dim = _require(d, "dim", "module", path)
    generators = _require(d, "generators", "module", path)
    if not isinstance(generators, list):
        raise ParseError(
            "generators must be a list of matrices",
            path=path,
            field="generators")
    try:
        return make_module(
            group,
            field,
            generators,
            dim=int(dim),
            label=str(d.get("label", "")))
    except (StmodError, TypeError, ValueError) as e:
        context = getattr(e, "context", {})
        raise ParseError(
            f"Invalid module: {e}",
            path=path,
            field="generators",
            **context)


def dumps_module(M: Module) -> str:
    return json.dumps(module_to_dict(M), sort_keys=True)


def loads_module(text: str, path: Optional[str] = None) -> Module:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Malformed JSON: {e.msg}", path=path, line=e.lineno)
    return module_from_dict(d, path)


def save_module(M: Module, path: str) -> None:
    with open(path, "w") as f:
        json.dump(module_to_dict(M), f, sort_keys=True, indent=2)
        f.write("\n")


def load_module(path: str) -> Module:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}", path=path)
    return loads_module(text, path)


def load_example_module() -> Module:
    """The four-dimensional C3xS3 module over GF(3) shipped with the
    package, of range-3 generating length 3."""
    return load_module(os.path.join(DATA_DIR, EXAMPLE_MODULE_FILE))
