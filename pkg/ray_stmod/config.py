import os
from dataclasses import dataclass, fields, replace

from ray_stmod.exceptions import UsageError

ENV_VARS = {
    "group_bound": "STMOD_GROUP_BOUND",
    "decompose_draws": "STMOD_DECOMPOSE_DRAWS",
    "exhaustive_limit": "STMOD_EXHAUSTIVE_LIMIT",
    "iso_draws": "STMOD_ISO_DRAWS",
    "kron_limit": "STMOD_KRON_LIMIT",
    "legacy_max_dim": "STMOD_LEGACY_MAX_DIM",
    "seed": "STMOD_SEED",
}


@dataclass(frozen=True)
class StmodConfig:
    """Tunables shared by the whole package.

    Attributes:
        group_bound (int): Largest group order ``enumerate_group`` builds.
        decompose_draws (int): Consecutive random endomorphisms that must
            fail to split a module before it is declared indecomposable.
        exhaustive_limit (int): Largest endomorphism ring (as a set) that
            is enumerated exhaustively instead of sampled.
        exhaustive_max_dim (int): Largest endomorphism ring dimension that
            is enumerated exhaustively.
        iso_draws (int): Random combinations tried by the isomorphism
            search.
        kron_limit (int): Largest ``dim M * dim N`` for which Hom(M, N) is
            solved through the full intertwining system; larger pairs go
            through a projective presentation.
        legacy_max_dim (int): Largest module the legacy full-decomposition
            projective-free routine of the bench runs on.
        seed (int): Default master seed.
    """
    group_bound: int = 20000
    decompose_draws: int = 64
    exhaustive_limit: int = 4096
    exhaustive_max_dim: int = 12
    iso_draws: int = 64
    kron_limit: int = 256
    legacy_max_dim: int = 40
    seed: int = 0

    def set_params(self, **params) -> "StmodConfig":
        valid = {f.name for f in fields(self)}
        unknown = set(params) - valid
        if unknown:
            raise UsageError(
                f"Unknown config keys {sorted(unknown)}, "
                f"expected a subset of {sorted(valid)}.")
        return replace(self, **params)


def get_config() -> StmodConfig:
    """Build the config from defaults and ``STMOD_*`` environment
    variables. Read on every call so overrides take effect immediately."""
    values = {}
    for name, env_var in ENV_VARS.items():
        raw = os.environ.get(env_var)
        if raw is None or raw == "":
            continue
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(
                f"{env_var} must be an integer, got {raw!r}",
                variable=env_var)
        if value < 0:
            raise UsageError(
                f"{env_var} must be non-negative, got {value}",
                variable=env_var)
        values[name] = value
    return StmodConfig(**values)
