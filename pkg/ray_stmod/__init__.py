from ray_stmod.field import FieldSpec, parse_field
from ray_stmod.group import GroupData, parse_group
from ray_stmod.module import Module, ModuleMap, make_map, make_module, trivial
from ray_stmod.hom import hom_basis, is_stably_trivial, stable_hom_basis
from ray_stmod.projective import decompose_regular, projective_free_summand
from ray_stmod.stable import (SigmaCache, cofibre, fibre, replace_with_inj,
                              replace_with_surj, suspension_power)
from ray_stmod.ghost import (create_random_module, generating_length_m,
                             universal_ghost)
from ray_stmod.experiment import ExperimentConfig, run_experiment

__all__ = [
    "FieldSpec", "parse_field", "GroupData", "parse_group", "Module",
    "ModuleMap", "make_map", "make_module", "trivial", "hom_basis",
    "is_stably_trivial", "stable_hom_basis", "decompose_regular",
    "projective_free_summand", "SigmaCache", "cofibre", "fibre",
    "replace_with_inj", "replace_with_surj", "suspension_power",
    "create_random_module", "generating_length_m", "universal_ghost",
    "ExperimentConfig", "run_experiment"
]

__version__ = "0.1.0"
