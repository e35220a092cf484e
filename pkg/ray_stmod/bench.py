"""The older replacement strategy that only adds free modules, and benchmarks
comparing it with the minimal projective replacement."""
import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np
import pandas as pd

from ray_stmod.config import get_config
from ray_stmod.constants import PROJFREE_TASK, RANDOM_TASK, SUSPEND_TASK
from ray_stmod.exceptions import DecompositionInconclusive, UsageError
from ray_stmod.field import FieldSpec
from ray_stmod.group import GroupData
from ray_stmod.hom import find_isomorphism, hom_basis, is_stably_trivial
from ray_stmod.linalg import matmul, vstack, zeros
from ray_stmod.module import (Module, ModuleMap, cokernel, direct_sum, dual,
                              identity_map, regular_representation,
                              stack_sources, trivial, zero_map, zero_module)
from ray_stmod.projective import (ProjectiveTable, decompose_module,
                                  decompose_regular, projective_free_summand)
from ray_stmod.stable import SigmaCache, replace_with_inj
from ray_stmod.utils import timed

BENCH_TASKS = (SUSPEND_TASK, PROJFREE_TASK, RANDOM_TASK)

_slots: Dict[tuple, List[List]] = {}
_slots_lock = threading.Lock()
_warned_legacy = False


class FreeReplacement(NamedTuple):
    """``replaced: M -> N + kG^copies`` (or its dual for a surjective
    replacement) with ``original`` the first block."""
    original: ModuleMap
    replaced: ModuleMap
    copies: int

    @property
    def added_dim(self) -> int:
        return self.copies * self.original.source.group.order


def _free_slots(table: ProjectiveTable) -> List[List]:
    """For each projective class, the embeddings ``P_i -> kG`` of its
    summands in the decomposition of kG."""
    key = (table.group.key, table.field)
    with _slots_lock:
        found = _slots.get(key)
    if found is not None:
        return found
    slots: List[List] = [[] for _ in table.projectives]
    for s in table.summands:
        for idx, P in enumerate(table.projectives):
            if P.dim != s.module.dim:
                continue
            iso = find_isomorphism(P, s.module)
            if iso is not None:
                slots[idx].append(matmul(s.inclusion.mat, iso.mat))
                break
        else:
            raise DecompositionInconclusive(
                f"Summand of dim {s.module.dim} of k{table.group.name} "
                "matches no projective class")
    with _slots_lock:
        return _slots.setdefault(key, slots)


def free_replace_with_inj(f: ModuleMap,
                          table: Optional[ProjectiveTable] = None
                          ) -> FreeReplacement:
    """Make ``f: M -> N`` injective by adding the fewest copies of kG.

    The minimal replacement needs ``copies_i`` copies of each ``P_i``;
    kG holds ``mult_i`` of them, so ``max ceil(copies_i / mult_i)`` copies
    of kG suffice and are necessary. The maps into ``P_i`` are placed into
    free slots in order.
    """
    M, N = f.source, f.target
    table = table or decompose_regular(M.group, M.field)
    rep = replace_with_inj(f, table)
    if not rep.blocks:
        return FreeReplacement(f, f, 0)
    copies = max(
        math.ceil(c / table.multiplicities[idx]) for idx, c in rep.added)
    slots = _free_slots(table)
    GF = M.GF
    order = M.group.order
    free = [zeros(GF, (order, M.dim)) for _ in range(copies)]
    used = [0] * len(table)
    for block in rep.blocks:
        start = N.dim + block.offset
        g = rep.replaced.mat[start:start + block.module.dim, :]
        mult = table.multiplicities[block.index]
        j = used[block.index]
        used[block.index] += 1
        free[j // mult] = free[j // mult] + matmul(
            slots[block.index][j % mult], g)
    kG = regular_representation(M.group, M.field)
    target = direct_sum([N] + [kG] * copies).module
    replaced = ModuleMap(M, target, vstack([f.mat] + free))
    assert replaced.rank == M.dim
    return FreeReplacement(f, replaced, copies)


def free_replace_with_surj(f: ModuleMap,
                           table: Optional[ProjectiveTable] = None
                           ) -> FreeReplacement:
    rep = free_replace_with_inj(dual(f), table)
    if not rep.copies:
        return FreeReplacement(f, f, 0)
    kG = regular_representation(f.source.group, f.source.field)
    source = direct_sum([f.source] + [dual(kG)] * rep.copies).module
    return FreeReplacement(
        f, ModuleMap(source, f.target, rep.replaced.mat.T.copy()),
        rep.copies)


def free_suspend(M: Module,
                 table: Optional[ProjectiveTable] = None) -> Module:
    """Cokernel of the minimal free hull, projective summands kept."""
    rep = free_replace_with_inj(
        zero_map(M, zero_module(M.group, M.field)), table)
    return cokernel(rep.replaced).module


def free_desuspend(M: Module,
                   table: Optional[ProjectiveTable] = None) -> Module:
    """Kernel of the minimal free cover, computed as the dual of the
    cokernel of the dual hull."""
    return dual(free_suspend(dual(M), table))


def free_suspension_power(M: Module,
                          n: int,
                          table: Optional[ProjectiveTable] = None) -> Module:
    """Sigma^n M by the free strategy, never splitting off projectives."""
    table = table or decompose_regular(M.group, M.field)
    step = free_suspend if n > 0 else free_desuspend
    current = M
    for _ in range(abs(n)):
        current = step(current, table)
    return current


def legacy_projective_free(M: Module,
                           table: Optional[ProjectiveTable] = None,
                           seed: Optional[int] = None) -> Optional[Module]:
    """Projective-free part by full decomposition: split ``M`` into
    indecomposables and drop those whose identity is stably trivial.

    Returns None when ``M`` is larger than ``STMOD_LEGACY_MAX_DIM``.
    """
    global _warned_legacy
    limit = get_config().legacy_max_dim
    if M.dim > limit:
        if not _warned_legacy:
            _warned_legacy = True
            warnings.warn(
                f"Skipping the full-decomposition projective-free step on "
                f"a module of dim {M.dim} (STMOD_LEGACY_MAX_DIM={limit}).")
        return None
    table = table or decompose_regular(M.group, M.field)
    kept = [
        s.module for s in decompose_module(M, seed=seed)
        if not is_stably_trivial(identity_map(s.module), table=table)
    ]
    if not kept:
        return zero_module(M.group, M.field)
    return direct_sum(kept, label=M.label).module


@dataclass(frozen=True)
class BenchReport:
    """One benchmark task; ``new_dim``/``old_dim`` are the output dims of
    the minimal and the free strategy. Times are informational."""
    task: str
    params: Dict[str, Any]
    new_dim: int
    old_dim: Optional[int]
    new_seconds: float
    old_seconds: float
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def delta(self) -> Optional[int]:
        if self.old_dim is None:
            return None
        return self.old_dim - self.new_dim

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        ret = {
            "task": self.task,
            "params": dict(self.params),
            "new_dim": self.new_dim,
            "old_dim": self.old_dim,
            "delta": self.delta,
        }
        ret.update(self.extra)
        if include_timing:
            ret["timing"] = {
                "new_s": round(self.new_seconds, 4),
                "old_s": round(self.old_seconds, 4),
            }
        return ret


def compare_random_replacements(group: GroupData,
                                field: FieldSpec,
                                tasks: int,
                                seed: int = 0,
                                m: int = 2,
                                max_summands: int = 2,
                                table: Optional[ProjectiveTable] = None
                                ) -> pd.DataFrame:
    """Replace random maps ``W -> Sigma^j k`` (W a sum of spheres) both
    ways and record the projective dimension each strategy adds.

    Returns:
        pd.DataFrame: One row per task with columns ``source_dim``,
        ``target_dim``, ``new_added`` and ``old_added``.
    """
    if tasks < 0:
        raise UsageError(f"tasks must be >= 0, got {tasks}")
    table = table or decompose_regular(group, field)
    cache = SigmaCache(table)
    rng = np.random.default_rng(seed)
    rows = []
    for t in range(tasks):
        count = int(rng.integers(1, max_summands + 1))
        degrees = [int(i) for i in rng.integers(-m, m + 1, size=count)]
        target = cache.sphere(group, field, int(rng.integers(-m, m + 1)),
                              table)
        pieces = []
        for i in degrees:
            hb = hom_basis(cache.sphere(group, field, i, table), target)
            pieces.append(hb.combination(rng.integers(0, field.order,
                                                      hb.dim)))
        f = stack_sources(pieces)
        new = replace_with_inj(f, table)
        old = free_replace_with_inj(f, table)
        rows.append({
            "task": t,
            "degrees": tuple(degrees),
            "source_dim": f.source.dim,
            "target_dim": target.dim,
            "new_added": new.added_dim,
            "old_added": old.added_dim,
        })
    return pd.DataFrame(
        rows,
        columns=[
            "task", "degrees", "source_dim", "target_dim", "new_added",
            "old_added"
        ])


def bench_replacement(task: str,
                      group: GroupData,
                      field: FieldSpec,
                      n: int = 1,
                      seed: int = 0,
                      tasks: int = 50,
                      table: Optional[ProjectiveTable] = None
                      ) -> BenchReport:
    """Run one task with both strategies.

    Args:
        task (str): ``"suspend"`` compares dim Sigma^n k, ``"projfree"``
            strips the free-strategy Sigma^n k both by the greedy split and
            by full decomposition, ``"random"`` sums the added dims over
            ``tasks`` random replacements.
    """
    if task not in BENCH_TASKS:
        raise UsageError(f"task must be one of {BENCH_TASKS}, got {task!r}")
    table = table or decompose_regular(group, field)
    k = trivial(group, field)
    params = {"group": group.name, "field": field.name}
    if task == SUSPEND_TASK:
        params["n"] = n
        new, new_s = timed(SigmaCache(table).power, k, n, table)
        old, old_s = timed(free_suspension_power, k, n, table)
        return BenchReport(task, params, new.dim, old.dim, new_s, old_s)
    if task == PROJFREE_TASK:
        params["n"] = n
        module = free_suspension_power(k, n, table)
        split, new_s = timed(projective_free_summand, module, table)
        legacy, old_s = timed(legacy_projective_free, module, table, seed)
        return BenchReport(
            task,
            params,
            split.core.dim,
            None if legacy is None else legacy.dim,
            new_s,
            old_s,
            extra={
                "input_dim": module.dim,
                "removed_dim": module.dim - split.core.dim
            })
    params.update({"tasks": tasks, "seed": seed})
    frame, elapsed = timed(compare_random_replacements, group, field, tasks,
                            seed, table=table)
    return BenchReport(
        task,
        params,
        int(frame["new_added"].sum()),
        int(frame["old_added"].sum()),
        elapsed,
        0.0,
        extra={
            "worse": int((frame["new_added"] > frame["old_added"]).sum())
        })
