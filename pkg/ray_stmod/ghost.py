"""Universal ghosts out of a module, range-restricted generating length,
and random modules built from spheres by repeated cofibres."""
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from ray_stmod.constants import STOPPED_CAP, STOPPED_TRIVIAL
from ray_stmod.exceptions import CapExceeded, UsageError
from ray_stmod.field import FieldSpec
from ray_stmod.group import GroupData
from ray_stmod.hom import (StableHom, hom_basis, module_generators,
                           phom_basis, stable_hom_basis)
from ray_stmod.linalg import hstack, matmul
from ray_stmod.module import (Module, ModuleMap, direct_sum, identity_map,
                              stack_sources, zero_map, zero_module)
from ray_stmod.projective import (ProjectiveTable, decompose_regular,
                                  projective_free_summand)
from ray_stmod.stable import SigmaCache, cofibre

SphereHoms = List[Tuple[int, Module, StableHom]]


class GhostStep(NamedTuple):
    """``ghost: source -> target`` kills every stable map from a sphere
    Sigma^i k with ``|i| <= range_m``; ``evaluation`` assembles the lifted
    stable basis maps ``lifted`` into the source's core."""
    source: Module
    range_m: int
    sphere_dims: Dict[int, int]
    ghost: ModuleMap
    target: Module
    evaluation: ModuleMap
    lifted: Tuple[ModuleMap, ...]


def _setup(M: Module, cache: Optional[SigmaCache],
           table: Optional[ProjectiveTable]):
    table = table or decompose_regular(M.group, M.field)
    cache = cache if cache is not None else SigmaCache(table)
    return cache, table


def sphere_homs(N: Module, m: int, cache: SigmaCache,
                table: ProjectiveTable) -> SphereHoms:
    """Stable Hom(Sigma^i k, N) for every i in [-m, m]."""
    if m < 0:
        raise UsageError(f"Range m must be >= 0, got {m}")
    out = []
    for i in range(-m, m + 1):
        X = cache.sphere(N.group, N.field, i, table)
        out.append((i, X, stable_hom_basis(X, N, cache.hull(X, table),
                                           table)))
    return out


def evaluation_map(N: Module, homs: SphereHoms) -> ModuleMap:
    """W -> N from a sum of spheres, one copy per lifted stable basis
    map."""
    sources, mats = [], []
    for _, X, st in homs:
        for mat in st.lifted.mats:
            sources.append(X)
            mats.append(mat)
    if not mats:
        return zero_map(zero_module(N.group, N.field), N)
    W = direct_sum(sources, label="W").module
    return ModuleMap(W, N, hstack(mats))


def universal_ghost(N: Module,
                    m: int,
                    cache: Optional[SigmaCache] = None,
                    table: Optional[ProjectiveTable] = None,
                    assume_projective_free: bool = False) -> GhostStep:
    """The cofibre leg of the evaluation map from all range spheres.

    Every map out of ``N`` that kills stable maps from Sigma^i k,
    ``|i| <= m``, factors through the returned ghost.
    """
    cache, table = _setup(N, cache, table)
    if assume_projective_free:
        core, reduce = N, identity_map(N)
    else:
        split = projective_free_summand(N, table)
        core, reduce = split.core, split.quotient
    homs = sphere_homs(core, m, cache, table)
    ev = evaluation_map(core, homs)
    cof = cofibre(ev, table)
    lifted = tuple(f for _, _, st in homs for f in st.lifted.maps)
    return GhostStep(
        source=N,
        range_m=m,
        sphere_dims={i: st.dimension
                     for i, _, st in homs},
        ghost=cof.leg @ reduce,
        target=cof.module,
        evaluation=ev,
        lifted=lifted)


@dataclass(frozen=True)
class LengthReport:
    fingerprint: str
    range_m: int
    gel_m: Optional[int]
    step_dims: Tuple[int, ...]
    stopped_by: str
    cap: int

    def value(self) -> int:
        """The generating length, if the iteration terminated.

        Raises:
            CapExceeded: If the composite was still stably nontrivial
                after ``cap`` ghosts.
        """
        if self.stopped_by == STOPPED_CAP:
            raise CapExceeded(
                f"gel_{self.range_m} not reached within {self.cap} steps",
                cap=self.cap,
                fingerprint=self.fingerprint)
        return self.gel_m

    def to_dict(self) -> Dict:
        return {
            "fingerprint": self.fingerprint,
            "m": self.range_m,
            "gel": self.gel_m,
            "step_dims": list(self.step_dims),
            "stopped_by": self.stopped_by,
            "cap": self.cap,
        }


class _CoreMaps:
    """Lifted stable maps core -> Sigma^i k restricted to the generator
    columns of the core, cached per degree."""

    def __init__(self, core: Module, hull, table: ProjectiveTable):
        self.core = core
        self.hull = hull
        self.table = table
        self.generators = list(module_generators(core))
        self._by_degree: Dict[int, Optional[np.ndarray]] = {}

    def get(self, i: int, X: Module) -> Optional[np.ndarray]:
        """``(dim X, p * r)`` integer array, or None if stable
        Hom(core, X) is zero."""
        if i not in self._by_degree:
            st = stable_hom_basis(self.core, X, self.hull, self.table)
            if st.dimension == 0:
                self._by_degree[i] = None
            else:
                cols = st.lifted.mats[:, :, self.generators]
                p, r = st.dimension, len(self.generators)
                self._by_degree[i] = cols.view(np.ndarray).transpose(
                    1, 0, 2).reshape(X.dim, p * r)
        return self._by_degree[i]


def _factors_through(f: ModuleMap, homs: SphereHoms, core_maps: _CoreMaps,
                     hull, table: ProjectiveTable) -> bool:
    """Whether ``f: core -> N`` is stably a composite ``ev o phi``; by
    exactness of W -> N -> L this is when the next ghost kills ``f``."""
    core, N = f.source, f.target
    GF = core.GF
    r = len(core_maps.generators)
    span = phom_basis(core, N, hull, table).span()
    for i, X, st in homs:
        if st.dimension == 0:
            continue
        phi = core_maps.get(i, X)
        if phi is None:
            continue
        d, p = st.dimension, phi.shape[1] // r
        H = st.lifted.mats.reshape(d * N.dim, X.dim)
        prod = matmul(H, GF(phi)).view(np.ndarray)
        rows = prod.reshape(d, N.dim, p, r).transpose(0, 2, 1, 3).reshape(
            d * p, N.dim * r)
        span.extend(GF(rows))
    coords = f.mat[:, core_maps.generators].reshape(1, N.dim * r)
    return span.contains(coords)


def generating_length_m(M: Module,
                        m: int,
                        cap: Optional[int] = None,
                        cache: Optional[SigmaCache] = None,
                        table: Optional[ProjectiveTable] = None
                        ) -> LengthReport:
    """Least n such that the n-fold composite of range-m universal ghosts
    out of M is stably trivial.

    Each step first asks whether the composite so far factors through the
    next evaluation map; if so the next ghost kills it and the length is
    found without building the last ghost target. ``cap`` defaults to
    ``dim core(M) + 1`` steps.
    """
    cache, table = _setup(M, cache, table)
    core = projective_free_summand(M, table).core
    if core.dim == 0:
        return LengthReport(M.fingerprint, m, 0, (), STOPPED_TRIVIAL,
                            cap or 0)
    cap = core.dim + 1 if cap is None else cap
    hull = cache.hull(core, table)
    core_maps = _CoreMaps(core, hull, table)
    current = identity_map(core)
    step_dims: List[int] = []
    for t in range(1, cap + 1):
        homs = sphere_homs(current.target, m, cache, table)
        if _factors_through(current, homs, core_maps, hull, table):
            return LengthReport(M.fingerprint, m, t, tuple(step_dims),
                                STOPPED_TRIVIAL, cap)
        cof = cofibre(evaluation_map(current.target, homs), table)
        current = cof.leg @ current
        step_dims.append(cof.module.dim)
    return LengthReport(M.fingerprint, m, None, tuple(step_dims),
                        STOPPED_CAP, cap)


class RandomModule(NamedTuple):
    module: Module
    length_bound: int
    degrees: Tuple[Tuple[int, ...], ...]


def _random_degrees(rng: np.random.Generator, max_summands: int,
                    m: int) -> Tuple[int, ...]:
    count = int(rng.integers(1, max_summands + 1))
    return tuple(int(i) for i in rng.integers(-m, m + 1, size=count))


def random_module_steps(group: GroupData,
                        field: FieldSpec,
                        steps: int,
                        max_summands: int,
                        m: int,
                        seed: int,
                        cache: Optional[SigmaCache] = None,
                        table: Optional[ProjectiveTable] = None
                        ) -> Iterator[RandomModule]:
    """Yield R_0, ..., R_steps.

    R_0 is a sum of 1..max_summands spheres with degrees in [-m, m];
    R_{t+1} is the cofibre of a uniformly random map from a fresh sphere
    sum into R_t.
    """
    if steps < 0 or max_summands < 1 or m < 0:
        raise UsageError(
            f"Need steps >= 0, max_summands >= 1 and m >= 0, got "
            f"{steps}, {max_summands}, {m}")
    table = table or decompose_regular(group, field)
    cache = cache if cache is not None else SigmaCache(table)
    rng = np.random.default_rng(seed)
    q = field.order

    degrees = _random_degrees(rng, max_summands, m)
    history = [degrees]
    spheres = [cache.sphere(group, field, i, table) for i in degrees]
    R = replace(direct_sum(spheres).module, label="R0")
    yield RandomModule(R, 1, tuple(history))
    for t in range(1, steps + 1):
        degrees = _random_degrees(rng, max_summands, m)
        history.append(degrees)
        pieces = []
        for i in degrees:
            X = cache.sphere(group, field, i, table)
            hb = hom_basis(X, R)
            coeffs = rng.integers(0, q, size=hb.dim)
            pieces.append(hb.combination(coeffs))
        f = stack_sources(pieces)
        R = replace(cofibre(f, table).module, label=f"R{t}")
        yield RandomModule(R, t + 1, tuple(history))


def create_random_module(group: GroupData,
                         field: FieldSpec,
                         steps: int,
                         max_summands: int,
                         m: int,
                         seed: int,
                         cache: Optional[SigmaCache] = None,
                         table: Optional[ProjectiveTable] = None
                         ) -> RandomModule:
    """R_steps, a module of generating length at most ``steps + 1``."""
    last = None
    for last in random_module_steps(group, field, steps, max_summands, m,
                                    seed, cache, table):
        pass
    return last
