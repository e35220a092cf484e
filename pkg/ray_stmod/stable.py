"""Replacing maps by stably equivalent injections or surjections, and the
triangulated structure built on them: cofibres, fibres and (de)suspension.
"""
import functools
import threading
from dataclasses import dataclass, replace
from typing import Dict, List, NamedTuple, Optional, Tuple

from ray_stmod.group import GroupData
from ray_stmod.field import FieldSpec
from ray_stmod.hom import hom_basis
from ray_stmod.linalg import EchelonSpan, eye, matmul, vstack, zeros
from ray_stmod.module import (Module, ModuleMap, cokernel, direct_sum, dual,
                              kernel, trivial, zero_map, zero_module)
from ray_stmod.projective import (ProjectiveFreeSplit, ProjectiveTable,
                                  decompose_regular, projective_free_summand,
                                  socle_evaluation_map)


class Block(NamedTuple):
    """One added projective: table index, offset within the added part,
    and the module itself."""
    index: int
    offset: int
    module: Module


@dataclass(frozen=True, eq=False)
class Replacement:
    """``replaced`` is ``original`` with projective summands added.

    For an injective replacement ``replaced: M -> N + P_1 + ...`` and the
    first block of rows is ``original``; for a surjective one
    (``dualized``) ``replaced: M + P_1 + ... -> N`` and the first block of
    columns is ``original``.
    """
    original: ModuleMap
    replaced: ModuleMap
    added: Tuple[Tuple[int, int], ...]
    blocks: Tuple[Block, ...]
    dualized: bool = False

    @property
    def added_dim(self) -> int:
        return sum(b.module.dim for b in self.blocks)

    def describe(self) -> Dict:
        return {
            "source_dim": self.replaced.source.dim,
            "target_dim": self.replaced.target.dim,
            "added": [list(a) for a in self.added],
            "added_dim": self.added_dim,
        }


def _table(M: Module, table: Optional[ProjectiveTable]) -> ProjectiveTable:
    return decompose_regular(M.group, M.field) if table is None else table


def replace_with_inj(f: ModuleMap,
                     table: Optional[ProjectiveTable] = None) -> Replacement:
    """Make ``f: M -> N`` injective by adding the fewest projectives to N.

    For each projective P with simple head S, ``beta: S^d -> M`` evaluates
    a basis of Hom(S, M); maps ``g: M -> P`` from a basis of Hom(M, P) are
    added while they raise the rank of ``(f + g) o beta``, until it equals
    the rank of ``beta``. ``f`` is then injective on the socle of M, hence
    injective.
    """
    M, N = f.source, f.target
    if f.is_injective():
        return Replacement(f, f, (), ())
    table = _table(M, table)
    GF = M.GF
    rows: List = [f.mat]
    blocks: List[Block] = []
    added = []
    offset = 0
    for idx, (P, S) in enumerate(table):
        beta = socle_evaluation_map(S, M)
        rank_beta = beta.rank
        if rank_beta == 0:
            continue
        comp = EchelonSpan(GF, beta.source.dim,
                           matmul(vstack(rows), beta.mat))
        start = comp.rank
        if start == rank_beta:
            continue
        hb = hom_basis(M, P)
        images = hb.apply(beta.mat)
        accepted = []
        for l in range(hb.dim):
            gained = comp.extend(images[l])
            if gained:
                assert gained == S.dim, "socle images are simple"
                accepted.append(l)
            if comp.rank == rank_beta:
                break
        copies = len(accepted)
        assert copies * S.dim == rank_beta - start
        for mat in hb.subset(accepted).mats:
            blocks.append(Block(idx, offset, P))
            rows.append(mat)
            offset += P.dim
        added.append((idx, copies))
    target = direct_sum([N] + [b.module for b in blocks]).module
    replaced = ModuleMap(M, target, vstack(rows))
    assert replaced.rank == M.dim
    return Replacement(f, replaced, tuple(added), tuple(blocks))


def replace_with_surj(f: ModuleMap,
                      table: Optional[ProjectiveTable] = None) -> Replacement:
    """Make ``f: M -> N`` surjective by adding the fewest projectives to
    M; the dual of :func:`replace_with_inj`."""
    if f.is_surjective():
        return Replacement(f, f, (), (), dualized=True)
    table = _table(f.source, table)
    rep = replace_with_inj(dual(f), table)
    # the hull of the dual is built from P_i, the cover from P_i^*
    to_dual = table.dual_indices
    blocks = tuple(
        Block(to_dual[b.index], b.offset, dual(b.module))
        for b in rep.blocks)
    added = tuple((to_dual[i], c) for i, c in rep.added)
    source = direct_sum([f.source] + [b.module for b in blocks]).module
    replaced = ModuleMap(source, f.target, rep.replaced.mat.T.copy())
    return Replacement(f, replaced, added, blocks, dualized=True)


@functools.lru_cache(maxsize=256)
def _injective_hull(M: Module, table: ProjectiveTable) -> Replacement:
    return replace_with_inj(zero_map(M, zero_module(M.group, M.field)),
                            table)


def injective_hull(M: Module,
                   table: Optional[ProjectiveTable] = None) -> Replacement:
    """Minimal embedding of ``M`` into a projective (the replacement of
    ``M -> 0``)."""
    return _injective_hull(M, _table(M, table))


def projective_cover(M: Module,
                     table: Optional[ProjectiveTable] = None) -> Replacement:
    return replace_with_surj(
        zero_map(zero_module(M.group, M.field), M), _table(M, table))


class Cofibre(NamedTuple):
    module: Module
    leg: ModuleMap
    replacement: Replacement
    split: ProjectiveFreeSplit


class Fibre(NamedTuple):
    module: Module
    leg: ModuleMap
    replacement: Replacement
    split: ProjectiveFreeSplit


def cofibre(f: ModuleMap,
            table: Optional[ProjectiveTable] = None) -> Cofibre:
    """Stable cokernel of ``f: M -> N`` with its leg ``N -> L``.

    L is the cokernel of the injective replacement with its projective
    summands split off.
    """
    table = _table(f.source, table)
    rep = replace_with_inj(f, table)
    N = f.target
    big = rep.replaced.target
    include = zeros(N.GF, (big.dim, N.dim))
    include[:N.dim, :] = eye(N.GF, N.dim)
    quotient = cokernel(rep.replaced)
    split = projective_free_summand(quotient.module, table)
    leg = split.quotient @ quotient.projection @ ModuleMap(N, big, include)
    return Cofibre(split.core, leg, rep, split)


def fibre(f: ModuleMap, table: Optional[ProjectiveTable] = None) -> Fibre:
    """Stable kernel of ``f: M -> N`` with its leg ``F -> M``.

    The kernel of the surjective replacement is reduced through its dual,
    so that the core comes with an injective leg.
    """
    table = _table(f.source, table)
    rep = replace_with_surj(f, table)
    M = f.source
    big = rep.replaced.source
    project = zeros(M.GF, (M.dim, big.dim))
    project[:, :M.dim] = eye(M.GF, M.dim)
    sub = kernel(rep.replaced)
    split = projective_free_summand(dual(sub.module), table)
    include = dual(split.quotient)
    leg = ModuleMap(big, M, project) @ sub.inclusion @ include
    return Fibre(include.source, leg, rep, split)


def suspend(M: Module, table: Optional[ProjectiveTable] = None) -> Module:
    """Sigma M: the cokernel of the injective hull."""
    return cofibre(zero_map(M, zero_module(M.group, M.field)), table).module


def desuspend(M: Module, table: Optional[ProjectiveTable] = None) -> Module:
    """Omega M: the kernel of the projective cover."""
    return fibre(zero_map(zero_module(M.group, M.field), M), table).module


def _shift(M: Module, step: int, table) -> Module:
    return suspend(M, table) if step > 0 else desuspend(M, table)


def _degree_label(M: Module, n: int) -> str:
    if not M.label:
        return ""
    return M.label if n == 0 else f"Sigma^{n} {M.label}"


class SigmaCache:
    """Thread-safe memo of Sigma^n M keyed by (fingerprint, n).

    Missing degrees are computed from the nearest cached degree of the
    same sign; degree 0 is the projective-free core.
    """

    def __init__(self, table: Optional[ProjectiveTable] = None):
        self._lock = threading.Lock()
        self._modules: Dict[Tuple[str, int], Module] = {}
        self._hulls: Dict[str, Replacement] = {}
        self._table = table

    def table_for(self, M: Module) -> ProjectiveTable:
        if self._table is not None and self._table.group == M.group and (
                self._table.field == M.field):
            return self._table
        return decompose_regular(M.group, M.field)

    def __len__(self) -> int:
        with self._lock:
            return len(self._modules)

    def _get(self, key) -> Optional[Module]:
        with self._lock:
            return self._modules.get(key)

    def _put(self, key, module: Module) -> Module:
        with self._lock:
            return self._modules.setdefault(key, module)

    def power(self,
              M: Module,
              n: int,
              table: Optional[ProjectiveTable] = None) -> Module:
        table = table or self.table_for(M)
        fp = M.fingerprint
        cached = self._get((fp, n))
        if cached is not None:
            return cached
        step = 1 if n > 0 else -1
        start, current = 0, self._get((fp, 0))
        for degree in range(n - step, 0, -step):
            found = self._get((fp, degree))
            if found is not None:
                start, current = degree, found
                break
        if current is None:
            core = projective_free_summand(M, table).core
            current = self._put((fp, 0),
                                replace(core, label=_degree_label(M, 0)))
        for degree in range(start + step, n + step, step):
            shifted = _shift(current, step, table)
            current = self._put(
                (fp, degree), replace(shifted,
                                      label=_degree_label(M, degree)))
        return current

    def sphere(self,
               group: GroupData,
               field: FieldSpec,
               i: int,
               table: Optional[ProjectiveTable] = None) -> Module:
        return self.power(trivial(group, field), i, table)

    def hull(self, M: Module,
             table: Optional[ProjectiveTable] = None) -> Replacement:
        with self._lock:
            rep = self._hulls.get(M.fingerprint)
        if rep is None:
            rep = injective_hull(M, table or self.table_for(M))
            with self._lock:
                rep = self._hulls.setdefault(M.fingerprint, rep)
        return rep


def suspension_power(M: Module,
                     n: int,
                     cache: Optional[SigmaCache] = None,
                     table: Optional[ProjectiveTable] = None) -> Module:
    """Sigma^n M for n > 0, Omega^-n M for n < 0, and the projective-free
    core of M for n = 0."""
    cache = cache if cache is not None else SigmaCache(table)
    return cache.power(M, n, table)
