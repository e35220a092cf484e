"""Indecomposable projective kG-modules, their simple heads, and the
splitting of projective summands off arbitrary modules."""
import dataclasses
import functools
import itertools
import threading
import warnings
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import galois
import numpy as np

from ray_stmod.config import get_config
from ray_stmod.exceptions import DecompositionInconclusive
from ray_stmod.field import FieldSpec
from ray_stmod.group import GroupData
from ray_stmod.hom import end_basis, hom_basis
from ray_stmod.linalg import (EchelonSpan, eye, hstack, matmul, nullspace,
                              rank, row_basis, solve_exact)
from ray_stmod.module import (Module, ModuleMap, cokernel, direct_sum, dual,
                              identity_map, image, regular_representation,
                              zero_map, zero_module)

CERTIFICATE_EXHAUSTIVE = "exhaustive"
CERTIFICATE_RANDOM = "random"

_tables: Dict[tuple, "ProjectiveTable"] = {}
_tables_lock = threading.Lock()
_warned_random = set()


class Summand(NamedTuple):
    module: Module
    inclusion: ModuleMap
    projection: ModuleMap
    certificate: str


def _candidates(M: Module, rng: np.random.Generator,
                draws: int) -> Tuple[Iterator[galois.FieldArray], str]:
    """Endomorphisms of ``M`` to test for a Fitting splitting.

    Returns the candidates and the certificate they give when none of
    them splits: all of End(M) for small rings, otherwise the basis, its
    scalar shifts and ``draws`` random elements.
    """
    hb = end_basis(M)
    k, d, q = hb.dim, M.dim, M.field.order
    GF = M.GF
    mats = hb.mats
    flat = mats.reshape(k, d * d)
    identity = eye(GF, d)
    config = get_config()

    def combine(coeffs):
        row = GF(np.asarray(coeffs, dtype=np.int64).reshape(1, k))
        return matmul(row, flat).reshape(d, d)

    if k <= config.exhaustive_max_dim and q**k <= config.exhaustive_limit:
        everything = itertools.product(range(q), repeat=k)
        return (combine(c) for c in everything), CERTIFICATE_EXHAUSTIVE

    def sampled():
        shifts = list(M.field.elements()) if q <= 16 else [GF(0)]
        for mat in mats:
            for lam in shifts:
                yield mat - identity * lam
        for _ in range(draws):
            lam = GF(int(rng.integers(0, q)))
            yield combine(rng.integers(0, q, size=k)) - identity * lam

    return sampled(), CERTIFICATE_RANDOM


def _fitting_power(F: galois.FieldArray) -> galois.FieldArray:
    """F^(2^t) with 2^t >= dim; its kernel and image are the Fitting
    components of F."""
    power = 1
    while power < F.shape[0]:
        F = matmul(F, F)
        power *= 2
    return F


def _find_splitting(M: Module, rng,
                    draws: int) -> Tuple[Optional[galois.FieldArray], str]:
    candidates, certificate = _candidates(M, rng, draws)
    for F in candidates:
        Fn = _fitting_power(F)
        if 0 < rank(Fn) < M.dim:
            return Fn, certificate
    return None, certificate


def _fitting_split(M: Module, Fn: galois.FieldArray) -> List[Summand]:
    """M = ker(Fn) + im(Fn) in a basis adapted to both summands."""
    K = nullspace(Fn)
    im = row_basis(Fn.T).T
    change = hstack([K, im])
    inv = np.linalg.inv(change)
    a = K.shape[1]
    parts = []
    for block in (slice(0, a), slice(a, M.dim)):
        gens = tuple(
            matmul(matmul(inv, g), change)[block, block] for g in M.gens)
        sub = Module(M.group, M.field, gens[0].shape[0], gens, M.label)
        parts.append(
            Summand(sub, ModuleMap(sub, M, change[:, block]),
                    ModuleMap(M, sub, inv[block, :]), ""))
    return parts


def _decompose(M: Module, rng, draws: int) -> List[Summand]:
    if M.dim <= 1:
        identity = identity_map(M)
        return [Summand(M, identity, identity, CERTIFICATE_EXHAUSTIVE)]
    Fn, certificate = _find_splitting(M, rng, draws)
    if Fn is None:
        identity = identity_map(M)
        return [Summand(M, identity, identity, certificate)]
    out = []
    for part in _fitting_split(M, Fn):
        for piece in _decompose(part.module, rng, draws):
            out.append(
                Summand(piece.module, part.inclusion @ piece.inclusion,
                        piece.projection @ part.projection,
                        piece.certificate))
    return out


def decompose_module(M: Module,
                     seed: Optional[int] = None,
                     draws: Optional[int] = None) -> List[Summand]:
    """Split ``M`` into indecomposable summands by Fitting decomposition
    of random endomorphisms.

    Each summand carries its inclusion into and projection from ``M`` and
    how its indecomposability was certified: ``"exhaustive"`` when all of
    its endomorphism ring was checked, ``"random"`` otherwise.
    """
    config = get_config()
    rng = np.random.default_rng(config.seed if seed is None else seed)
    draws = config.decompose_draws if draws is None else draws
    summands = _decompose(M, rng, draws)
    if any(s.certificate == CERTIFICATE_RANDOM for s in summands):
        warnings.warn(
            f"Indecomposability of some summands of {M!r} is certified "
            f"by {draws} random endomorphisms only.")
    return summands


def _proper_endomorphism(X: Module, rng,
                         draws: int) -> Optional[galois.FieldArray]:
    candidates, _ = _candidates(X, rng, draws)
    for F in candidates:
        if 0 < rank(F) < X.dim:
            return F
    return None


def _simple_of(P: Module, rng, draws: int) -> Module:
    X = P
    while X.dim > 1 and end_basis(X).dim > 1:
        F = _proper_endomorphism(X, rng, draws)
        if F is None:
            break
        X = image(ModuleMap(X, X, F))[0].module
    return X


def simple_of_projective(P: Module,
                         seed: Optional[int] = None,
                         draws: Optional[int] = None) -> Module:
    """The simple head of an indecomposable projective ``P``.

    Replaces the module by the image of an endomorphism of intermediate
    rank until the endomorphism ring is one-dimensional or no such
    endomorphism exists. Every image is a quotient of ``P`` sitting inside
    ``P``, so the result has the head of ``P`` as its only composition
    factor.
    """
    config = get_config()
    rng = np.random.default_rng(config.seed if seed is None else seed)
    draws = config.decompose_draws if draws is None else draws
    return _simple_of(P, rng, draws)


@dataclass(frozen=True, eq=False)
class ProjectiveTable:
    """Indecomposable projectives of kG, one per isomorphism class,
    sorted by (dim, discovery order).

    ``simples[i]`` is the head of ``projectives[i]`` and
    ``multiplicities[i]`` counts ``projectives[i]`` in kG. ``summands``
    is the full decomposition of kG it was read from.
    """
    group: GroupData
    field: FieldSpec
    projectives: Tuple[Module, ...]
    simples: Tuple[Module, ...]
    multiplicities: Tuple[int, ...]
    summands: Tuple[Summand, ...]
    certificate: str = CERTIFICATE_EXHAUSTIVE

    def __iter__(self) -> Iterator[Tuple[Module, Module]]:
        return iter(zip(self.projectives, self.simples))

    def __len__(self) -> int:
        return len(self.projectives)

    def index_of(self, S: Module) -> int:
        """Position of the class whose head is isomorphic to ``S``."""
        for i, simple in enumerate(self.simples):
            if simple.dim == S.dim and hom_basis(simple, S).dim:
                return i
        raise ValueError(f"{S!r} is not a head of {self.group.name}")

    @functools.cached_property
    def dual_indices(self) -> Tuple[int, ...]:
        """Class of the dual of each projective; the head of P_i^* is
        (soc P_i)^* = S_i^*."""
        return tuple(self.index_of(dual(S)) for S in self.simples)

    def describe(self) -> Dict:
        return {
            "group": self.group.name,
            "group_order": self.group.order,
            "field": self.field.name,
            "certificate": self.certificate,
            "projectives": [{
                "dim": P.dim,
                "multiplicity": mult,
                "simple_dim": S.dim,
                "simple_end_dim": end_basis(S).dim,
            } for P, S, mult in zip(self.projectives, self.simples,
                                    self.multiplicities)],
        }


def _decompose_regular(group: GroupData, field: FieldSpec, seed: int,
                       draws: int) -> ProjectiveTable:
    rng = np.random.default_rng(seed)
    summands = _decompose(regular_representation(group, field), rng, draws)
    heads = [_simple_of(s.module, rng, draws) for s in summands]

    classes: List[List[int]] = []
    for a, S in enumerate(heads):
        for cls in classes:
            rep = heads[cls[0]]
            if rep.dim == S.dim and hom_basis(rep, S).dim:
                cls.append(a)
                break
        else:
            classes.append([a])
    classes.sort(key=lambda cls: (summands[cls[0]].module.dim, cls[0]))

    projectives, simples, multiplicities = [], [], []
    for i, cls in enumerate(classes):
        P = summands[cls[0]].module
        projectives.append(dataclasses.replace(P, label=f"P{i}"))
        simples.append(dataclasses.replace(heads[cls[0]], label=f"S{i}"))
        multiplicities.append(len(cls))

    # kG/J(kG) contains dim S / dim End(S) copies of each simple S.
    diagnostics = []
    for P, S, mult in zip(projectives, simples, multiplicities):
        end_dim = end_basis(S).dim
        if mult * end_dim != S.dim:
            diagnostics.append({
                "projective_dim": P.dim,
                "simple_dim": S.dim,
                "simple_end_dim": end_dim,
                "multiplicity": mult
            })
    total = sum(m * P.dim for m, P in zip(multiplicities, projectives))
    if diagnostics or total != group.order:
        raise DecompositionInconclusive(
            f"Decomposition of k{group.name} over {field.name} failed the "
            "multiplicity check",
            diagnostics={
                "classes": diagnostics,
                "total_dim": total,
                "group_order": group.order
            })
    certificate = (CERTIFICATE_RANDOM if any(
        s.certificate == CERTIFICATE_RANDOM for s in summands) else
                   CERTIFICATE_EXHAUSTIVE)
    return ProjectiveTable(group, field, tuple(projectives), tuple(simples),
                           tuple(multiplicities), tuple(summands),
                           certificate)


def decompose_regular(group: GroupData,
                      field: FieldSpec,
                      seed: int = 0,
                      draws: Optional[int] = None) -> ProjectiveTable:
    """Indecomposable projectives of kG with their simple heads.

    Results are memoized per (group, field, seed).

    Raises:
        DecompositionInconclusive: If the summands found do not account
            for every simple module with the right multiplicity.
    """
    draws = get_config().decompose_draws if draws is None else draws
    key = (group.key, field, seed, draws)
    with _tables_lock:
        table = _tables.get(key)
    if table is not None:
        return table
    table = _decompose_regular(group, field, seed, draws)
    if table.certificate == CERTIFICATE_RANDOM and key not in _warned_random:
        _warned_random.add(key)
        warnings.warn(
            f"Projective summands of k{group.name} over {field.name} are "
            "certified by random endomorphisms and the multiplicity "
            "check.")
    with _tables_lock:
        return _tables.setdefault(key, table)


def socle_evaluation_map(S: Module, M: Module) -> ModuleMap:
    """beta: S^d -> M assembled from a basis of Hom(S, M)."""
    hb = hom_basis(S, M)
    if hb.dim == 0:
        return zero_map(zero_module(S.group, S.field), M)
    source = direct_sum([S] * hb.dim, label=f"{S.label}^{hb.dim}").module
    return ModuleMap(source, M, hstack(list(hb.mats)))


class ProjectiveFreeSplit(NamedTuple):
    """``M = core + image(projective_part)``.

    ``quotient`` is the projection M -> core with kernel the projective
    summand; ``summands`` lists the table indices of the accepted blocks.
    """
    module: Module
    core: Module
    quotient: ModuleMap
    projective_part: ModuleMap
    summands: Tuple[int, ...]

    def inclusion(self) -> ModuleMap:
        """An equivariant section core -> M of ``quotient``."""
        core, M = self.core, self.module
        if core.dim == 0:
            return zero_map(core, M)
        hb = hom_basis(core, M)
        k, d = hb.dim, core.dim
        stacked = hb.mats.view(np.ndarray).transpose(1, 0, 2).reshape(
            M.dim, k * d)
        composites = matmul(self.quotient.mat, M.GF(stacked))
        A = M.GF(composites.view(np.ndarray).reshape(d, k, d).transpose(
            1, 0, 2).reshape(k, d * d))
        target = eye(M.GF, d).reshape(d * d, 1)
        coeffs = solve_exact(A.T, target)
        return hb.combination(coeffs)


def projective_free_summand(M: Module, table=None) -> ProjectiveFreeSplit:
    """Split off a maximal projective summand of ``M``.

    Blocks ``P_i -> M`` of the projective cover are accepted greedily
    when they raise the rank of the accumulated map by ``dim P_i``; the
    accepted map is injective from a projective, hence split, and the core
    is its cokernel.
    """
    if table is None:
        table = decompose_regular(M.group, M.field)
    empty = zero_module(M.group, M.field)
    if M.dim == 0:
        return ProjectiveFreeSplit(M, M, identity_map(M), zero_map(empty, M),
                                   ())
    from ray_stmod.stable import projective_cover
    cover = projective_cover(M, table)
    base = cover.original.source.dim
    span = EchelonSpan(M.GF, M.dim)
    accepted = []
    for block in cover.blocks:
        start = base + block.offset
        cols = cover.replaced.mat[:, start:start + block.module.dim]
        if span.try_extend(cols.T, required=block.module.dim):
            accepted.append((block, cols))
        if span.rank == M.dim:
            break
    if not accepted:
        return ProjectiveFreeSplit(M, M, identity_map(M), zero_map(empty, M),
                                   ())
    source = direct_sum([b.module for b, _ in accepted]).module
    part = ModuleMap(source, M, hstack([cols for _, cols in accepted]))
    quotient = cokernel(part)
    core = dataclasses.replace(quotient.module, label=M.label)
    return ProjectiveFreeSplit(M, core,
                               ModuleMap(M, core, quotient.projection.mat),
                               part, tuple(b.index for b, _ in accepted))
