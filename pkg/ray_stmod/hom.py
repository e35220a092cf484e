"""Hom spaces between kG-modules, their stably trivial part, and the stable
quotient.

A map ``X: M -> N`` is determined by its values on the module generators
of ``M``, so bases are stored in *generator coordinates*: the columns
``X[:, J]`` of the generator indices ``J``, flattened row-major. The
reduced echelon basis in these coordinates is the canonical basis; both
solution routes below return it.
"""
import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import galois
import numpy as np

from ray_stmod.config import get_config
from ray_stmod.exceptions import UsageError
from ray_stmod.linalg import (EchelonSpan, eye, hstack, kron, matmul,
                              nullspace, rank, row_basis, row_reduce,
                              solve_exact, vstack, zeros)
from ray_stmod.module import Module, ModuleMap, check_compatible

HOM_METHODS = ("auto", "kron", "presentation")


def _ints(A) -> np.ndarray:
    return A.view(np.ndarray).astype(np.int64)


def _spin(span: EchelonSpan, vectors: galois.FieldArray, act) -> None:
    """Close ``span + vectors`` under the row actions ``act``."""
    frontier = span.absorb(vectors)
    while frontier.shape[0]:
        frontier = span.absorb(vstack([a(frontier) for a in act]))


def _free_actions(module: Module, r: int) -> List:
    """Row actions of the group generators on kG^r, basis ``i|G| + h``."""
    group = module.group
    order = group.order
    actions = []
    for g in group.generator_indices:
        dest = (np.arange(r)[:, None] * order +
                group.mult_table[g][None, :]).reshape(-1)
        src = np.empty_like(dest)
        src[dest] = np.arange(r * order)
        actions.append(lambda V, src=src: V[:, src])
    return actions


class Presentation:
    """Free presentation ``kG^c -> kG^r -> M -> 0`` of a module.

    Attributes:
        generators: Standard basis indices ``J`` whose vectors generate
            ``M``, found by spinning e_0, e_1, ... in order.
        cover: ``(dim, r|G|)`` matrix of ``kG^r -> M``; column
            ``i|G| + h`` is ``h e_{J[i]}``.
        section: A linear right inverse of ``cover``.
        relations: ``(c, r|G|)`` rows generating the kernel of ``cover``
            as a kG-module.
    """

    def __init__(self, module: Module):
        self.module = module
        self.generators = self._spin_generators()

    @property
    def rank(self) -> int:
        return len(self.generators)

    def _spin_generators(self) -> Tuple[int, ...]:
        M = self.module
        span = EchelonSpan(M.GF, M.dim)
        act = [lambda V, g=g: matmul(V, g.T) for g in M.gens]
        generators = []
        for j in range(M.dim):
            if span.rank == M.dim:
                break
            if span.contains_unit(j):
                continue
            generators.append(j)
            unit = zeros(M.GF, (1, M.dim))
            unit[0, j] = 1
            _spin(span, unit, act)
        return tuple(generators)

    @functools.cached_property
    def cover(self) -> galois.FieldArray:
        M = self.module
        order, r = M.group.order, self.rank
        if M.dim == 0:
            return zeros(M.GF, (0, 0))
        orbit = _ints(M.orbit(eye(M.GF, M.dim)[:, list(self.generators)]))
        return M.GF(orbit.transpose(1, 2, 0).reshape(M.dim, r * order))

    @functools.cached_property
    def section(self) -> galois.FieldArray:
        M = self.module
        return solve_exact(self.cover, eye(M.GF, M.dim))

    @functools.cached_property
    def relations(self) -> galois.FieldArray:
        M = self.module
        width = self.rank * M.group.order
        K = nullspace(self.cover).T
        span = EchelonSpan(M.GF, width)
        act = _free_actions(M, self.rank)
        rows = []
        for v in K:
            if span.rank == K.shape[0]:
                break
            v = v.reshape(1, -1)
            if span.contains(v):
                continue
            rows.append(v)
            _spin(span, v, act)
        if not rows:
            return zeros(M.GF, (0, width))
        return vstack(rows)


@functools.lru_cache(maxsize=512)
def presentation(M: Module) -> Presentation:
    return Presentation(M)


def module_generators(M: Module) -> Tuple[int, ...]:
    return presentation(M).generators


@dataclass(frozen=True, eq=False)
class HomBasis:
    """A basis of Hom(source, target) in generator coordinates.

    ``coords`` has one row per basis map, of length ``target.dim * r``
    with entry ``a * r + i`` equal to ``X[a, generators[i]]``. ``full``
    optionally caches the row-major flattened matrices.
    """
    source: Module
    target: Module
    coords: galois.FieldArray = field(repr=False)
    generators: Tuple[int, ...]
    full: Optional[galois.FieldArray] = field(default=None, repr=False)

    @property
    def GF(self):
        return self.source.GF

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def __len__(self) -> int:
        return self.dim

    @property
    def width(self) -> int:
        return self.coords.shape[1]

    @property
    def vectors(self) -> galois.FieldArray:
        return self.coords

    @functools.cached_property
    def mats(self) -> galois.FieldArray:
        """All basis maps as one ``(k, target.dim, source.dim)`` array."""
        k, dN, dM = self.dim, self.target.dim, self.source.dim
        if self.full is not None:
            return self.full.reshape(k, dN, dM)
        return self.apply(eye(self.GF, dM))

    @property
    def maps(self) -> List[ModuleMap]:
        return [
            ModuleMap(self.source, self.target, m.copy()) for m in self.mats
        ]

    def __iter__(self) -> Iterator[ModuleMap]:
        return iter(self.maps)

    def apply(self, U: galois.FieldArray) -> galois.FieldArray:
        """``X_l @ U`` for every basis map, as a ``(k, target.dim, q)``
        array."""
        k, dN, dM = self.dim, self.target.dim, self.source.dim
        q = U.shape[1]
        if k == 0 or dN == 0 or dM == 0 or q == 0:
            return zeros(self.GF, (k, dN, q))
        if self.full is not None:
            flat = matmul(self.full.reshape(k * dN, dM), U)
            return flat.reshape(k, dN, q)
        pres = presentation(self.source)
        r, order = pres.rank, self.source.group.order
        # X_l = sum over i, h of (h w_{l,i}) section[i|G| + h, :]
        values = _ints(self.coords).reshape(k, dN, r)
        V = self.GF(values.transpose(1, 0, 2).reshape(dN, k * r))
        orbit = _ints(self.target.orbit(V)).reshape(order, dN, k, r)
        Y = self.GF(orbit.transpose(2, 1, 3, 0).reshape(k * dN, r * order))
        flat = matmul(Y, matmul(pres.section, U))
        return flat.reshape(k, dN, q)

    def combination(self, coeffs) -> ModuleMap:
        if isinstance(coeffs, galois.FieldArray):
            coeffs = coeffs.view(np.ndarray)
        values = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        if values.size != self.dim:
            raise UsageError(
                f"Need {self.dim} coefficients, got {values.size}")
        shape = (self.target.dim, self.source.dim)
        flat = matmul(
            self.GF(values.reshape(1, self.dim)),
            self.mats.reshape(self.dim, shape[0] * shape[1]))
        return ModuleMap(self.source, self.target, flat.reshape(shape))

    def span(self) -> EchelonSpan:
        return EchelonSpan(self.GF, self.width, self.coords)

    def coordinates_of(self, f: ModuleMap) -> galois.FieldArray:
        return f.mat[:, list(self.generators)].reshape(1, self.width)

    def contains(self, f: ModuleMap) -> bool:
        return self.span().contains(self.coordinates_of(f))

    def subset(self, rows: Sequence[int]) -> "HomBasis":
        rows = list(rows)
        full = self.full[rows] if self.full is not None else None
        return HomBasis(self.source, self.target, self.coords[rows],
                        self.generators, full)


def _kron_basis(M: Module, N: Module) -> HomBasis:
    GF = M.GF
    dM, dN = M.dim, N.dim
    J = module_generators(M)
    blocks = [
        kron(b, eye(GF, dM)) - kron(eye(GF, dN), a.T)
        for a, b in zip(M.gens, N.gens)
    ]
    V = nullspace(vstack(blocks)).T
    k = V.shape[0]
    T = [a * dM + j for a in range(dN) for j in J]
    if k == 0:
        return HomBasis(M, N, zeros(GF, (0, len(T))), J,
                        zeros(GF, (0, dN * dM)))
    red = row_reduce(hstack([V[:, T], V]), ncols=len(T))
    assert red.rank == k, "generator coordinates must determine a map"
    return HomBasis(M, N, red.rref[:k, :len(T)], J, red.rref[:k, len(T):])


def _presentation_basis(M: Module, N: Module) -> HomBasis:
    GF = M.GF
    pres = presentation(M)
    r, order, dN = pres.rank, M.group.order, N.dim
    kappa = pres.relations
    c = kappa.shape[0]
    if c == 0:
        return HomBasis(M, N, eye(GF, dN * r), pres.generators)
    stack = N.element_stack.reshape(order, dN * dN)
    # Relation j kills w_i through sum_h kappa[j, i|G| + h] h, as dN x dN
    # blocks [j, b, a] acting on column a of w_i.
    blocks = np.zeros((c, dN, dN, r), dtype=np.int64)
    for i in range(r):
        A = matmul(kappa[:, i * order:(i + 1) * order], stack)
        blocks[..., i] = _ints(A).reshape(c, dN, dN)
    C = GF(blocks.reshape(c * dN, dN * r))
    return HomBasis(M, N, nullspace(C).T, pres.generators)


def resolve_method(M: Module, N: Module, method: str = "auto") -> str:
    if method not in HOM_METHODS:
        raise UsageError(
            f"method must be one of {HOM_METHODS}, got {method!r}")
    if method != "auto":
        return method
    if min(M.dim, N.dim) <= 1 or M.dim * N.dim <= get_config().kron_limit:
        return "kron"
    return "presentation"


@functools.lru_cache(maxsize=256)
def _hom_basis(M: Module, N: Module, method: str) -> HomBasis:
    if M.dim == 0 or N.dim == 0:
        J = module_generators(M)
        return HomBasis(M, N, zeros(M.GF, (0, N.dim * len(J))), J,
                        zeros(M.GF, (0, N.dim * M.dim)))
    if method == "kron":
        return _kron_basis(M, N)
    return _presentation_basis(M, N)


def hom_basis(M: Module, N: Module, method: str = "auto") -> HomBasis:
    """Canonical basis of Hom(M, N).

    Args:
        M: Source module.
        N: Target module.
        method (str): ``"kron"`` solves the intertwining equations
            ``rho_N(g) X = X rho_M(g)`` directly; ``"presentation"`` solves
            for the images of the module generators of ``M`` against its
            relations. ``"auto"`` picks kron for small pairs. Both return
            the same basis.

    Raises:
        Mismatch: If the modules live over different groups or fields.
    """
    check_compatible(M, N)
    return _hom_basis(M, N, resolve_method(M, N, method))


def end_basis(M: Module) -> HomBasis:
    return hom_basis(M, M)


def phom_basis(M: Module, N: Module, hull=None, table=None) -> HomBasis:
    """Basis of the maps M -> N that factor through a projective module.

    These are exactly the composites ``h o iota`` with ``iota: M -> I`` the
    injective hull, so the spanning set is read off Hom(P, N) for each
    projective block of the hull.
    """
    check_compatible(M, N)
    J = module_generators(M)
    width = N.dim * len(J)
    empty = HomBasis(M, N, zeros(M.GF, (0, width)), J)
    if M.dim == 0 or N.dim == 0:
        return empty
    if hull is None:
        from ray_stmod.stable import injective_hull
        hull = injective_hull(M, table)
    base = hull.original.target.dim
    rows = []
    for block in hull.blocks:
        start = base + block.offset
        iota = hull.replaced.mat[start:start + block.module.dim, list(J)]
        hb = hom_basis(block.module, N)
        if hb.dim:
            rows.append(hb.apply(iota).reshape(hb.dim, width))
    if not rows:
        return empty
    return HomBasis(M, N, row_basis(vstack(rows)), J)


def is_stably_trivial(f: ModuleMap, hull=None, table=None) -> bool:
    """Whether ``f`` factors through a projective module."""
    if f.is_zero():
        return True
    return phom_basis(f.source, f.target, hull, table).contains(f)


class StableHom(NamedTuple):
    dimension: int
    lifted: HomBasis
    hom: HomBasis
    phom: HomBasis


def stable_hom_basis(M: Module, N: Module, hull=None,
                     table=None) -> StableHom:
    """Basis of the stable Hom(M, N) = Hom(M, N) / PHom(M, N).

    ``lifted`` holds the canonical Hom basis maps whose residues modulo
    PHom are independent, taken greedily in basis order.
    """
    hom = hom_basis(M, N)
    if hom.dim == 0:
        return StableHom(0, hom, hom, hom)
    phom = phom_basis(M, N, hull, table)
    residues = phom.span().reduce(hom.coords)
    chosen = list(row_reduce(residues.T).pivots)
    assert len(chosen) == hom.dim - phom.dim
    return StableHom(len(chosen), hom.subset(chosen), hom, phom)


def find_isomorphism(M: Module, N: Module,
                     seed: Optional[int] = None) -> Optional[ModuleMap]:
    """An explicit isomorphism M -> N, or None if none was found.

    Small Hom spaces are enumerated exhaustively, so None is definitive
    there; larger ones are sampled with ``STMOD_ISO_DRAWS`` seeded random
    combinations.
    """
    check_compatible(M, N)
    if M.dim != N.dim:
        return None
    d = M.dim
    if d == 0:
        return ModuleMap(M, N, zeros(M.GF, (0, 0)))
    hb = hom_basis(M, N)
    k = hb.dim
    if k == 0:
        return None
    mats = hb.mats
    for mat in mats:
        if rank(mat) == d:
            return ModuleMap(M, N, mat.copy())
    config = get_config()
    q = M.field.order
    if k <= config.exhaustive_max_dim and q**k <= config.exhaustive_limit:
        candidates = itertools.product(range(q), repeat=k)
    else:
        rng = np.random.default_rng(config.seed if seed is None else seed)
        candidates = (rng.integers(0, q, size=k)
                      for _ in range(config.iso_draws))
    flat = mats.reshape(k, d * d)
    for coeffs in candidates:
        row = M.GF(np.asarray(coeffs, dtype=np.int64).reshape(1, k))
        mat = matmul(row, flat).reshape(d, d)
        if rank(mat) == d:
            return ModuleMap(M, N, mat)
    return None
