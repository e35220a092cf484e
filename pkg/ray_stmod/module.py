"""kG-modules given by generator matrices, and equivariant maps."""
import functools
import hashlib
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import galois
import numpy as np

from ray_stmod.exceptions import (Mismatch, NotARepresentation,
                                  NotEquivariant, ShapeError, UsageError)
from ray_stmod.field import FieldSpec, ScalarLike
from ray_stmod.group import GroupData, subgroup
from ray_stmod.linalg import (block_diag, eye, hstack, matmul, nullspace,
                              rank, row_reduce, vstack, zeros)


def _array_equal(A: galois.FieldArray, B: galois.FieldArray) -> bool:
    return A.shape == B.shape and bool(
        np.array_equal(A.view(np.ndarray), B.view(np.ndarray)))


@dataclass(frozen=True, eq=False)
class Module:
    """A representation of ``group`` on ``field^dim``.

    Only the generator matrices are stored; the matrix of any element is
    evaluated along the breadth-first parent tree of the group.
    """
    group: GroupData
    field: FieldSpec
    dim: int
    gens: Tuple[galois.FieldArray, ...]
    label: str = ""

    @property
    def GF(self):
        return self.field.GF

    @functools.cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.field.p, self.field.n, self.field.modulus,
                       self.group.key, self.dim)).encode())
        for g in self.gens:
            h.update(g.view(np.ndarray).astype(np.int64).tobytes())
        return h.hexdigest()

    @functools.cached_property
    def element_matrices(self) -> Tuple[galois.FieldArray, ...]:
        mats: List[galois.FieldArray] = [eye(self.GF, self.dim)]
        for s, parent in self.group.parents[1:]:
            mats.append(matmul(self.gens[s], mats[parent]))
        return tuple(mats)

    @functools.cached_property
    def element_stack(self) -> galois.FieldArray:
        """All element matrices as one ``(|G|, dim, dim)`` array."""
        return self.GF(
            np.stack([
                m.view(np.ndarray).astype(np.int64)
                for m in self.element_matrices
            ]).reshape(self.group.order, self.dim, self.dim))

    @functools.cached_property
    def inverse_gens(self) -> Tuple[galois.FieldArray, ...]:
        if self.dim == 0:
            return self.gens
        return tuple(np.linalg.inv(g) for g in self.gens)

    def orbit(self, V: galois.FieldArray) -> galois.FieldArray:
        """``(|G|, dim, q)`` array of ``g V`` for every group element,
        evaluated along the parent tree without element matrices."""
        order = self.group.order
        out = np.zeros((order, self.dim, V.shape[1]), dtype=np.int64)
        if self.dim == 0 or V.shape[1] == 0:
            return self.GF(out)
        out[0] = V.view(np.ndarray)
        for e, (s, parent) in enumerate(self.group.parents[1:], start=1):
            out[e] = (self.gens[s] @ self.GF(out[parent])).view(np.ndarray)
        return self.GF(out)

    def word_matrix(self, word: str) -> galois.FieldArray:
        return self.element_matrices[self.group.evaluate_word(word)]

    def check(self) -> None:
        """Raise NotARepresentation unless the generators are invertible
        and compatible with the group's multiplication table."""
        for name, g in zip(self.group.generator_names, self.gens):
            if rank(g) != self.dim:
                raise NotARepresentation(
                    f"Generator {name} of {self.label or 'module'} is "
                    "singular",
                    generator=name)
        if self.dim == 0:
            return
        mats = self.element_matrices
        everything = hstack(mats)
        for s, name in enumerate(self.group.generator_names):
            g_index = self.group.generator_indices[s]
            moved = matmul(self.gens[s], everything)
            expected = hstack(
                [mats[self.group.multiply(g_index, e)]
                 for e in range(self.group.order)])
            if not _array_equal(moved, expected):
                raise NotARepresentation(
                    f"Generator matrices of {self.label or 'module'} "
                    f"violate a relation involving {name}",
                    generator=name)

    def same_as(self, other: "Module") -> bool:
        return self is other or self.fingerprint == other.fingerprint

    def describe(self) -> dict:
        return {
            "label": self.label,
            "dim": self.dim,
            "group": self.group.name,
            "group_order": self.group.order,
            "field": self.field.name,
            "fingerprint": self.fingerprint,
        }

    def __repr__(self) -> str:
        label = f" {self.label}" if self.label else ""
        return (f"Module({self.group.name}, {self.field.name}, "
                f"dim={self.dim}{label})")


def check_compatible(*modules: Module) -> None:
    first = modules[0]
    for m in modules[1:]:
        if m.group != first.group:
            raise Mismatch(
                f"Modules over different groups: {first.group.name} and "
                f"{m.group.name}")
        if m.field != first.field:
            raise Mismatch(f"Modules over different fields: "
                           f"{first.field.name} and {m.field.name}")


def make_module(group: GroupData,
                field: FieldSpec,
                gens: Sequence,
                dim: Optional[int] = None,
                label: str = "",
                check: bool = True) -> Module:
    """Build a module from one square matrix per group generator.

    Raises:
        NotARepresentation: If a generator is singular or the matrices do
            not satisfy the group's relations.
    """
    if len(gens) != group.num_generators:
        raise NotARepresentation(
            f"{group.name} has {group.num_generators} generators, "
            f"got {len(gens)} matrices")
    mats = []
    for g in gens:
        mat = field.matrix(g)
        if mat.size == 0 and dim == 0:
            mat = zeros(field.GF, (0, 0))
        mats.append(mat)
    if dim is None:
        dim = mats[0].shape[0]
    for name, mat in zip(group.generator_names, mats):
        if mat.shape != (dim, dim):
            raise NotARepresentation(
                f"Generator {name} must be {dim}x{dim}, got {mat.shape}",
                generator=name)
    module = Module(group, field, dim, tuple(mats), label)
    if check:
        module.check()
    return module


def character(group: GroupData,
              field: FieldSpec,
              values: Sequence[ScalarLike],
              label: str = "") -> Module:
    """One-dimensional module with generator ``i`` acting by
    ``values[i]``."""
    gens = [[[field.encode(v)]] for v in values]
    return make_module(group, field, gens, label=label)


def trivial(group: GroupData, field: FieldSpec) -> Module:
    return character(group, field, [1] * group.num_generators, label="k")


def _parity(perm: Sequence[int]) -> int:
    seen = set()
    transpositions = 0
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        point = start
        while point not in seen:
            seen.add(point)
            point = perm[point]
            length += 1
        transpositions += length - 1
    return transpositions % 2


def sign_module(group: GroupData, field: FieldSpec) -> Module:
    """Generators act by the sign of their permutation (epsilon)."""
    # -1 is the constant polynomial p - 1 in every GF(p^n).
    values = [
        field.p - 1 if _parity(p) else 1 for p in group.generator_perms
    ]
    return character(group, field, values, label="eps")


def zero_module(group: GroupData, field: FieldSpec) -> Module:
    gens = [zeros(field.GF, (0, 0))] * group.num_generators
    return make_module(group, field, gens, dim=0, label="0", check=False)


def regular_representation(group: GroupData, field: FieldSpec) -> Module:
    """kG with generator g acting by left multiplication, h -> g h."""
    n = group.order
    gens = []
    for g in group.generator_indices:
        mat = np.zeros((n, n), dtype=np.int64)
        mat[group.mult_table[g], np.arange(n)] = 1
        gens.append(field.GF(mat))
    return make_module(group, field, gens, label="kG", check=False)


def jordan_block(group: GroupData, field: FieldSpec, d: int) -> Module:
    """The d-dimensional indecomposable J_d of a cyclic p-group."""
    if group.num_generators != 1:
        raise UsageError(
            f"Jordan blocks need a cyclic group, got {group.name}")
    mat = np.eye(d, dtype=np.int64) + np.eye(d, k=1, dtype=np.int64)
    return make_module(group, field, [mat], dim=d, label=f"J{d}")


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """An equivariant map acting on column vectors, shape
    ``(target.dim, source.dim)``."""
    source: Module
    target: Module
    mat: galois.FieldArray

    def __post_init__(self):
        expected = (self.target.dim, self.source.dim)
        if tuple(self.mat.shape) != expected:
            raise ShapeError(
                f"Map matrix must have shape {expected}, got "
                f"{tuple(self.mat.shape)}")
        if type(self.mat) is not self.source.GF:
            raise Mismatch(f"Map matrix lives in {type(self.mat).name}, "
                           f"expected {self.source.field.name}")

    @property
    def GF(self):
        return self.source.GF

    def is_equivariant(self) -> bool:
        for a, b in zip(self.source.gens, self.target.gens):
            if not _array_equal(matmul(b, self.mat), matmul(self.mat, a)):
                return False
        return True

    @functools.cached_property
    def rank(self) -> int:
        return rank(self.mat)

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_zero(self) -> bool:
        return not np.any(self.mat.view(np.ndarray))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if not isinstance(other, ModuleMap):
            return NotImplemented
        if not self.source.same_as(other.target):
            raise Mismatch(f"Cannot compose {self} after {other}")
        return ModuleMap(other.source, self.target,
                         matmul(self.mat, other.mat))

    def _check_parallel(self, other: "ModuleMap") -> None:
        if not (self.source.same_as(other.source)
                and self.target.same_as(other.target)):
            raise Mismatch(f"Cannot add {self} and {other}")

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, self.mat - other.mat)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, -self.mat)

    def scale(self, c: ScalarLike) -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         self.mat * self.source.field.scalar(c))

    def __repr__(self) -> str:
        return (f"ModuleMap({self.source.dim} -> {self.target.dim}, "
                f"{self.source.group.name}, {self.source.field.name})")


def make_map(source: Module, target: Module, mat,
             check: bool = True) -> ModuleMap:
    """Wrap ``mat`` as a map ``source -> target``.

    Raises:
        NotEquivariant: If ``check`` and the matrix does not intertwine
            the two actions.
    """
    check_compatible(source, target)
    if not isinstance(mat, galois.FieldArray):
        mat = source.field.matrix(mat)
        if mat.size == 0:
            mat = zeros(source.GF, (target.dim, source.dim))
    f = ModuleMap(source, target, mat)
    if check and not f.is_equivariant():
        raise NotEquivariant(
            f"Matrix does not intertwine {source!r} and {target!r}")
    return f


def identity_map(M: Module) -> ModuleMap:
    return ModuleMap(M, M, eye(M.GF, M.dim))


def zero_map(M: Module, N: Module) -> ModuleMap:
    check_compatible(M, N)
    return ModuleMap(M, N, zeros(M.GF, (N.dim, M.dim)))


class DirectSum(NamedTuple):
    module: Module
    inclusions: Tuple[ModuleMap, ...]
    projections: Tuple[ModuleMap, ...]


def direct_sum(modules: Sequence[Module], label: str = "") -> DirectSum:
    """Block-diagonal direct sum with its inclusions and projections."""
    if not modules:
        raise UsageError("direct_sum needs at least one module")
    check_compatible(*modules)
    first = modules[0]
    GF = first.GF
    gens = tuple(
        block_diag([m.gens[s] for m in modules], field=GF)
        for s in range(first.group.num_generators))
    total = sum(m.dim for m in modules)
    label = label or " + ".join(m.label or "?" for m in modules)
    module = Module(first.group, first.field, total, gens, label)
    inclusions, projections = [], []
    offset = 0
    for m in modules:
        mat = zeros(GF, (total, m.dim))
        mat[offset:offset + m.dim, :] = eye(GF, m.dim)
        inclusions.append(ModuleMap(m, module, mat))
        projections.append(ModuleMap(module, m, mat.T.copy()))
        offset += m.dim
    return DirectSum(module, tuple(inclusions), tuple(projections))


def stack_targets(maps: Sequence[ModuleMap],
                  target: Optional[Module] = None) -> ModuleMap:
    """``M -> N_1 + ... + N_r`` from maps ``M -> N_i`` into their direct
    sum."""
    source = maps[0].source
    for f in maps[1:]:
        if not f.source.same_as(source):
            raise Mismatch("stack_targets needs a common source")
    if target is None:
        target = direct_sum([f.target for f in maps]).module
    return ModuleMap(source, target, vstack([f.mat for f in maps]))


def stack_sources(maps: Sequence[ModuleMap],
                  source: Optional[Module] = None) -> ModuleMap:
    """``M_1 + ... + M_r -> N`` from maps ``M_i -> N``."""
    target = maps[0].target
    for f in maps[1:]:
        if not f.target.same_as(target):
            raise Mismatch("stack_sources needs a common target")
    if source is None:
        source = direct_sum([f.source for f in maps]).module
    return ModuleMap(source, target, hstack([f.mat for f in maps]))


@functools.singledispatch
def dual(obj):
    raise TypeError(f"Cannot dualize {type(obj)}")


@dual.register
def _dual_module(M: Module) -> Module:
    gens = tuple(g.T.copy() for g in M.inverse_gens)
    label = M.label[:-1] if M.label.endswith("*") else (
        f"{M.label}*" if M.label else "")
    return Module(M.group, M.field, M.dim, gens, label)


@dual.register
def _dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), f.mat.T.copy())


def restrict(M: Module,
             words: Sequence[str],
             names: Optional[Sequence[str]] = None) -> Module:
    """Restriction of ``M`` to the subgroup generated by ``words``."""
    H = subgroup(M.group, words, names)
    gens = [M.word_matrix(w) for w in words]
    label = f"res({M.label})" if M.label else ""
    return make_module(H, M.field, gens, dim=M.dim, label=label)


class Submodule(NamedTuple):
    module: Module
    inclusion: ModuleMap


class Quotient(NamedTuple):
    module: Module
    projection: ModuleMap
    section: galois.FieldArray


class ImageKernel(NamedTuple):
    image: Submodule
    kernel: Submodule
    cokernel: Quotient
    corestriction: ModuleMap


def _induced(M: Module, basis: galois.FieldArray, pivots,
             label: str) -> Module:
    """Action on the span of the columns of ``basis`` whose rows
    ``pivots`` form the identity."""
    gens = tuple(
        matmul(g, basis)[list(pivots), :] for g in M.gens)
    return Module(M.group, M.field, basis.shape[1], gens, label)


def image(f: ModuleMap) -> Tuple[Submodule, ModuleMap]:
    """The image submodule of ``f`` and the corestriction onto it."""
    red = row_reduce(f.mat.T)
    basis = red.rref[:red.rank].T.copy()
    im = _induced(f.target, basis, red.pivots, "im")
    inclusion = ModuleMap(im, f.target, basis)
    corestriction = ModuleMap(f.source, im, f.mat[list(red.pivots), :])
    return Submodule(im, inclusion), corestriction


def kernel(f: ModuleMap) -> Submodule:
    K = nullspace(f.mat)
    pivots = row_reduce(K.T).pivots if K.shape[1] else ()
    ker = _induced(f.source, K, pivots, "ker")
    return Submodule(ker, ModuleMap(ker, f.source, K))


def cokernel(f: ModuleMap) -> Quotient:
    """Quotient of the target by the image of ``f``, with basis the
    non-pivot coordinates of the image's reduced echelon basis."""
    N = f.target
    GF = N.GF
    red = row_reduce(f.mat.T)
    r = red.rank
    pivots = list(red.pivots)
    free = [j for j in range(N.dim) if j not in set(pivots)]
    q = zeros(GF, (len(free), N.dim))
    section = zeros(GF, (N.dim, len(free)))
    if free:
        q[:, free] = eye(GF, len(free))
        section[free, :] = eye(GF, len(free))
        if r:
            q[:, pivots] = -red.rref[:r][:, free].T
    gens = tuple(matmul(matmul(q, g), section) for g in N.gens)
    coker = Module(N.group, N.field, len(free), gens, "coker")
    return Quotient(coker, ModuleMap(N, coker, q), section)


def image_kernel(f: ModuleMap) -> ImageKernel:
    im, corestriction = image(f)
    return ImageKernel(im, kernel(f), cokernel(f), corestriction)
