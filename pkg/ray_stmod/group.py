"""Finite permutation groups with enumerated elements and a Cayley table."""
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ray_stmod.config import get_config
from ray_stmod.exceptions import GroupTooLarge, UsageError

Perm = Tuple[int, ...]

PRODUCT_GENERATOR_NAMES = ("x", "y", "z", "w", "v", "u")

_WORD_FACTOR_RE = re.compile(r"^([A-Za-z_]\w*)(?:\^(-?\d+))?$")
_PRESET_RE = re.compile(r"^(C|S|A)(\d+)$|^(Q8)$")


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p[q[i]]."""
    return tuple(p[i] for i in q)


@dataclass(frozen=True, eq=False)
class GroupData:
    """A finite group enumerated from permutation generators.

    Elements are listed breadth-first from the identity (index 0); the
    successors of an element ``h`` are ``g o h`` for the generators ``g`` in
    declared order. ``parents[e] = (s, p)`` records that element ``e`` was
    first reached as ``generator[s] o elements[p]``.
    """
    name: str
    generator_names: Tuple[str, ...]
    generator_perms: Tuple[Perm, ...]
    elements: Tuple[Perm, ...]
    mult_table: np.ndarray = field(repr=False)
    generator_indices: Tuple[int, ...]
    parents: Tuple[Tuple[int, int], ...] = field(repr=False)
    degree: int
    preset: Optional[str] = None

    @property
    def key(self) -> tuple:
        return (self.degree, self.generator_perms, self.generator_names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupData):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    @property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.mult_table == 0, axis=1)

    def multiply(self, a: int, b: int) -> int:
        return int(self.mult_table[a, b])

    def generator_position(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise UsageError(f"Unknown generator {name!r}, expected one of "
                             f"{list(self.generator_names)}")

    def parse_word(self, word: str) -> List[Tuple[int, int]]:
        """Split a word such as ``"x^3*y^-1*z"`` into (generator position,
        exponent) factors, left to right. ``"1"`` is the empty word."""
        word = word.replace(" ", "")
        if word in ("", "1"):
            return []
        factors = []
        for token in word.split("*"):
            match = _WORD_FACTOR_RE.match(token)
            if not match:
                raise UsageError(f"Cannot parse {token!r} in word {word!r}")
            exponent = int(match.group(2)) if match.group(2) else 1
            factors.append(
                (self.generator_position(match.group(1)), exponent))
        return factors

    def evaluate_word(self, word: str) -> int:
        inverses = self.inverses
        element = 0
        for pos, exponent in self.parse_word(word):
            g = self.generator_indices[pos]
            if exponent < 0:
                g = int(inverses[g])
            for _ in range(abs(exponent)):
                element = self.multiply(element, g)
        return element

    def describe(self) -> Dict:
        return {
            "name": self.name,
            "order": self.order,
            "generators": list(self.generator_names),
        }


def enumerate_group(generators: Sequence[Sequence[int]],
                    names: Optional[Sequence[str]] = None,
                    name: str = "G",
                    bound: Optional[int] = None,
                    preset: Optional[str] = None) -> GroupData:
    """Close ``generators`` (permutations of 0..d-1) under composition.

    Raises:
        GroupTooLarge: If more than ``bound`` elements are reached
            (``STMOD_GROUP_BOUND`` by default).
    """
    bound = get_config().group_bound if bound is None else bound
    perms = tuple(tuple(int(i) for i in g) for g in generators)
    if not perms:
        raise UsageError("A group needs at least one generator")
    degree = len(perms[0])
    for g in perms:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise UsageError(
                f"Generators must be permutations of 0..{degree - 1}, "
                f"got {g}")
    if names is None:
        names = [f"g{i}" for i in range(len(perms))]
    names = tuple(names)
    if len(names) != len(perms) or len(set(names)) != len(names):
        raise UsageError(
            f"Need {len(perms)} distinct generator names, got {names}")

    identity = tuple(range(degree))
    index: Dict[Perm, int] = {identity: 0}
    elements: List[Perm] = [identity]
    parents: List[Tuple[int, int]] = [(-1, -1)]
    queue = deque([0])
    while queue:
        current = queue.popleft()
        for s, g in enumerate(perms):
            product = compose(g, elements[current])
            if product in index:
                continue
            if len(elements) >= bound:
                raise GroupTooLarge(
                    f"Group {name} has more than {bound} elements",
                    bound=bound)
            index[product] = len(elements)
            elements.append(product)
            parents.append((s, current))
            queue.append(index[product])

    table = np.asarray(elements, dtype=np.int32)
    lookup = {row.tobytes(): i for i, row in enumerate(table)}
    mult = np.empty((len(elements), len(elements)), dtype=np.int64)
    for a in range(len(elements)):
        products = table[a][table]
        mult[a] = [lookup[row.tobytes()] for row in products]

    return GroupData(
        name=name,
        generator_names=names,
        generator_perms=perms,
        elements=tuple(elements),
        mult_table=mult,
        generator_indices=tuple(index[g] for g in perms),
        parents=tuple(parents),
        degree=degree,
        preset=preset)


def _cycle(points: Sequence[int], degree: int) -> Perm:
    perm = list(range(degree))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        perm[a] = b
    return tuple(perm)


def cyclic_group(n: int, bound: Optional[int] = None) -> GroupData:
    if n < 1:
        raise UsageError(f"C_n needs n >= 1, got {n}")
    return enumerate_group([_cycle(range(n), n)], ["x"],
                           name=f"C{n}",
                           bound=bound,
                           preset=f"C{n}")


def symmetric_group(n: int, bound: Optional[int] = None) -> GroupData:
    if n < 2:
        raise UsageError(f"S_n needs n >= 2, got {n}")
    return enumerate_group(
        [_cycle(range(n), n), _cycle([0, 1], n)], ["x", "y"],
        name=f"S{n}",
        bound=bound,
        preset=f"S{n}")


def alternating_group(n: int, bound: Optional[int] = None) -> GroupData:
    if n < 3:
        raise UsageError(f"A_n needs n >= 3, got {n}")
    gens = [_cycle([0, 1, 2], n)]
    if n > 3:
        long_cycle = range(n) if n % 2 else range(1, n)
        gens.append(_cycle(long_cycle, n))
    return enumerate_group(
        gens, ["x", "y"][:len(gens)],
        name=f"A{n}",
        bound=bound,
        preset=f"A{n}")


# Units 1, i, j, k; index = unit + 4 * (sign is negative).
_QUATERNION_UNITS = {
    (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
    (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
    (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
}


def _quaternion_left(unit: int) -> Perm:
    perm = []
    for idx in range(8):
        other, negative = idx % 4, idx // 4
        if other == 0:
            prod, sign = unit, 0
        else:
            prod, sign = _QUATERNION_UNITS[(unit, other)]
        perm.append(prod + 4 * ((sign + negative) % 2))
    return tuple(perm)


def quaternion_group(bound: Optional[int] = None) -> GroupData:
    """Q8 acting on itself by left multiplication; a = i, b = j."""
    return enumerate_group([_quaternion_left(1),
                            _quaternion_left(2)], ["a", "b"],
                           name="Q8",
                           bound=bound,
                           preset="Q8")


def direct_product(groups: Sequence[GroupData],
                   bound: Optional[int] = None) -> GroupData:
    """Direct product acting on disjoint point blocks.

    Generators keep their factor order and are renamed x, y, z, w, v, u
    (then g6, g7, ...).
    """
    degree = sum(g.degree for g in groups)
    perms = []
    offset = 0
    for g in groups:
        for perm in g.generator_perms:
            full = list(range(degree))
            for i, image in enumerate(perm):
                full[offset + i] = offset + image
            perms.append(tuple(full))
        offset += g.degree
    names = [
        PRODUCT_GENERATOR_NAMES[i]
        if i < len(PRODUCT_GENERATOR_NAMES) else f"g{i}"
        for i in range(len(perms))
    ]
    name = "x".join(g.name for g in groups)
    presets = [g.preset for g in groups]
    preset = name if all(presets) else None
    return enumerate_group(
        perms, names, name=name, bound=bound, preset=preset)


def parse_group(text: str, bound: Optional[int] = None) -> GroupData:
    """Build a preset group: ``C9``, ``S3``, ``A4``, ``Q8`` or a direct
    product such as ``C3xS3``."""
    factors = []
    for token in re.split(r"[x×]", text.strip()):
        match = _PRESET_RE.match(token.strip())
        if not match:
            raise UsageError(f"Unknown group preset {token!r} in {text!r}")
        if match.group(3):
            factors.append(quaternion_group(bound=bound))
            continue
        kind, n = match.group(1), int(match.group(2))
        builder = {
            "C": cyclic_group,
            "S": symmetric_group,
            "A": alternating_group
        }[kind]
        factors.append(builder(n, bound=bound))
    if len(factors) == 1:
        return factors[0]
    return direct_product(factors, bound=bound)


def subgroup(group: GroupData,
             words: Sequence[str],
             names: Optional[Sequence[str]] = None,
             bound: Optional[int] = None) -> GroupData:
    """Subgroup generated by words in the generators of ``group``.

    A word that is a single generator name keeps that name; other words
    get ``h0``, ``h1``, ... unless ``names`` is given.
    """
    if not words:
        raise UsageError("Restriction needs at least one word")
    if names is None:
        names = [
            w.strip() if w.strip() in group.generator_names else f"h{i}"
            for i, w in enumerate(words)
        ]
    perms = [group.elements[group.evaluate_word(w)] for w in words]
    return enumerate_group(
        perms,
        names,
        name=f"<{','.join(w.strip() for w in words)}> in {group.name}",
        bound=bound)
