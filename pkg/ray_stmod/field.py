"""Finite fields GF(p^n) backed by ``galois`` field array classes."""
import functools
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Type, Union

import galois
import numpy as np

from ray_stmod.exceptions import DivisionByZero, FieldMismatch

# Monic defining polynomials, little-endian coefficients over GF(p).
# Conway polynomials, matching galois' defaults.
BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 3): (1, 2, 0, 1),
}

_FIELD_RE = re.compile(
    r"^\s*(?:GF)?\s*\(?\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)?\s*$", re.IGNORECASE)

ScalarLike = Union[int, Sequence[int], galois.FieldArray]


@functools.lru_cache(maxsize=None)
def _galois_field(p: int, n: int,
                  modulus: Tuple[int, ...]) -> Type[galois.FieldArray]:
    if n == 1:
        return galois.GF(p)
    poly = galois.Poly(list(modulus), field=galois.GF(p), order="asc")
    return galois.GF(p**n, irreducible_poly=poly)


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^n) defined by a monic irreducible modulus.

    ``modulus`` holds little-endian coefficients over GF(p), so GF(4) is
    ``FieldSpec(2, 2, (1, 1, 1))`` (x^2 + x + 1). Prime fields use the
    convention ``modulus == (0, 1)``.
    """
    p: int
    n: int = 1
    modulus: Tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if not galois.is_prime(self.p):
            raise ValueError(f"Characteristic must be prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"Extension degree must be >= 1, got {self.n}")
        modulus = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", modulus)
        if len(modulus) != self.n + 1:
            raise ValueError(f"Modulus of GF({self.p}^{self.n}) must have "
                             f"{self.n + 1} coefficients, got {modulus}")
        if any(c < 0 or c >= self.p for c in modulus):
            raise ValueError(
                f"Modulus coefficients must lie in [0, {self.p}), "
                f"got {modulus}")
        if modulus[-1] != 1:
            raise ValueError(f"Modulus must be monic, got {modulus}")
        if self.n == 1:
            if modulus != (0, 1):
                raise ValueError(
                    f"Prime fields use the modulus (0, 1), got {modulus}")
        else:
            poly = galois.Poly(
                list(modulus), field=galois.GF(self.p), order="asc")
            if not poly.is_irreducible():
                raise ValueError(
                    f"Modulus {poly} is not irreducible over GF({self.p})")

    @classmethod
    def from_order(cls, q: int,
                   modulus: Optional[Sequence[int]] = None) -> "FieldSpec":
        if not galois.is_prime_power(q):
            raise ValueError(f"Field order must be a prime power, got {q}")
        primes, exponents = galois.factors(q)
        p, n = int(primes[0]), int(exponents[0])
        if modulus is None:
            if n == 1:
                modulus = (0, 1)
            elif (p, n) in BUILTIN_MODULI:
                modulus = BUILTIN_MODULI[(p, n)]
            else:
                raise ValueError(
                    f"No built-in defining polynomial for GF({q}); "
                    "supply a monic irreducible modulus.")
        return cls(p, n, tuple(modulus))

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def name(self) -> str:
        return f"GF({self.order})"

    @property
    def GF(self) -> Type[galois.FieldArray]:
        return _galois_field(self.p, self.n, self.modulus)

    def elements(self) -> galois.FieldArray:
        return self.GF.elements

    def encode(self, coeffs: ScalarLike) -> int:
        """Integer representation of a scalar, sum of c_i * p^i."""
        if isinstance(coeffs, (int, np.integer)):
            value = int(coeffs)
            if self.n == 1:
                return value % self.p
            if not 0 <= value < self.order:
                raise ValueError(
                    f"Integer {value} is not an element of {self.name}")
            return value
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != self.n:
            raise ValueError(f"Scalars of {self.name} need {self.n} "
                             f"coefficients, got {coeffs}")
        if any(c < 0 or c >= self.p for c in coeffs):
            raise ValueError(
                f"Coefficients must lie in [0, {self.p}), got {coeffs}")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def scalar(self, value: ScalarLike) -> galois.FieldArray:
        if isinstance(value, galois.FieldArray):
            if type(value) is not self.GF:
                raise FieldMismatch(
                    f"Scalar lives in {type(value).name}, "
                    f"expected {self.name}")
            return value
        return self.GF(self.encode(value))

    def scalar_coeffs(self, value: galois.FieldArray) -> Tuple[int, ...]:
        integer = int(value)
        return tuple((integer // self.p**i) % self.p for i in range(self.n))

    def matrix(self, rows) -> galois.FieldArray:
        """Field matrix from nested lists of integers or, for extension
        fields, of little-endian coefficient lists."""
        if isinstance(rows, galois.FieldArray):
            if type(rows) is not self.GF:
                raise FieldMismatch(f"Matrix lives in {type(rows).name}, "
                                    f"expected {self.name}")
            return rows
        array = np.asarray(rows, dtype=np.int64)
        if array.ndim == 3:
            if array.shape[-1] != self.n:
                raise ValueError(f"Entries of {self.name} need {self.n} "
                                 f"coefficients, got {array.shape[-1]}")
            if np.any(array < 0) or np.any(array >= self.p):
                raise ValueError(
                    f"Coefficients must lie in [0, {self.p})")
            array = (array * self.p**np.arange(self.n)).sum(axis=-1)
        elif self.n == 1:
            array = np.mod(array, self.p)
        if array.ndim != 2:
            if array.size == 0:
                array = array.reshape(0, 0)
            else:
                raise ValueError(
                    f"Expected a 2-D matrix, got shape {array.shape}")
        return self.GF(array)

    def to_json_matrix(self, mat: galois.FieldArray) -> list:
        ints = mat.view(np.ndarray).astype(np.int64)
        if self.n == 1:
            return ints.tolist()
        return [[list(self.scalar_coeffs(self.GF(v))) for v in row]
                for row in ints]


def parse_field(text: str) -> FieldSpec:
    """Parse ``"GF4"``, ``"GF(4)"``, ``"4"`` or ``"GF(2^2)"``."""
    if isinstance(text, FieldSpec):
        return text
    match = _FIELD_RE.match(str(text))
    if not match:
        raise ValueError(f"Cannot parse field {text!r}")
    base, exponent = int(match.group(1)), match.group(2)
    q = base**int(exponent) if exponent else base
    return FieldSpec.from_order(q)


def field_arith(a: galois.FieldArray,
                b: Optional[galois.FieldArray] = None,
                op: str = "add") -> galois.FieldArray:
    """Exact scalar arithmetic: ``op`` is one of add, sub, mul, neg, inv."""
    if not isinstance(a, galois.FieldArray):
        raise TypeError(f"a must be a galois FieldArray, got {type(a)}")
    if op in ("add", "sub", "mul"):
        if not isinstance(b, galois.FieldArray):
            raise TypeError(f"b must be a galois FieldArray, got {type(b)}")
        if type(a) is not type(b):
            raise FieldMismatch(
                f"Cannot combine {type(a).name} and {type(b).name}")
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        if a == 0:
            raise DivisionByZero(f"Cannot invert zero in {type(a).name}")
        return a**-1
    raise ValueError(f"Unknown op {op!r}")
