"""Exact arithmetic in GF(2^n), 1 <= n <= 8.

Elements are bit masks of polynomial coefficients (bit ``i`` is the
coefficient of ``x**i``), reduced modulo a fixed irreducible polynomial.
Multiplication is shift-and-reduce; no lookup tables are kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

MAX_DEGREE = 8


class FieldError(ValueError):
    """Invalid field construction or incompatible operands."""


class SpecMismatchError(FieldError):
    pass


def _degree(poly: int) -> int:
    return poly.bit_length() - 1


def _poly_mod(a: int, m: int) -> int:
    dm = _degree(m)
    while a and _degree(a) >= dm:
        a ^= m << (_degree(a) - dm)
    return a


def is_irreducible_poly(poly: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2."""
    deg = _degree(poly)
    if deg < 1:
        return False
    if deg == 1:
        return True
    for divisor in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, divisor) == 0:
            return False
    return True


def smallest_irreducible(n: int) -> int:
    for poly in range(1 << n, 1 << (n + 1)):
        if is_irreducible_poly(poly):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {n}")  # unreachable


# GF(8) follows the worked three-qubit example (b^3 + b^2 + 1 = 0); GF(2) uses
# x + 1; every other degree takes the smallest irreducible polynomial.
DEFAULT_MODULI = {n: smallest_irreducible(n) for n in range(1, MAX_DEGREE + 1)}
DEFAULT_MODULI[1] = 0b11
DEFAULT_MODULI[3] = 0b1101


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(2^n) defined by ``modulus`` (an (n+1)-bit mask)."""

    n: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DEGREE:
            raise FieldError(f"n must be in 1..{MAX_DEGREE}, got {self.n}")
        if _degree(self.modulus) != self.n:
            raise FieldError(
                f"modulus {self.modulus:#b} does not have degree {self.n}")
        if not is_irreducible_poly(self.modulus):
            raise FieldError(f"modulus {self.modulus:#b} is reducible")

    @classmethod
    def default(cls, n: int) -> "FieldSpec":
        if n not in DEFAULT_MODULI:
            raise FieldError(f"n must be in 1..{MAX_DEGREE}, got {n}")
        return cls(n, DEFAULT_MODULI[n])

    @property
    def order(self) -> int:
        return 1 << self.n

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    @property
    def generator(self) -> "FieldElement":
        """The class of ``x``; equals 1 in GF(2)."""
        return FieldElement(2 if self.n > 1 else 1, self)

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(bits, self)

    def elements(self) -> Iterator["FieldElement"]:
        for bits in range(self.order):
            yield FieldElement(bits, self)

    def nonzero(self) -> Iterator["FieldElement"]:
        for bits in range(1, self.order):
            yield FieldElement(bits, self)

    def to_json(self) -> dict:
        return {"n": self.n, "modulus_bits": self.modulus}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return cls(int(obj["n"]), int(obj["modulus_bits"]))


def _clmul_mod(a: int, b: int, modulus: int, n: int) -> int:
    top = 1 << n
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return res


@dataclass(frozen=True)
class FieldElement:
    bits: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.bits < self.spec.order:
            raise FieldError(
                f"bits {self.bits} out of range for GF(2^{self.spec.n})")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatchError("operands belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.bits ^ other.bits, self.spec)

    __sub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        s = self.spec
        return FieldElement(_clmul_mod(self.bits, other.bits, s.modulus, s.n), s)

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inv() ** (-k)
        result, base = self.spec.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inv()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def inv(self) -> "FieldElement":
        if self.bits == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^n)")
        # x^(d-2) = x^-1 since the multiplicative group has order d-1.
        return self ** (self.spec.order - 2)

    def trace(self) -> "FieldElement":
        acc, power = self.spec.zero, self
        for _ in range(self.spec.n):
            acc = acc + power
            power = power * power
        return acc

    def __repr__(self) -> str:
        return f"GF{self.spec.order}({self.bits:#0{self.spec.n + 2}b})"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def trace(x: FieldElement) -> FieldElement:
    """Absolute trace x + x^2 + ... + x^(2^(n-1)), always 0 or 1."""
    return x.trace()


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a square 0/1 matrix over GF(2); raises if singular."""
    k = m.shape[0]
    aug = np.concatenate([m.astype(np.uint8) % 2, np.eye(k, dtype=np.uint8)], axis=1)
    for col in range(k):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise FieldError("matrix is singular over GF(2)")
        piv = col + pivots[0]
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        for row in range(k):
            if row != col and aug[row, col]:
                aug[row] ^= aug[col]
    return aug[:, k:]


def _gf2_rank(m: np.ndarray) -> int:
    m = m.astype(np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        piv = rank + pivots[0]
        m[[rank, piv]] = m[[piv, rank]]
        for row in range(rows):
            if row != rank and m[row, col]:
                m[row] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class FieldBasis:
    """An ordered GF(2)-basis (b_1, ..., b_n) of GF(2^n)."""

    elements: tuple[FieldElement, ...]
    spec: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) != self.spec.n:
            raise FieldError(
                f"a basis of GF(2^{self.spec.n}) needs {self.spec.n} elements")
        if any(e.spec != self.spec for e in self.elements):
            raise SpecMismatchError("basis elements belong to another field")
        if _gf2_rank(self.bit_matrix()) != self.spec.n:
            raise FieldError("basis elements are linearly dependent over GF(2)")

    @classmethod
    def from_bits(cls, spec: FieldSpec, masks: Sequence[int]) -> "FieldBasis":
        return cls(tuple(spec.element(m) for m in masks), spec)

    def bit_matrix(self) -> np.ndarray:
        """Row i holds the coefficient bits of b_i."""
        n = self.spec.n
        return np.array([[(e.bits >> k) & 1 for k in range(n)]
                         for e in self.elements], dtype=np.uint8)

    def gram(self) -> np.ndarray:
        """Trace form matrix G[i, j] = trace(b_i b_j)."""
        return np.array([[(bi * bj).trace().bits for bj in self.elements]
                         for bi in self.elements], dtype=np.uint8)

    @cached_property
    def dual(self) -> "FieldBasis":
        return dual_basis(self)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(e.bits for e in self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> FieldElement:
        return self.elements[i]


def dual_basis(basis: FieldBasis) -> FieldBasis:
    """The unique basis B* with trace(b_i b*_j) = delta_ij."""
    spec = basis.spec
    ginv = _gf2_inverse(basis.gram())
    duals = []
    for j in range(spec.n):
        acc = spec.zero
        for k in range(spec.n):
            if ginv[j, k]:
                acc = acc + basis[k]
        duals.append(acc)
    return FieldBasis(tuple(duals), spec)


def is_self_dual(basis: FieldBasis) -> bool:
    return bool(np.array_equal(basis.gram(), np.eye(basis.spec.n, dtype=np.uint8)))


def find_self_dual_basis(spec: FieldSpec) -> FieldBasis:
    """Lexicographically smallest self-dual basis, as a sorted tuple of masks.

    Depth-first search over increasing masks.  A self-dual basis is an
    orthonormal set for the trace form; trace(x^2) = trace(x), so every
    member has trace 1, and orthonormal sets are automatically independent.
    """
    candidates = [e for e in spec.nonzero() if e.trace().bits == 1]

    def extend(chosen: list[FieldElement], start: int):
        if len(chosen) == spec.n:
            return list(chosen)
        for idx in range(start, len(candidates)):
            e = candidates[idx]
            if all((e * c).trace().bits == 0 for c in chosen):
                chosen.append(e)
                found = extend(chosen, idx + 1)
                if found is not None:
                    return found
                chosen.pop()
        return None

    found = extend([], 0)
    if found is None:  # pragma: no cover - self-dual bases always exist
        raise FieldError(f"no self-dual basis found for {spec}")
    return FieldBasis(tuple(found), spec)


def expand(x: FieldElement, basis: FieldBasis) -> tuple[int, ...]:
    """Coordinates of ``x`` in ``basis``: x_i = trace(x * b*_i)."""
    if x.spec != basis.spec:
        raise SpecMismatchError("element and basis belong to different fields")
    return tuple((x * bd).trace().bits for bd in basis.dual)


def combine(bits: Sequence[int], basis: FieldBasis) -> FieldElement:
    """Inverse of :func:`expand`."""
    acc = basis.spec.zero
    for bit, b in zip(bits, basis):
        if bit:
            acc = acc + b
    return acc


def is_irreducible_quadratic(a: FieldElement, b: FieldElement) -> bool:
    """True iff x^2 + a x + b has no root in the field."""
    a._check(b)
    return all((x * x + a * x + b).bits != 0 for x in a.spec.elements())


def is_primitive_quadratic(b: FieldElement) -> bool:
    """x^2 + x + b irreducible and its companion map has order d^2 - 1."""
    if not is_irreducible_quadratic(b.spec.one, b):
        return False
    from .phase_space import LinearMap, map_order

    one, zero = b.spec.one, b.spec.zero
    d = b.spec.order
    return map_order(LinearMap(one, b, one, zero)) == d * d - 1


def smallest_primitive_b(spec: FieldSpec) -> FieldElement:
    for b in spec.nonzero():
        if is_primitive_quadratic(b):
            return b
    raise FieldError(f"no primitive x^2 + x + b over {spec}")  # pragma: no cover
