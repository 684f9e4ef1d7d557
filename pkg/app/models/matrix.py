from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np


def object_zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def object_identity(n: int) -> np.ndarray:
    matrix = object_zeros(n, n)
    for k in range(n):
        matrix[k, k] = 1
    return matrix


@dataclass(frozen=True, eq=False)
class PModMatrix:
    """Dense matrix over Z/p^N; entries are Python ints in an object array"""

    entries: np.ndarray
    p: int
    N: int

    @classmethod
    def build(cls, entries, p: int, N: int, shape: Optional[Tuple[int, int]] = None) -> "PModMatrix":
        array = np.array(entries, dtype=object)
        if shape is not None:
            array = array.reshape(shape)
        if array.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {array.shape}")
        return cls(array % (p ** N), p, N)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int, N: int) -> "PModMatrix":
        return cls(object_zeros(rows, cols), p, N)

    @classmethod
    def identity(cls, n: int, p: int, N: int) -> "PModMatrix":
        return cls(object_identity(n), p, N)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def is_zero(self) -> bool:
        return not any(int(x) for x in self.entries.flat)

    def __matmul__(self, other: "PModMatrix") -> "PModMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.entries.shape} @ {other.entries.shape}")
        product = self.entries.dot(other.entries) if self.cols else object_zeros(self.rows, other.cols)
        return PModMatrix(product % self.modulus, self.p, self.N)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PModMatrix):
            return NotImplemented
        return (
            (self.p, self.N) == (other.p, other.N)
            and self.entries.shape == other.entries.shape
            and all(int(a) == int(b) for a, b in zip(self.entries.flat, other.entries.flat))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.N, self.entries.shape, tuple(int(x) for x in self.entries.flat)))


@dataclass(frozen=True, eq=False)
class SNFResult:
    """left * M * right = diag(p^e_1, p^e_2, ...); an exponent N stands for zero"""

    diag: List[int]
    left: np.ndarray
    right: np.ndarray
    left_inv: np.ndarray
    right_inv: np.ndarray
    p: int
    N: int

    def diagonal_matrix(self, rows: int, cols: int) -> np.ndarray:
        matrix = object_zeros(rows, cols)
        for k, e in enumerate(self.diag):
            matrix[k, k] = 0 if e >= self.N else self.p ** e
        return matrix

    @property
    def rank(self) -> int:
        """Number of nonzero pivots mod p^N"""
        return sum(1 for e in self.diag if e < self.N)


@dataclass(frozen=True)
class HomologyGroup:
    """
    Finite p-group as cyclic factors Z/p^a, each with multiplicity

    multiplicity = f means every factor is a W_a(k) for k = F_(p^f). A factor
    exponent equal to N means "free at this precision, possibly larger".
    """

    p: int
    N: int
    factors: Tuple[int, ...] = ()
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def saturated(self) -> bool:
        return any(a >= self.N for a in self.factors)

    @property
    def is_zero(self) -> bool:
        return not self.factors

    def raw(self) -> List[int]:
        """Factors as a plain Z_p-module (multiplicity expanded)"""
        return sorted(a for a in self.factors for _ in range(self.multiplicity))

    @property
    def order_exponent(self) -> int:
        return sum(self.raw())

    def collapse(self, f: int) -> "HomologyGroup":
        """Group f equal factors into one W_a(k) factor when the counts allow it"""
        raw = self.raw()
        counts = Counter(raw)
        if f <= 1 or any(c % f for c in counts.values()):
            return HomologyGroup(self.p, self.N, tuple(raw), 1)
        grouped = [a for a, c in sorted(counts.items()) for _ in range(c // f)]
        return HomologyGroup(self.p, self.N, tuple(grouped), f)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for a, c in sorted(Counter(self.factors).items()):
            cyclic = f"Z/{self.p}^{a}" if a > 1 else f"Z/{self.p}"
            if self.multiplicity > 1:
                cyclic = f"W_{a}(F_{self.p}^{self.multiplicity})"
            parts.append(cyclic if c == 1 else f"({cyclic})^{c}")
        return " + ".join(parts)


def same_group(a: HomologyGroup, b: HomologyGroup) -> bool:
    return a.raw() == b.raw()


def merge_groups(p: int, N: int, groups: Sequence[HomologyGroup]) -> HomologyGroup:
    raw: List[int] = []
    for group in groups:
        raw.extend(group.raw())
    return HomologyGroup(p, N, tuple(raw), 1)
