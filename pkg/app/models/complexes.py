"""
Data carriers for the divided-power de Rham complex, its Nygaard pieces and
the syntomic mapping fiber

Basis conventions (one variable x, ideal (x^e)):
  b_m    = x^m / j(m)!        in degree 0, weight m
  b_m dx = x^m / j(m)! dx     in degree 1, weight m + 1
with j(m) = floor(m / e) the divided-power level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from app.errors import WeightOverflow
from app.models.matrix import PModMatrix
from app.models.witt import ValScalar, WittRing

BasisKey = Tuple[int, int]  # (m, deg)


@dataclass(frozen=True, order=True)
class DPBasisElem:
    m: int
    deg: int = 0

    def __post_init__(self):
        if self.m < 0 or self.deg not in (0, 1):
            raise ValueError(f"invalid basis element (m={self.m}, deg={self.deg})")

    @property
    def weight(self) -> int:
        return self.m + self.deg

    @property
    def key(self) -> BasisKey:
        return (self.m, self.deg)


@dataclass(frozen=True, eq=False)
class DPComplexData:
    """
    Omega^0 -> Omega^1 of D_I(A), A = W(k)[x], I = (x^e), up to weight Wmax

    d_entries[m]: coefficient c_m with d(b_m) = c_m * b_(m-1) dx (m >= 1).
    phi_entries[(m, deg)]: coefficient of the single basis element hit by phi;
    phi_targets[(m, deg)] is that element's monomial index. Images beyond the
    window are listed in out_of_window rather than dropped.
    """

    p: int
    e: int
    ring: WittRing
    N: int
    Wmax: int
    d_entries: Dict[int, ValScalar]
    phi_entries: Dict[BasisKey, ValScalar]
    phi_targets: Dict[BasisKey, int]
    out_of_window: FrozenSet[BasisKey] = frozenset()

    def j(self, m: int) -> int:
        return m // self.e

    def basis(self, deg: int) -> List[DPBasisElem]:
        top = self.Wmax if deg == 0 else self.Wmax - 1
        return [DPBasisElem(m, deg) for m in range(top + 1)]

    def d_coeff(self, m: int) -> ValScalar:
        if m > self.Wmax:
            raise WeightOverflow(f"d(b_{m}) requested beyond Wmax = {self.Wmax}")
        return self.d_entries[m]

    def phi(self, m: int, deg: int) -> Tuple[ValScalar, int]:
        key = (m, deg)
        if key not in self.phi_entries:
            raise WeightOverflow(f"phi of (m={m}, deg={deg}) requested beyond Wmax = {self.Wmax}")
        return self.phi_entries[key], self.phi_targets[key]


@dataclass(frozen=True, eq=False)
class NygaardComplex:
    """
    N^{>=i} of the divided-power complex in the scaled basis

    Generators are p^s(m, deg) * b; d_scaled[m] is the differential between
    the scaled generators of weight m; divided_phi[(m, deg)] is phi/p^i of a
    scaled generator, written in the unscaled basis of the base complex.
    """

    base: DPComplexData
    i: int
    scaling: Dict[BasisKey, int]
    d_scaled: Dict[int, ValScalar]
    divided_phi: Dict[BasisKey, ValScalar] = field(default_factory=dict)

    def s(self, m: int, deg: int) -> int:
        return self.scaling[(m, deg)]


@dataclass(frozen=True, eq=False)
class SyntomicComplex:
    """
    Mapping fiber computing Z_p(i):
      C0 = N^{>=i} Omega^0
      C1 = N^{>=i} Omega^1 (+) Omega^0
      C2 = Omega^1
      D0(n0)     = (d n0, (phi/p^i - can)(n0))
      D1(n1, f0) = (phi/p^i - can)(n1) + cone_sign * d f0
    cone_sign is -1 for the real complex.
    """

    p: int
    e: int
    i: int
    ring: WittRing
    N: int
    base: DPComplexData
    nygaard: NygaardComplex
    cone_sign: int = -1

    @property
    def f(self) -> int:
        return self.ring.f

    @property
    def Wmax(self) -> int:
        return self.base.Wmax


@dataclass(frozen=True)
class TowerTruncation:
    """
    Positions a >= a_max of tower d are dropped

    tail_valuations[k] = (v_deg0, v_deg1): valuations of phi/p^i at tail
    position a_max + k (N positions); valuation_sum is the smaller of the
    two column sums and must reach N.
    """

    d: int
    a_max: int
    tail_valuations: Tuple[Tuple[int, int], ...]
    valuation_sum: int
    certified: bool


@dataclass(frozen=True, eq=False)
class TowerComplex:
    """Finite quotient complex of one weight tower (positions a < a_max)"""

    d: int
    weights: Tuple[int, ...]
    d0: Optional[PModMatrix]
    d1: Optional[PModMatrix]
    truncation: TowerTruncation

    @property
    def short_circuited(self) -> bool:
        return not self.weights


@dataclass(frozen=True)
class GrNygaardReport:
    """Outcome of the gr-Nygaard / conjugate filtration comparison"""

    i: int
    weight_bound: int
    passed: bool
    rank: int
    sources: int
    targets: int
    first_offending_weight: Optional[int] = None
