"""
Nygaard filtration on the divided-power complex, in delta-lift form:
the tensor product of the Hodge filtration with the p-adic filtration.

N^{>=i} is stored through rescaled generators p^s * b with
  s(m, 0) = max(i - j(m), 0),  s(m, 1) = max(i - j(m) - 1, 0).
"""
import dataclasses
import logging
from typing import Dict, Tuple

from app.errors import IntegralityViolation, NegativeScaling, WindowTooSmall
from app.models.complexes import BasisKey, DPComplexData, GrNygaardReport, NygaardComplex
from app.models.matrix import HomologyGroup, PModMatrix
from app.models.witt import ValScalar
from app.services.linalg_service import LinalgService
from app.services.witt_service import WittService

logger = logging.getLogger(__name__)


class NygaardService:
    """N^{>=i}, the divided Frobenius phi/p^i and the gr-Nygaard check"""

    @staticmethod
    def scaling(base: DPComplexData, i: int) -> Dict[BasisKey, int]:
        table = {}
        for m in range(base.Wmax + 1):
            table[(m, 0)] = max(i - base.j(m), 0)
        for m in range(base.Wmax):
            table[(m, 1)] = max(i - base.j(m) - 1, 0)
        return table

    @staticmethod
    def nygaard_complex(base: DPComplexData, i: int) -> NygaardComplex:
        if i < 0:
            raise ValueError(f"Nygaard index must be >= 0, got {i}")
        scaling = NygaardService.scaling(base, i)

        d_scaled: Dict[int, ValScalar] = {}
        for m in range(1, base.Wmax + 1):
            exponent = scaling[(m, 0)] - scaling[(m - 1, 1)]
            if exponent < 0:
                raise NegativeScaling(f"d(b_{m}) needs p^{exponent} at i={i}")
            d_scaled[m] = base.d_coeff(m).shift(exponent)

        ny = NygaardComplex(base=base, i=i, scaling=scaling, d_scaled=d_scaled)
        return dataclasses.replace(ny, divided_phi=NygaardService.divided_frobenius(ny))

    @staticmethod
    def divided_frobenius(ny: NygaardComplex) -> Dict[BasisKey, ValScalar]:
        """phi/p^i on the scaled generators, in the unscaled target basis"""
        table = {}
        for key, value in ny.base.phi_entries.items():
            divided = value.shift(ny.scaling[key] - ny.i)
            if not divided.is_zero and divided.v < 0:
                raise IntegralityViolation(
                    f"phi/p^{ny.i} of generator {key} has valuation {divided.v}"
                )
            table[key] = divided
        return table

    @staticmethod
    def divisibility_scaling(base: DPComplexData, i: int) -> Dict[BasisKey, int]:
        """Least s with p^i | phi(p^s * b), line by line"""
        return {
            key: max(i - value.v, 0) for key, value in base.phi_entries.items() if not value.is_zero
        }

    @staticmethod
    def nygaard_cohomology(ny: NygaardComplex, weight: int) -> Tuple[HomologyGroup, HomologyGroup]:
        """(H^0, H^1) of N^{>=i} in one internal weight"""
        base = ny.base
        p, N, f = base.p, base.N, base.ring.f
        if weight == 0:
            return HomologyGroup(p, N, (N,), f), HomologyGroup(p, N, ())
        if weight > base.Wmax:
            raise WindowTooSmall(f"weight {weight} beyond Wmax = {base.Wmax}")
        c = ny.d_scaled[weight]
        exponent = N if c.is_zero else min(c.v, N)
        h1 = HomologyGroup(p, N, (exponent,) if exponent > 0 else (), f)
        return HomologyGroup(p, N, ()), h1

    @staticmethod
    def gr_nygaard_check(ny: NygaardComplex, weight_bound: int) -> GrNygaardReport:
        """
        phi/p^i on N^{>=i}/N^{>=i+1} (degree 0) versus Fil_conj^{<=i}, mod p

        The graded piece is linearised along phi: k[x] is free over
        phi(k[x]) on 1, x, ..., x^(p-1), so the sources are x^r (x) [gen_m].
        """
        base, i = ny.base, ny.i
        p, ring = base.p, base.ring
        if weight_bound * p > base.Wmax:
            raise WindowTooSmall(
                f"weight_bound {weight_bound} * p exceeds Wmax = {base.Wmax}"
            )

        sources = [
            (m, r) for m in range(weight_bound + 1) if base.j(m) <= i for r in range(p)
        ]
        target_count = p * (weight_bound + 1)
        matrix = PModMatrix.zeros(target_count, len(sources), p, 1)
        offending = []
        for col, (m, r) in enumerate(sources):
            value, target = ny.divided_phi[(m, 0)], base.phi_targets[(m, 0)]
            x_power = WittService.factorial_ratio(base.j(target + r), base.j(target), ring)
            coefficient = value * x_power
            if not coefficient.is_zero and coefficient.v == 0:
                matrix.entries[target + r, col] = coefficient.to_int(ring) % p
            else:
                offending.append(target + r)

        in_filtration = [
            row for row in range(target_count) if base.j(row) // p <= i
        ]
        for row in range(target_count):
            if row not in in_filtration and any(int(x) for x in matrix.entries[row, :]):
                offending.append(row)

        restricted = PModMatrix(matrix.entries[in_filtration, :], p, 1)
        rank = LinalgService.rank(restricted) if sources else 0
        passed = not offending and rank == len(sources) == len(in_filtration)
        if not passed and not offending:
            offending.append(min(set(in_filtration) - {p * m + r for m, r in sources}, default=0))
        report = GrNygaardReport(
            i=i,
            weight_bound=weight_bound,
            passed=passed,
            rank=rank,
            sources=len(sources),
            targets=len(in_filtration),
            first_offending_weight=min(offending) if offending else None,
        )
        logger.debug("gr-Nygaard check: %s", report)
        return report


nygaard_service = NygaardService()
