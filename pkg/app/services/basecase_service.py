"""
TC of a finite field F_q and Z_p(i) at a point, through the equalizer
pi_(2j) TC^- ==(can, phi)==> pi_(2j) TP

Both sides are W(k) in each even degree, so every degree reduces to one
Z_p-linear map of Z_q/p^N: a -> phi_j F(a) - can_j a.
"""
import logging
from typing import Dict, Tuple

import galois

from app.models.base import PerfectBaseData, TPMonomial
from app.models.matrix import HomologyGroup, PModMatrix, object_identity
from app.models.witt import WittRing
from app.schemas.schemas import TCGroup, TCTable
from app.services.linalg_service import LinalgService

logger = logging.getLogger(__name__)


class BasecaseService:
    """Equalizer computation of pi_* TC(F_q; Z_p) and the point case of Z_p(i)"""

    @staticmethod
    def parse_q(q: int) -> Tuple[int, int]:
        if q < 2 or not galois.is_prime_power(q):
            raise ValueError(f"q = {q} is not a prime power")
        primes, exponents = galois.factors(q)
        return int(primes[0]), int(exponents[0])

    @staticmethod
    def base_data(q: int, j_range: Tuple[int, int], N: int) -> PerfectBaseData:
        p, f = BasecaseService.parse_q(q)
        return PerfectBaseData.for_ring(WittRing(p, N, f), j_range[0], j_range[1])

    @staticmethod
    def equalizer_matrix(data: PerfectBaseData, j: int) -> PModMatrix:
        """Matrix of phi - can in degree 2j on the coordinates of W(k)"""
        ring = data.ring
        can, phi = data.generator_images(j)
        can_c, phi_c = can.coef.coords[0], phi.coef.coords[0]
        if not (can.coef.is_constant and phi.coef.is_constant):
            raise ArithmeticError(f"generator images in degree {2 * j} are not in Z_p")
        entries = ring.frobenius_matrix * phi_c - object_identity(ring.f) * can_c
        return PModMatrix.build(entries, ring.p, ring.N)

    @staticmethod
    def kernel_cokernel(matrix: PModMatrix) -> Tuple[HomologyGroup, HomologyGroup]:
        p, N = matrix.p, matrix.N
        kernel = LinalgService.homology_at(PModMatrix.zeros(matrix.cols, 0, p, N), matrix)
        cokernel = LinalgService.homology_at(matrix, PModMatrix.zeros(0, matrix.rows, p, N))
        return kernel, cokernel

    @staticmethod
    def tc_homotopy(q: int, j_range: Tuple[int, int], N: int) -> Dict[int, HomologyGroup]:
        """pi_n TC(F_q; Z_p) for n in [2 j_min - 1, 2 j_max]"""
        data = BasecaseService.base_data(q, j_range, N)
        groups: Dict[int, HomologyGroup] = {}
        for j in data.degrees:
            kernel, cokernel = BasecaseService.kernel_cokernel(BasecaseService.equalizer_matrix(data, j))
            groups[2 * j] = kernel.collapse(data.ring.f)
            groups[2 * j - 1] = cokernel.collapse(data.ring.f)
        return dict(sorted(groups.items()))

    @staticmethod
    def zp_i_point(q: int, i: int, N: int) -> Tuple[HomologyGroup, HomologyGroup]:
        """
        (H^0, H^1) of fib(phi/p^i - can: p^i W(k) -> W(k))

        phi/p^i(p^i a) - p^i a = F(a) - p^i a, the degree 2i equalizer map.
        """
        if i < 0:
            raise ValueError(f"i must be >= 0, got {i}")
        data = BasecaseService.base_data(q, (i, i), N)
        return BasecaseService.kernel_cokernel(BasecaseService.equalizer_matrix(data, i))

    @staticmethod
    def thh_shadow(q: int, j: int, N: int) -> HomologyGroup:
        """pi_(2j) TC^- / x pi_(2j+2) TC^-: k on sigma^j for j >= 0, 0 below"""
        data = BasecaseService.base_data(q, (j, j), N)
        ring = data.ring
        # x * (sigma^(j+1)) = xi sigma^j ; x * x^(-j-1) = x^(-j)
        scalar = data.xi if j >= 0 else 1
        multiplication = PModMatrix.build(object_identity(ring.f) * scalar, ring.p, N)
        _, quotient = BasecaseService.kernel_cokernel(multiplication)
        return quotient.collapse(ring.f)

    @staticmethod
    def presentation_checks(data: PerfectBaseData) -> Dict[str, bool]:
        xi = data.ring.element(data.xi)
        one = TPMonomial(xi, 0)
        checks = {
            "can(x) can(sigma) = xi": data.can_x() * data.can_sigma() == one,
            "phi(x) phi(sigma) = phi(xi)": data.phi_x() * data.phi_sigma()
            == TPMonomial(data.ring.frobenius(xi), 0),
            "xi = p": data.xi == data.ring.p,
        }
        for j in range(0, data.j_max + 1):
            sigma_x = (data.can_sigma() ** j) * (data.can_x() ** j)
            checks[f"sigma^{j} x^{j} = p^{j}"] = sigma_x == TPMonomial(data.ring.element(data.ring.p ** j), 0)
        for j in data.degrees:
            if j >= 0:
                checks[f"TC^-/x rank in degree {2 * j}"] = (
                    BasecaseService.thh_shadow(data.ring.q, j, data.ring.N).raw() == [1] * data.ring.f
                )
        return checks

    @staticmethod
    def tc_table(q: int, j_range: Tuple[int, int], N: int) -> TCTable:
        p, f = BasecaseService.parse_q(q)
        groups = BasecaseService.tc_homotopy(q, j_range, N)
        rows = [
            TCGroup(degree=n, factors=list(g.factors), multiplicity=g.multiplicity, saturated=g.saturated)
            for n, g in groups.items()
        ]
        logger.debug("TC table q=%s degrees %s..%s", q, min(groups), max(groups))
        return TCTable(p=p, f=f, precision=N, groups=rows)


basecase_service = BasecaseService()
