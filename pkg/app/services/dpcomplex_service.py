"""
Divided-power de Rham complex of (W(k)[x], (x^e)) with delta(x) = 0

phi(x) = x^p, so phi(b_m) = j(pm)!/j(m)! * b_(pm) and
phi(b_m dx) = p * j(pm+p-1)!/j(m)! * b_(pm+p-1) dx.
"""
import logging
from typing import Dict, Tuple

from app.config import settings
from app.errors import DegreeError, WeightOverflow, WindowTooSmall
from app.models.complexes import BasisKey, DPBasisElem, DPComplexData
from app.models.matrix import HomologyGroup
from app.models.witt import ValScalar, WittRing
from app.services.witt_service import FactorialTable

logger = logging.getLogger(__name__)


class DPComplexService:
    """Build Omega^._{D_I(A)} and read its filtrations"""

    @staticmethod
    def build(p: int, e: int, ring: WittRing, N: int, Wmax: int) -> DPComplexData:
        if ring.p != p or ring.N != N:
            raise ValueError(f"ring {ring} does not match p={p}, N={N}")
        if e < 1:
            raise ValueError(f"e must be >= 1, got {e}")
        if Wmax < 1:
            raise ValueError(f"Wmax must be >= 1, got {Wmax}")
        if Wmax > settings.SYNTOMIC_MAX_WEIGHT:
            raise WeightOverflow(
                f"Wmax = {Wmax} exceeds SYNTOMIC_MAX_WEIGHT = {settings.SYNTOMIC_MAX_WEIGHT}"
            )

        table = FactorialTable(ring, (p * Wmax + p) // e + 1)

        def j(m: int) -> int:
            return m // e

        d_entries: Dict[int, ValScalar] = {}
        for m in range(1, Wmax + 1):
            d_entries[m] = ValScalar.from_int(m, ring).divide(table.ratio(j(m), j(m - 1)))

        phi_entries: Dict[BasisKey, ValScalar] = {}
        phi_targets: Dict[BasisKey, int] = {}
        out_of_window = set()
        for m in range(Wmax + 1):
            phi_entries[(m, 0)] = table.ratio(j(p * m), j(m))
            phi_targets[(m, 0)] = p * m
            if p * m > Wmax:
                out_of_window.add((m, 0))
        for m in range(Wmax):
            target = p * m + p - 1
            phi_entries[(m, 1)] = table.ratio(j(target), j(m)).shift(1)
            phi_targets[(m, 1)] = target
            if target > Wmax - 1:
                out_of_window.add((m, 1))

        logger.debug(
            "built D_I(A) complex p=%s e=%s N=%s Wmax=%s (%s phi images out of window)",
            p, e, N, Wmax, len(out_of_window),
        )
        return DPComplexData(
            p=p,
            e=e,
            ring=ring,
            N=N,
            Wmax=Wmax,
            d_entries=d_entries,
            phi_entries=phi_entries,
            phi_targets=phi_targets,
            out_of_window=frozenset(out_of_window),
        )

    @staticmethod
    def d_coefficient_direct(m: int, e: int, ring: WittRing) -> ValScalar:
        """c_m read off m*x^(m-1)/j(m)!: e when e | m, else m"""
        if m < 1:
            raise ValueError(f"d(b_0) = 0 has no coefficient, got m={m}")
        return ValScalar.from_int(e if m % e == 0 else m, ring)

    @staticmethod
    def hodge_level(data: DPComplexData, elem: DPBasisElem) -> int:
        """Fil^{>=r} level; degree 1 is shifted by one (Griffiths transversality)"""
        return data.j(elem.m) + elem.deg

    @staticmethod
    def conj_level(data: DPComplexData, elem: DPBasisElem) -> int:
        """
        Conjugate level of b_m mod p

        Convention: Fil_conj^{<=i} = span{b_m : j(m) < p(i+1)}.
        """
        if elem.deg != 0:
            raise DegreeError(f"conjugate filtration is defined on degree 0 only, got {elem}")
        return data.j(elem.m) // data.p

    @staticmethod
    def conj_graded_dimension(data: DPComplexData, i: int) -> int:
        """dim_k gr^i_conj(D_I(A)/p), counted inside the window"""
        if data.e * data.p * (i + 1) - 1 > data.Wmax:
            raise WindowTooSmall(f"gr^{i}_conj needs weights up to {data.e * data.p * (i + 1) - 1}")
        return sum(
            1 for elem in data.basis(0) if DPComplexService.conj_level(data, elem) == i
        )

    @staticmethod
    def crystalline_cohomology(data: DPComplexData, weight: int) -> Tuple[HomologyGroup, HomologyGroup]:
        """(H^0, H^1) of the complex in one internal weight"""
        p, N, f = data.p, data.N, data.ring.f
        if weight == 0:
            return HomologyGroup(p, N, (N,), f), HomologyGroup(p, N, ())
        c = data.d_coeff(weight)
        exponent = N if c.is_zero else min(c.v, N)
        h1 = HomologyGroup(p, N, (exponent,) if exponent > 0 else (), f)
        return HomologyGroup(p, N, ()), h1

    @staticmethod
    def dump(data: DPComplexData, limit: int = 40) -> str:
        lines = [f"# D_I(A) complex p={data.p} e={data.e} N={data.N} Wmax={data.Wmax}"]
        lines.append("m\tj\td(b_m)\tphi(b_m)\tphi(b_m dx)")
        for m in range(min(limit, data.Wmax) + 1):
            d_text = str(data.d_entries[m]) if m >= 1 else "0"
            phi0, t0 = data.phi(m, 0)
            phi1 = f"{data.phi(m, 1)[0]} b_{data.phi(m, 1)[1]} dx" if m < data.Wmax else "-"
            lines.append(f"{m}\t{data.j(m)}\t{d_text}\t{phi0} b_{t0}\t{phi1}")
        return "\n".join(lines)


dpcomplex_service = DPComplexService()
