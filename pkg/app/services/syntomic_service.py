"""
Syntomic cohomology Z_p(i) of k[x]/x^e as the fiber of phi/p^i - can

Every generator carries an internal weight w; d and can preserve it and phi
sends w to pw, so the complex splits over towers T_d = {d p^a : p does not
divide d} plus the weight-0 block. Each tower is truncated at a certified
position A_max(d) and computed as a small dense complex over Z/p^N.

Per weight w >= 1 the generators are
  C0: g0 = p^s0 b_w                    s0 = s(w, 0)
  C1: n1 = p^s1 b_(w-1) dx, f0 = b_w   s1 = s(w-1, 1)
  C2: f1 = b_(w-1) dx
"""
import asyncio
import logging
import time
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from app.config import auto_precision, auto_weight_window, settings
from app.errors import CertificateFailure, NonTermination, Unsupported, ValidationMismatch
from app.models.complexes import SyntomicComplex, TowerComplex, TowerTruncation
from app.models.matrix import HomologyGroup, PModMatrix, merge_groups, object_identity, object_zeros
from app.models.witt import WittRing, p_valuation
from app.schemas.schemas import CohomologyResult, DegreeGroups, RuntimeInfo, TowerFactors
from app.services.basecase_service import BasecaseService
from app.services.dpcomplex_service import DPComplexService
from app.services.linalg_service import LinalgService
from app.services.nygaard_service import NygaardService
from app.services.witt_service import WittService

logger = logging.getLogger(__name__)

Groups = Tuple[HomologyGroup, HomologyGroup, HomologyGroup]


def _expand(linear: np.ndarray, semilinear: np.ndarray, ring: WittRing) -> PModMatrix:
    """
    Z_p-linear matrix of a map given by Z_p-scalars

    linear entries act as c * id, semilinear entries as c * F on Z_q/p^N,
    so each entry becomes the f x f block c*I or c*Fmat.
    """
    p, N, f = ring.p, ring.N, ring.f
    if f == 1:
        return PModMatrix.build(linear + semilinear, p, N)
    rows, cols = linear.shape
    big = object_zeros(rows * f, cols * f)
    identity, fmat = object_identity(f), ring.frobenius_matrix
    for r in range(rows):
        for c in range(cols):
            a, b = int(linear[r, c]), int(semilinear[r, c])
            if a or b:
                big[r * f:(r + 1) * f, c * f:(c + 1) * f] = identity * a + fmat * b
    return PModMatrix.build(big, p, N)


class SyntomicService:
    """Mapping fiber, tower decomposition, cohomology with escalation"""

    @staticmethod
    def build_fiber(
        p: int,
        e: int,
        i: int,
        ring: WittRing,
        N: int,
        Wmax: Optional[int] = None,
        cone_sign: int = -1,
    ) -> SyntomicComplex:
        if i < 0:
            raise ValueError(f"i must be >= 0, got {i}")
        if cone_sign not in (-1, 1):
            raise ValueError(f"cone_sign must be -1 or +1, got {cone_sign}")
        if Wmax is None:
            Wmax = auto_weight_window(p, e, i)
        base = DPComplexService.build(p, e, ring, N, Wmax)
        ny = NygaardService.nygaard_complex(base, i)
        return SyntomicComplex(p=p, e=e, i=i, ring=ring, N=N, base=base, nygaard=ny, cone_sign=cone_sign)

    @staticmethod
    def assemble(c: SyntomicComplex, weights: Iterable[int]) -> Tuple[PModMatrix, PModMatrix]:
        """
        (D0, D1) restricted to a set of weights

        The complement of the set must be closed under w -> pw (it is then a
        subcomplex); Frobenius images leaving the set are dropped, which
        computes the quotient complex.
        """
        weights = sorted(set(weights))
        if weights and weights[-1] > c.Wmax:
            raise CertificateFailure(f"weight {weights[-1]} beyond Wmax = {c.Wmax}")
        ny, base, ring = c.nygaard, c.base, c.ring
        modulus = ring.pN

        index0 = {w: k for k, w in enumerate(weights)}
        keys1: List[Tuple[str, int]] = []
        for w in weights:
            if w >= 1:
                keys1.append(("n1", w))
            keys1.append(("f0", w))
        index1 = {key: k for k, key in enumerate(keys1)}
        index2 = {w: k for k, w in enumerate(w for w in weights if w >= 1)}

        lin0, semi0 = object_zeros(len(keys1), len(weights)), object_zeros(len(keys1), len(weights))
        lin1, semi1 = object_zeros(len(index2), len(keys1)), object_zeros(len(index2), len(keys1))

        for w in weights:
            col = index0[w]
            s0 = ny.s(w, 0)
            if w >= 1:
                lin0[index1[("n1", w)], col] += ny.d_scaled[w].to_int(ring)
            lin0[index1[("f0", w)], col] -= pow(c.p, s0, modulus)
            target = base.phi_targets[(w, 0)]
            if target in index0:
                semi0[index1[("f0", target)], col] += ny.divided_phi[(w, 0)].to_int(ring)

            if w == 0:
                continue
            s1 = ny.s(w - 1, 1)
            col = index1[("n1", w)]
            lin1[index2[w], col] -= pow(c.p, s1, modulus)
            target_weight = base.phi_targets[(w - 1, 1)] + 1
            if target_weight in index2:
                semi1[index2[target_weight], col] += ny.divided_phi[(w - 1, 1)].to_int(ring)
            lin1[index2[w], index1[("f0", w)]] += c.cone_sign * base.d_coeff(w).to_int(ring)

        return _expand(lin0, semi0, ring), _expand(lin1, semi1, ring)

    # ---------- tail certificate ----------

    @staticmethod
    def is_stable_weight(c: SyntomicComplex, w: int) -> bool:
        """From w on, can is the identity and phi/p^i has valuation >= 1"""
        return w >= 1 and c.base.j(w) >= c.i + 1 and c.base.j(w - 1) >= c.i

    @staticmethod
    def tail_valuations(c: SyntomicComplex, w: int) -> Tuple[int, int]:
        """Valuations of phi/p^i on g0 and n1 at a stable weight (Legendre only)"""
        p, i, j = c.p, c.i, c.base.j
        v0 = WittService.factorial_ratio_valuation(j(p * w), j(w), p) - i
        v1 = 1 + WittService.factorial_ratio_valuation(j(p * w - 1), j(w - 1), p) - i
        return v0, v1

    @staticmethod
    def neumann_inverse_ok(valuations: Sequence[int], p: int, N: int) -> bool:
        """
        Invert 1 - T on a tail segment, T the shift with entries p^v

        Checks T^N = 0 mod p^N on the N sampled positions and that the
        truncated geometric series is a two-sided inverse there.
        """
        size = len(valuations) + 1
        shift = PModMatrix.zeros(size, size, p, N)
        for k, v in enumerate(valuations):
            shift.entries[k + 1, k] = pow(p, v, p ** N)
        identity = PModMatrix.identity(size, p, N)
        power, series = identity, identity
        for _ in range(len(valuations) - 1):
            power = power @ shift
            series = PModMatrix(series.entries + power.entries, p, N)
        if not (power @ shift).is_zero:
            return False
        one_minus = PModMatrix(identity.entries - shift.entries, p, N)
        return one_minus @ series == identity and series @ one_minus == identity

    @staticmethod
    def tail_certificate(c: SyntomicComplex, d: int, a_max: int) -> TowerTruncation:
        weights = [d * c.p ** (a_max + k) for k in range(c.N)]
        if not SyntomicService.is_stable_weight(c, weights[0]):
            return TowerTruncation(d, a_max, (), 0, False)
        valuations = tuple(SyntomicService.tail_valuations(c, w) for w in weights)
        sums = [sum(v[deg] for v in valuations) for deg in (0, 1)]
        certified = all(v >= 1 for pair in valuations for v in pair) and min(sums) >= c.N
        return TowerTruncation(d, a_max, valuations, min(sums), certified)

    @staticmethod
    def tower_decompose(c: SyntomicComplex, extra_positions: int = 0) -> List[TowerComplex]:
        """
        One certified finite complex per tower d <= Wmax

        Towers whose first weight is already stable are short-circuited
        (their quotient is empty). extra_positions keeps more positions than
        needed on the other towers, for stability runs.
        """
        p, Wmax = c.p, c.Wmax
        if not SyntomicService.is_stable_weight(c, Wmax + 1):
            raise CertificateFailure(f"towers beyond Wmax = {Wmax} are not certified stable")

        towers: List[TowerComplex] = []
        short_circuited = 0
        for d in range(1, Wmax + 1):
            if d % p == 0:
                continue
            a_max = 0
            while not SyntomicService.is_stable_weight(c, d * p ** a_max):
                a_max += 1
            if a_max:
                a_max += extra_positions
            truncation = SyntomicService.tail_certificate(c, d, a_max)
            if not truncation.certified:
                raise CertificateFailure(f"tower d={d}: tail at position {a_max} not certified")

            weights = tuple(d * p ** a for a in range(a_max))
            if not weights:
                short_circuited += 1
                towers.append(TowerComplex(d, (), None, None, truncation))
                continue
            if weights[-1] > Wmax:
                raise CertificateFailure(f"tower d={d} needs weight {weights[-1]} > Wmax = {Wmax}")
            tail = truncation.tail_valuations
            if not all(SyntomicService.neumann_inverse_ok([v[deg] for v in tail], p, c.N) for deg in (0, 1)):
                raise CertificateFailure(f"tower d={d}: Neumann inverse check failed")
            d0, d1 = SyntomicService.assemble(c, weights)
            towers.append(TowerComplex(d, weights, d0, d1, truncation))
            logger.debug(
                "tower d=%s positions=%s tail valuation sum=%s", d, a_max, truncation.valuation_sum
            )
        logger.debug("%s towers, %s short-circuited", len(towers), short_circuited)
        return towers

    # ---------- cohomology ----------

    @staticmethod
    def complex_cohomology(d0: PModMatrix, d1: PModMatrix, f: int) -> Groups:
        p, N = d0.p, d0.N
        h0 = LinalgService.homology_at(PModMatrix.zeros(d0.cols, 0, p, N), d0)
        h1 = LinalgService.homology_at(d0, d1)
        h2 = LinalgService.homology_at(d1, PModMatrix.zeros(0, d1.rows, p, N))
        return h0.collapse(f), h1.collapse(f), h2.collapse(f)

    @staticmethod
    def tower_cohomology(c: SyntomicComplex, tower: TowerComplex) -> Groups:
        if tower.short_circuited:
            empty = HomologyGroup(c.p, c.N, ())
            return empty, empty, empty
        return SyntomicService.complex_cohomology(tower.d0, tower.d1, c.f)

    @staticmethod
    async def tower_cohomology_async(
        c: SyntomicComplex, towers: Sequence[TowerComplex], jobs: int
    ) -> Dict[int, Groups]:
        semaphore = asyncio.Semaphore(jobs)

        async def evaluate(tower: TowerComplex):
            async with semaphore:
                groups = await asyncio.to_thread(SyntomicService.tower_cohomology, c, tower)
                return tower.d, groups

        pairs = await asyncio.gather(*(evaluate(t) for t in towers if not t.short_circuited))
        return dict(sorted(pairs))

    @staticmethod
    def _evaluate_towers(c: SyntomicComplex, towers: Sequence[TowerComplex], jobs: int) -> Dict[int, Groups]:
        if jobs > 1:
            return asyncio.run(SyntomicService.tower_cohomology_async(c, towers, jobs))
        return {t.d: SyntomicService.tower_cohomology(c, t) for t in towers if not t.short_circuited}

    @staticmethod
    def zp_i(
        p: int,
        e: int,
        i: int,
        f: int = 1,
        N0: Optional[int] = None,
        *,
        wmax: Optional[int] = None,
        extra_positions: int = 0,
        jobs: Optional[int] = None,
        cone_sign: int = -1,
    ) -> CohomologyResult:
        started = time.perf_counter()
        jobs = jobs or settings.SYNTOMIC_JOBS
        N = N0 or auto_precision(p, e, i)
        Wmax = wmax or auto_weight_window(p, e, i)
        escalations = 0

        while True:
            if N > settings.SYNTOMIC_PRECISION_CEILING:
                raise NonTermination(
                    f"precision {N} passed SYNTOMIC_PRECISION_CEILING = "
                    f"{settings.SYNTOMIC_PRECISION_CEILING} for (p,e,i,f) = ({p},{e},{i},{f})"
                )
            ring = WittRing(p, N, f)
            c = SyntomicService.build_fiber(p, e, i, ring, N, Wmax, cone_sign)
            try:
                towers = SyntomicService.tower_decompose(c, extra_positions)
            except CertificateFailure as exc:
                if Wmax * 2 > settings.SYNTOMIC_MAX_WEIGHT:
                    raise NonTermination(f"weight window cannot grow past {Wmax}: {exc}") from exc
                logger.info("escalating Wmax %s -> %s (%s)", Wmax, Wmax * 2, exc)
                Wmax *= 2
                escalations += 1
                continue

            groups = SyntomicService._evaluate_towers(c, towers, jobs)
            saturated = sorted(d for d, hs in groups.items() if any(h.saturated for h in hs))
            if not saturated:
                break
            logger.info("towers %s saturated at N=%s, escalating", saturated, N)
            N += settings.SYNTOMIC_PRECISION_STEP
            escalations += 1

        point_h0, point_h1 = BasecaseService.zp_i_point(ring.q, i, N)
        point = (point_h0.collapse(f), point_h1.collapse(f), HomologyGroup(p, N, ()))
        result = SyntomicService._result(p, e, i, f, N, Wmax, [(0, point)] + sorted(groups.items()))
        result.runtime = RuntimeInfo(
            escalations=escalations,
            towers_computed=len(groups),
            towers_short_circuited=sum(1 for t in towers if t.short_circuited),
            elapsed_seconds=time.perf_counter() - started,
        )
        logger.info(
            "Z_%s(%s) of k[x]/x^%s (f=%s): N=%s Wmax=%s validated=%s in %.2fs",
            p, i, e, f, N, Wmax, result.validated, result.runtime.elapsed_seconds,
        )
        return result

    @staticmethod
    async def zp_i_async(
        p: int, e: int, i: int, f: int = 1, N0: Optional[int] = None, *, jobs: int = 2, **kwargs
    ) -> CohomologyResult:
        """zp_i off the event loop, towers spread over `jobs` threads"""
        return await asyncio.to_thread(SyntomicService.zp_i, p, e, i, f, N0, jobs=jobs, **kwargs)

    @staticmethod
    def _result(
        p: int, e: int, i: int, f: int, N: int, Wmax: int,
        blocks: Sequence[Tuple[Optional[int], Groups]],
    ) -> CohomologyResult:
        h = []
        for deg in range(3):
            towers = [
                TowerFactors(d=d, factors=list(groups[deg].factors), multiplicity=groups[deg].multiplicity)
                for d, groups in blocks
                if not groups[deg].is_zero
            ]
            h.append(DegreeGroups(deg=deg, towers=towers))
        saturated = any(g.saturated for _, groups in blocks for g in groups)
        point = i == 0

        notes = []
        validated = "invariants-only"
        if e == 2 and p > 2 and i >= 1:
            pairs = SyntomicService.closed_form_h1(p, i)
            if all(d is not None for d, _ in blocks):
                expected = {d: [n] for d, n in pairs}
                got = {t.d: t.factors for t in h[1].towers}
                h1_ok = got == expected and all(t.multiplicity == f for t in h[1].towers)
            else:
                # undecomposed blocks: compare the whole H^1 as a Z_p-module
                expected = sorted(n for _, n in pairs for _ in range(f))
                got = sorted(n for _, groups in blocks for n in groups[1].raw())
                h1_ok = got == expected
            if h1_ok and not h[0].towers and not h[2].towers:
                validated = "closed-form"
            else:
                validated = "mismatch"
                logger.warning("closed form %s disagrees with computed H^1 %s at (p,i,f)=(%s,%s,%s)", expected, got, p, i, f)
        elif e == 2 and p == 2:
            notes.append("p = 2: exploratory, no closed form")
        elif e != 2:
            notes.append("unvalidated: internal invariants only")
        if point:
            notes.append("i = 0: weight-0 block is Z_p at precision (saturated by construction)")

        return CohomologyResult(
            p=p, e=e, i=i, f=f, precision=N, wmax=Wmax, h=h,
            saturated=saturated, validated=validated, point=point, notes=notes,
        )

    # ---------- closed form, K-groups, oracles ----------

    @staticmethod
    def closed_form_h1(p: int, i: int, e: int = 2) -> List[Tuple[int, int]]:
        """(d, n(i,d)) with p^(n-1) d <= 2i - 1 < p^n d, d odd and prime to p"""
        if e != 2:
            raise Unsupported(f"closed form only known for e = 2, got e = {e}")
        if p <= 2:
            raise Unsupported(f"closed form needs p > 2, got p = {p}")
        if i < 1:
            raise ValueError(f"closed form needs i >= 1, got {i}")
        bound = 2 * i - 1
        pairs = []
        for d in range(1, bound + 1, 2):
            if d % p == 0:
                continue
            n = 1
            while p ** n * d <= bound:
                n += 1
            pairs.append((d, n))
        return pairs

    @staticmethod
    def relative_k_group(p: int, i: int, f: int = 1, **kwargs) -> HomologyGroup:
        """
        K_(2i-1)(k[x]/x^2, (x); Z_p) = H^1(Z_p(i))

        Assumes degree separation: every Z_p(j) of the dual numbers sits in
        degree 1, so K_(2i-1) only sees gr^i. H^0 and H^2 are checked to vanish.
        """
        result = SyntomicService.zp_i(p, 2, i, f, **kwargs)
        if result.degree(0).towers or result.degree(2).towers:
            raise ValidationMismatch(f"H^0 or H^2 of Z_{p}({i}) nonzero; K-group reading invalid")
        return result.group(1)

    @staticmethod
    def k_groups(p: int, f: int, n_max: int) -> Dict[int, HomologyGroup]:
        """K_n(k[x]/x^2, (x); Z_p) for 1 <= n <= n_max"""
        cache: Dict[int, CohomologyResult] = {}

        def weight(i: int) -> CohomologyResult:
            if i not in cache:
                cache[i] = SyntomicService.zp_i(p, 2, i, f)
            return cache[i]

        table = {}
        for n in range(1, n_max + 1):
            i = (n + 1) // 2
            if n % 2:
                if weight(i).degree(0).towers or weight(i).degree(2).towers:
                    raise ValidationMismatch(f"Z_{p}({i}) has cohomology outside degree 1")
                table[n] = weight(i).group(1)
            else:
                # K_2i receives H^0(Z_p(i)) and H^2(Z_p(i+1))
                parts = [weight(i).group(0, include_point=False), weight(i + 1).group(2)]
                table[n] = merge_groups(p, max(r.precision for r in cache.values()), parts).collapse(f)
        return table

    @staticmethod
    def zp_i_naive(
        p: int,
        e: int,
        i: int,
        f: int,
        N: int,
        Wmax: Optional[int] = None,
        A_uniform: Optional[int] = None,
    ) -> CohomologyResult:
        """
        One dense complex on weights 0..Wmax, no tower split

        Weights with v_p(w) > A_uniform are dropped as well; the dropped
        weights must all be stable for the answer to be right.
        """
        if Wmax is None:
            Wmax = e * (i + 2)
        ring = WittRing(p, N, f)
        c = SyntomicService.build_fiber(p, e, i, ring, N, Wmax)
        if not SyntomicService.is_stable_weight(c, Wmax + 1):
            raise CertificateFailure(f"naive window Wmax = {Wmax} too small for i = {i}")
        weights = [
            w for w in range(Wmax + 1)
            if w == 0 or A_uniform is None or p_valuation(w, p) <= A_uniform
        ]
        dropped = sorted(set(range(1, Wmax + 1)) - set(weights))
        unstable = [w for w in dropped if not SyntomicService.is_stable_weight(c, w)]
        if unstable:
            raise CertificateFailure(
                f"A_uniform = {A_uniform} drops unstable weights {unstable[:5]} for i = {i}"
            )
        d0, d1 = SyntomicService.assemble(c, weights)
        groups = SyntomicService.complex_cohomology(d0, d1, f)
        return SyntomicService._result(p, e, i, f, N, Wmax, [(None, groups)])

    @staticmethod
    def dual_number_units(p: int, f: int = 1) -> HomologyGroup:
        """
        Group structure of 1 + x k[x]/x^2 by brute force

        Elements are pairs (a0, a1) with (a0,a1)(b0,b1) = (a0 b0, a0 b1 + a1 b0);
        c_k = log_p #{u : u^(p^k) = 1} determines the cyclic factors.
        """
        field = galois.GF(p ** f)
        a0, a1 = field.Ones(p ** f), field.elements

        def power_p(u0, u1):
            r0, r1 = field.Ones(len(u0)), field.Zeros(len(u0))
            for _ in range(p):
                r0, r1 = r0 * u0, r0 * u1 + r1 * u0
            return r0, r1

        logs = [0]
        u0, u1 = a0, a1
        while logs[-1] < f:
            u0, u1 = power_p(u0, u1)
            killed = int(np.count_nonzero((u0 == 1) & (u1 == 0)))
            logs.append(p_valuation(killed, p))
            if len(logs) > f + 2:
                raise ArithmeticError("dual number units did not become p-torsion")
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        factors = []
        for k in range(1, len(logs)):
            factors.extend([k] * (at_least[k - 1] - at_least[k]))
        return HomologyGroup(p, len(logs), tuple(factors)).collapse(f)


syntomic_service = SyntomicService()
