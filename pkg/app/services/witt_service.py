"""
Witt vector operations on top of the Z_q/p^N model

Fixed-length model: V is realised as p * F^(-1). On W(F_q) the Frobenius is
bijective, so this agrees with the Verschiebung of W_N(F_q) under the usual
identification of W_N with W/p^N (V followed by truncation).
"""
import logging
from functools import lru_cache
from typing import Sequence

from app.models.witt import ValScalar, WittElem, WittRing

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _factorial_unit_part(j_hi: int, j_lo: int, p: int, modulus: int) -> int:
    unit = 1
    for k in range(j_lo + 1, j_hi + 1):
        while k % p == 0:
            k //= p
        unit = unit * k % modulus
    return unit


class FactorialTable:
    """Prefix products of p-stripped integers, for many factorial ratios at once"""

    def __init__(self, ring: WittRing, j_max: int):
        self.ring = ring
        self.j_max = j_max
        p, modulus = ring.p, ring.pN
        prefix = [1]
        for k in range(1, j_max + 1):
            while k % p == 0:
                k //= p
            prefix.append(prefix[-1] * k % modulus)
        self._prefix = prefix

    def ratio(self, j_hi: int, j_lo: int) -> ValScalar:
        if not self.j_max >= j_hi >= j_lo >= 0:
            raise ValueError(f"ratio ({j_hi}, {j_lo}) outside table range [0, {self.j_max}]")
        ring = self.ring
        v = WittService.factorial_ratio_valuation(j_hi, j_lo, ring.p)
        unit = self._prefix[j_hi] * pow(self._prefix[j_lo], -1, ring.pN) % ring.pN
        return ValScalar(v, ring.element(unit))


class WittService:
    """Teichmuller lifts, F, V, Witt coordinates and factorial bookkeeping"""

    @staticmethod
    def teichmuller(ring: WittRing, a) -> WittElem:
        """
        Multiplicative lift [a] of a residue a in F_q

        Iterates x -> x^q from any lift; each round gains one digit.
        """
        x = ring.lift(a)
        for _ in range(ring.N + 1):
            y = x ** ring.q
            if y == x:
                return x
            x = y
        raise ArithmeticError(f"Teichmuller iteration did not stabilise for {a}")

    @staticmethod
    def frobenius(x: WittElem) -> WittElem:
        return x.ring.frobenius(x)

    @staticmethod
    def frobenius_inverse(x: WittElem) -> WittElem:
        # F has order f on Z_q
        for _ in range(x.ring.f - 1):
            x = x.ring.frobenius(x)
        return x

    @staticmethod
    def verschiebung(x: WittElem) -> WittElem:
        return WittService.frobenius_inverse(x) * x.ring.p

    @staticmethod
    def to_witt_coords(x: WittElem) -> list:
        """
        Peel x = sum_{n<N} V^n [a_n]

        After each step the remainder is divisible by p and is only known
        mod p^(N-n-1), which is all the later digits need.
        """
        ring = x.ring
        coords = []
        remainder = x
        for n in range(ring.N):
            a = ring.residue(remainder)
            coords.append(a)
            if n == ring.N - 1:
                break
            remainder = remainder - WittService.teichmuller(ring, a)
            remainder = ring.frobenius(remainder.exact_div_p())
        return coords

    @staticmethod
    def from_witt_coords(ring: WittRing, coords: Sequence) -> WittElem:
        if len(coords) != ring.N:
            raise ValueError(f"expected {ring.N} Witt coordinates, got {len(coords)}")
        acc = ring.zero()
        for a in reversed(list(coords)):
            acc = WittService.teichmuller(ring, a) + WittService.verschiebung(acc)
        return acc

    @staticmethod
    def legendre_valuation(j: int, p: int) -> int:
        """v_p(j!) = (j - s_p(j)) / (p - 1)"""
        if j < 0:
            raise ValueError(f"j must be >= 0, got {j}")
        digit_sum, n = 0, j
        while n:
            digit_sum += n % p
            n //= p
        return (j - digit_sum) // (p - 1)

    @staticmethod
    def factorial_ratio(j_hi: int, j_lo: int, ring: WittRing) -> ValScalar:
        """j_hi! / j_lo! as (valuation, unit mod p^N)"""
        if not j_hi >= j_lo >= 0:
            raise ValueError(f"need j_hi >= j_lo >= 0, got ({j_hi}, {j_lo})")
        p = ring.p
        v = WittService.legendre_valuation(j_hi, p) - WittService.legendre_valuation(j_lo, p)
        return ValScalar(v, ring.element(_factorial_unit_part(j_hi, j_lo, p, ring.pN)))

    @staticmethod
    def factorial_ratio_valuation(j_hi: int, j_lo: int, p: int) -> int:
        """Valuation part of factorial_ratio, without the unit product"""
        return WittService.legendre_valuation(j_hi, p) - WittService.legendre_valuation(j_lo, p)


witt_service = WittService()
