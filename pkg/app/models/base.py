"""
Graded presentations of TC^- and TP of a perfect field k of characteristic p

  pi_* TC^- = W(k)[x, sigma]/(x sigma = xi),  |x| = -2, |sigma| = 2
  pi_* TP   = W(k)[u, u^-1],                  |u| = 2
  can(sigma) = xi u,  can(x) = u^-1,  phi(sigma) = u,  phi(x) = phi(xi) u^-1
In characteristic p, xi = p and phi(xi) = p.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from app.errors import Unsupported
from app.models.witt import WittElem, WittRing


@dataclass(frozen=True)
class TPMonomial:
    """coef * u^power in pi_* TP"""

    coef: WittElem
    power: int

    def __mul__(self, other: "TPMonomial") -> "TPMonomial":
        return TPMonomial(self.coef * other.coef, self.power + other.power)

    def __pow__(self, n: int) -> "TPMonomial":
        return TPMonomial(self.coef ** n, self.power * n)


@dataclass(frozen=True, eq=False)
class PerfectBaseData:
    ring: WittRing
    j_min: int
    j_max: int
    xi: int

    def __post_init__(self):
        if self.xi != self.ring.p:
            raise Unsupported(f"only xi = p (characteristic p base) is supported, got xi = {self.xi}")
        if self.j_min > self.j_max:
            raise ValueError(f"empty degree range [{self.j_min}, {self.j_max}]")

    @classmethod
    def for_ring(cls, ring: WittRing, j_min: int, j_max: int) -> "PerfectBaseData":
        return cls(ring=ring, j_min=j_min, j_max=j_max, xi=ring.p)

    @property
    def degrees(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def tc_minus_generator(self, j: int) -> str:
        """Free generator of pi_(2j) TC^-"""
        if j == 0:
            return "1"
        return f"sigma^{j}" if j > 0 else f"x^{-j}"

    def tp_generator(self, j: int) -> str:
        return f"u^{j}"

    # ---------- maps on generators ----------

    def can_sigma(self) -> TPMonomial:
        return TPMonomial(self.ring.element(self.xi), 1)

    def can_x(self) -> TPMonomial:
        return TPMonomial(self.ring.one(), -1)

    def phi_sigma(self) -> TPMonomial:
        return TPMonomial(self.ring.one(), 1)

    def phi_x(self) -> TPMonomial:
        return TPMonomial(self.ring.frobenius(self.ring.element(self.xi)), -1)

    def generator_images(self, j: int) -> Tuple[TPMonomial, TPMonomial]:
        """(can, phi) of the pi_(2j) generator, both multiples of u^j"""
        if j >= 0:
            return self.can_sigma() ** j, self.phi_sigma() ** j
        return self.can_x() ** (-j), self.phi_x() ** (-j)
