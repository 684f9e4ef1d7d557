"""
Truncated Witt vectors W_N(F_q), modelled as Z_q/p^N = (Z/p^N)[t]/(modulus)

Witt coordinates are only a codec (see witt_service); the ring arithmetic is
plain polynomial arithmetic on residues in [0, p^N).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import galois
import numpy as np


def p_valuation(n: int, p: int, cap: Optional[int] = None) -> int:
    """v_p(n); returns cap for n == 0 (cap required then)"""
    if n == 0:
        if cap is None:
            raise ValueError("valuation of zero needs a cap")
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v if cap is None else min(v, cap)


class WittRing:
    """
    W_N(F_q) with q = p^f

    Elements are coordinate vectors of length f in the residue basis
    1, t, ..., t^(f-1) of Z_q/p^N. The default modulus is the
    lexicographically smallest monic irreducible of degree f over F_p,
    lifted coefficient-wise.
    """

    def __init__(self, p: int, N: int, f: int = 1, modulus: Optional[Sequence[int]] = None):
        if not galois.is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if N < 1:
            raise ValueError(f"precision N must be >= 1, got {N}")
        if f < 1:
            raise ValueError(f"residue degree f must be >= 1, got {f}")

        self.p = p
        self.N = N
        self.f = f
        self.q = p ** f
        self.pN = p ** N

        prime_field = galois.GF(p)
        if f == 1:
            self.modulus: Tuple[int, ...] = (0, 1)
            self.residue_field = prime_field
            return

        if modulus is None:
            irreducible = galois.irreducible_poly(p, f, method="min")
            modulus = [int(c) for c in irreducible.coeffs[::-1]]
        modulus = tuple(int(c) % self.pN for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {f}: {modulus}")
        reduced = galois.Poly([c % p for c in modulus[::-1]], field=prime_field)
        if not reduced.is_irreducible():
            raise ValueError(f"modulus {modulus} is not irreducible mod {p}")
        self.modulus = modulus
        self.residue_field = galois.GF(self.q, irreducible_poly=reduced)

    def __repr__(self) -> str:
        return f"WittRing(p={self.p}, N={self.N}, f={self.f})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WittRing):
            return NotImplemented
        return (self.p, self.N, self.f, self.modulus) == (other.p, other.N, other.f, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.N, self.f, self.modulus))

    # ---------- construction ----------

    def element(self, coords: Union[int, Sequence[int]]) -> "WittElem":
        if isinstance(coords, (int, np.integer)):
            coords = [int(coords)] + [0] * (self.f - 1)
        return WittElem(self._reduce(list(coords)), self)

    def zero(self) -> "WittElem":
        return self.element(0)

    def one(self) -> "WittElem":
        return self.element(1)

    def random_element(self, rng: random.Random) -> "WittElem":
        return self.element([rng.randrange(self.pN) for _ in range(self.f)])

    def random_residue(self, rng: random.Random):
        return self.residue_field(rng.randrange(self.q))

    def _reduce(self, coeffs: list) -> Tuple[int, ...]:
        f = self.f
        coeffs = [int(c) for c in coeffs]
        for k in range(len(coeffs) - 1, f - 1, -1):
            c = coeffs[k]
            if c:
                for r in range(f):
                    coeffs[k - f + r] -= c * self.modulus[r]
        coeffs = coeffs[:f] + [0] * (f - len(coeffs))
        return tuple(c % self.pN for c in coeffs)

    # ---------- residue field ----------

    def residue(self, x: "WittElem"):
        """Reduction mod p, as an element of the galois field F_q"""
        if self.f == 1:
            return self.residue_field(x.coords[0] % self.p)
        return self.residue_field.Vector([c % self.p for c in x.coords[::-1]])

    def lift(self, a) -> "WittElem":
        """Coordinate-wise lift of a residue (not multiplicative; see teichmuller)"""
        if self.f == 1:
            return self.element(int(a))
        return self.element([int(c) for c in a.vector()[::-1]])

    # ---------- Frobenius ----------

    def unit_inverse(self, x: "WittElem") -> "WittElem":
        """Inverse of a unit by Newton lifting of the residue inverse"""
        if not x.is_unit:
            raise ValueError(f"{x} is not a unit in {self}")
        if self.f == 1:
            return self.element(pow(x.coords[0], -1, self.pN))
        y = self.lift(self.residue_field(1) / self.residue(x))
        two = self.element(2)
        precision = 1
        while precision < self.N:
            y = y * (two - x * y)
            precision *= 2
        if x * y != self.one():
            raise ArithmeticError(f"Newton inversion failed for {x}")
        return y

    def _eval_integer_poly(self, coeffs: Sequence[int], x: "WittElem") -> "WittElem":
        acc = self.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    @cached_property
    def frobenius_root(self) -> "WittElem":
        """The root of the modulus congruent to t^p mod p (Hensel lifted)"""
        if self.f == 1:
            return self.one()
        derivative = [k * self.modulus[k] for k in range(1, self.f + 1)]
        theta = self.element([0, 1]) ** self.p
        for _ in range(2 * self.N + 2):
            value = self._eval_integer_poly(self.modulus, theta)
            if value.is_zero:
                return theta
            slope = self._eval_integer_poly(derivative, theta)
            theta = theta - value * self.unit_inverse(slope)
        raise ArithmeticError(f"Hensel lifting of the Frobenius did not converge in {self}")

    @cached_property
    def frobenius_matrix(self) -> np.ndarray:
        """Z/p^N-linear matrix of F; column k holds the coordinates of theta^k"""
        matrix = np.zeros((self.f, self.f), dtype=object)
        power = self.one()
        for k in range(self.f):
            matrix[:, k] = power.coords
            power = power * self.frobenius_root
        return matrix

    def frobenius(self, x: "WittElem") -> "WittElem":
        if self.f == 1:
            return x
        image = self.frobenius_matrix.dot(np.array(x.coords, dtype=object))
        return self.element(list(image))


@dataclass(frozen=True)
class WittElem:
    """Element of W_N(F_q); coords canonical in [0, p^N)"""

    coords: Tuple[int, ...]
    ring: WittRing = field(compare=False, repr=False)

    def _coerce(self, other) -> "WittElem":
        if isinstance(other, WittElem):
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.element(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.ring.element([a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element([-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.ring.element([a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.ring.f
        if f == 1:
            return self.ring.element(self.coords[0] * other.coords[0])
        product = [0] * (2 * f - 1)
        for a_idx, a in enumerate(self.coords):
            if a:
                for b_idx, b in enumerate(other.coords):
                    product[a_idx + b_idx] += a * b
        return self.ring.element(product)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.ring.unit_inverse(self) ** (-n)
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def valuation(self) -> int:
        """p-adic valuation, N for zero"""
        return min(p_valuation(c, self.ring.p, cap=self.ring.N) for c in self.coords)

    @property
    def is_unit(self) -> bool:
        return any(c % self.ring.p for c in self.coords)

    @property
    def is_constant(self) -> bool:
        return not any(self.coords[1:])

    def exact_div_p(self) -> "WittElem":
        """x / p for x divisible by p; the result is meaningful mod p^(N-1)"""
        p = self.ring.p
        if any(c % p for c in self.coords):
            raise ValueError(f"{self} is not divisible by {p}")
        return WittElem(tuple(c // p for c in self.coords), self.ring)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{k}")
        return " + ".join(terms)


@dataclass(frozen=True)
class ValScalar:
    """
    Exact scalar p^v * u with u a unit

    v is None for zero. v may exceed N (the value is still exact, it just
    reduces to 0 in W_N); a negative v only appears as an intermediate of a
    division by p^i and is rejected by to_elem().
    """

    v: Optional[int]
    u: Optional[WittElem]

    @classmethod
    def zero(cls) -> "ValScalar":
        return cls(None, None)

    @classmethod
    def from_int(cls, n: int, ring: WittRing) -> "ValScalar":
        if n == 0:
            return cls.zero()
        v = p_valuation(n, ring.p)
        return cls(v, ring.element(n // ring.p ** v))

    @property
    def is_zero(self) -> bool:
        return self.v is None

    def __mul__(self, other: "ValScalar") -> "ValScalar":
        if self.is_zero or other.is_zero:
            return ValScalar.zero()
        return ValScalar(self.v + other.v, self.u * other.u)

    def shift(self, k: int) -> "ValScalar":
        """Multiply by p^k (k may be negative)"""
        if self.is_zero:
            return self
        return ValScalar(self.v + k, self.u)

    def divide(self, other: "ValScalar") -> "ValScalar":
        """Exact quotient by valuation subtraction"""
        if other.is_zero:
            raise ZeroDivisionError("division by a zero ValScalar")
        if self.is_zero:
            return self
        return ValScalar(self.v - other.v, self.u * self.u.ring.unit_inverse(other.u))

    def to_elem(self, ring: WittRing) -> WittElem:
        if self.is_zero or self.v >= ring.N:
            return ring.zero()
        if self.v < 0:
            raise ValueError(f"ValScalar with negative valuation {self.v} is not integral")
        return self.u * ring.p ** self.v

    def to_int(self, ring: WittRing) -> int:
        """Residue mod p^N of a scalar lying in Z_p"""
        elem = self.to_elem(ring)
        if not elem.is_constant:
            raise ValueError(f"{elem} does not lie in Z_p")
        return elem.coords[0]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"p^{self.v}*({self.u})"
