"""
Witt vector arithmetic: Teichmuller lifts, F, V, Witt coordinates, factorials

Usage:
    pytest test_witt.py
"""
import math

import pytest

from app.models.witt import ValScalar, WittRing, p_valuation
from app.services.witt_service import FactorialTable, WittService


def test_teichmuller_of_zero_and_one(any_ring):
    field = any_ring.residue_field
    assert WittService.teichmuller(any_ring, field(0)).is_zero
    assert WittService.teichmuller(any_ring, field(1)) == any_ring.one()


def test_teichmuller_matches_brute_force():
    ring = WittRing(5, 3)
    expected = [x for x in range(125) if x % 5 == 2 and pow(x, 5, 125) == x]
    assert len(expected) == 1
    assert WittService.teichmuller(ring, ring.residue_field(2)).coords == (expected[0],)


def test_teichmuller_is_multiplicative(any_ring, rng):
    for _ in range(50):
        a, b = any_ring.random_residue(rng), any_ring.random_residue(rng)
        product = WittService.teichmuller(any_ring, a) * WittService.teichmuller(any_ring, b)
        assert product == WittService.teichmuller(any_ring, a * b)


def test_frobenius_is_identity_over_prime_field(ring_3_4, rng):
    for _ in range(20):
        x = ring_3_4.random_element(rng)
        assert WittService.frobenius(x) == x


def test_frobenius_has_order_two_over_f9(ring_9_4, rng):
    for _ in range(50):
        x = ring_9_4.random_element(rng)
        assert WittService.frobenius(WittService.frobenius(x)) == x


def test_frobenius_on_teichmuller_lifts(any_ring, rng):
    for _ in range(30):
        a = any_ring.random_residue(rng)
        lifted = WittService.teichmuller(any_ring, a)
        assert WittService.frobenius(lifted) == WittService.teichmuller(any_ring, a ** any_ring.p)


def test_frobenius_reduces_to_p_power(any_ring, rng):
    for _ in range(30):
        x = any_ring.random_element(rng)
        assert any_ring.residue(WittService.frobenius(x)) == any_ring.residue(x) ** any_ring.p


def test_frobenius_matrix_is_identity_after_f_steps_on_teichmuller(ring_9_4, rng):
    for _ in range(20):
        lifted = WittService.teichmuller(ring_9_4, ring_9_4.random_residue(rng))
        image = lifted
        for _ in range(ring_9_4.f):
            image = ring_9_4.frobenius(image)
        assert image == lifted


def test_fv_and_vf_are_multiplication_by_p(any_ring, rng):
    p = any_ring.p
    for _ in range(50):
        x = any_ring.random_element(rng)
        assert WittService.frobenius(WittService.verschiebung(x)) == x * p
        assert WittService.verschiebung(WittService.frobenius(x)) == x * p


def test_verschiebung_over_prime_field_is_p(ring_3_4, rng):
    assert WittService.verschiebung(ring_3_4.zero()).is_zero
    for _ in range(20):
        x = ring_3_4.random_element(rng)
        assert WittService.verschiebung(x) == x * 3


def test_witt_coords_of_zero_and_teichmuller(any_ring, rng):
    zero_coords = WittService.to_witt_coords(any_ring.zero())
    assert all(c == 0 for c in zero_coords)
    a = any_ring.random_residue(rng)
    coords = WittService.to_witt_coords(WittService.teichmuller(any_ring, a))
    assert coords[0] == a
    assert all(c == 0 for c in coords[1:])


def test_three_is_v_of_one_in_w2_f3():
    ring = WittRing(3, 2)
    coords = WittService.to_witt_coords(ring.element(3))
    assert [int(c) for c in coords] == [0, 1]
    assert WittService.from_witt_coords(ring, coords) == ring.element(3)


def test_witt_codec_round_trip(any_ring, rng):
    for _ in range(40):
        x = any_ring.random_element(rng)
        assert WittService.from_witt_coords(any_ring, WittService.to_witt_coords(x)) == x


def test_from_witt_coords_rejects_wrong_length(ring_3_4):
    with pytest.raises(ValueError):
        WittService.from_witt_coords(ring_3_4, [ring_3_4.residue_field(1)])


@pytest.mark.parametrize("p,j,expected", [(3, 0, 0), (3, 9, 4), (5, 26, 6), (2, 10, 8), (7, 49, 8)])
def test_legendre_valuation(p, j, expected):
    assert WittService.legendre_valuation(j, p) == expected


@pytest.mark.parametrize("p", [2, 3, 5])
def test_legendre_matches_factorization(p):
    for j in range(60):
        assert WittService.legendre_valuation(j, p) == p_valuation(math.factorial(j), p)


@pytest.mark.parametrize("j_hi,j_lo", [(4, 1), (9, 0), (12, 6), (5, 5), (30, 17)])
def test_factorial_ratio_matches_integer_ratio(j_hi, j_lo):
    ring = WittRing(3, 6)
    value = math.factorial(j_hi) // math.factorial(j_lo)
    ratio = WittService.factorial_ratio(j_hi, j_lo, ring)
    assert ratio.v == p_valuation(value, 3)
    assert ratio.to_int(ring) == value % 3 ** 6


def test_factorial_table_agrees_with_direct_product():
    ring = WittRing(5, 4)
    table = FactorialTable(ring, 60)
    for j_hi in range(0, 61, 7):
        for j_lo in range(0, j_hi + 1, 5):
            direct = WittService.factorial_ratio(j_hi, j_lo, ring)
            stored = table.ratio(j_hi, j_lo)
            assert (stored.v, stored.u) == (direct.v, direct.u)


def test_factorial_ratio_rejects_reversed_bounds(ring_3_4):
    with pytest.raises(ValueError):
        WittService.factorial_ratio(2, 5, ring_3_4)


def test_unit_inverse(any_ring, rng):
    for _ in range(20):
        x = any_ring.random_element(rng)
        if x.is_unit:
            assert x * any_ring.unit_inverse(x) == any_ring.one()
    with pytest.raises(ValueError):
        any_ring.unit_inverse(any_ring.element(any_ring.p))


def test_valscalar_division_and_integrality(ring_3_4):
    nine = ValScalar.from_int(9, ring_3_4)
    three = ValScalar.from_int(3, ring_3_4)
    assert nine.divide(three).to_int(ring_3_4) == 3
    with pytest.raises(ValueError):
        three.divide(nine).to_elem(ring_3_4)
    assert ValScalar.from_int(3 ** 5, ring_3_4).to_elem(ring_3_4).is_zero


def test_ring_rejects_bad_parameters():
    with pytest.raises(ValueError):
        WittRing(4, 3)
    with pytest.raises(ValueError):
        WittRing(3, 0)
    with pytest.raises(ValueError):
        WittRing(3, 2, f=2, modulus=[0, 0, 1])


def test_element_printer(ring_9_4):
    assert str(ring_9_4.element([1, 2])) == "1 + 2*t"


def test_ring_axioms(any_ring, rng):
    for _ in range(40):
        x, y, z = (any_ring.random_element(rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert x * any_ring.one() == x
        assert x - x == any_ring.zero()


def test_teichmuller_is_fixed_by_q_power(any_ring, rng):
    for _ in range(30):
        lifted = WittService.teichmuller(any_ring, any_ring.random_residue(rng))
        assert lifted ** any_ring.q == lifted


def test_factorial_ratio_gains_j_past_pj(any_ring):
    p = any_ring.p
    for j in range(201):
        for j_hi in (p * j, p * j + p - 1, 2 * p * j):
            ratio = WittService.factorial_ratio(j_hi, j, any_ring)
            assert ratio.v >= j, (j_hi, j)
            assert WittService.factorial_ratio_valuation(j_hi, j, p) == ratio.v
