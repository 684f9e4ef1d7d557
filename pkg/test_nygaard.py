import dataclasses

import pytest

from app.errors import IntegralityViolation, WindowTooSmall
from app.models.witt import WittRing
from app.services.dpcomplex_service import DPComplexService
from app.services.nygaard_service import NygaardService


def _nygaard(p, e, i, N=5, Wmax=80):
    base = DPComplexService.build(p, e, WittRing(p, N), N, Wmax)
    return NygaardService.nygaard_complex(base, i)


def test_scaling_is_hodge_tensor_p_adic():
    ny = _nygaard(3, 2, 3)
    assert ny.s(0, 0) == 3
    assert ny.s(5, 0) == 1
    assert ny.s(6, 0) == 0
    assert ny.s(0, 1) == 2
    assert ny.s(4, 1) == 0


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("e", [2, 3])
@pytest.mark.parametrize("i", [0, 1, 4, 7])
def test_divided_frobenius_is_integral(p, e, i):
    ny = _nygaard(p, e, i)
    assert all(value.v >= 0 for value in ny.divided_phi.values() if not value.is_zero)
    assert all(value.v >= 0 for value in ny.d_scaled.values())


@pytest.mark.parametrize("p,e,i", [(3, 2, 2), (5, 2, 4), (3, 3, 3), (7, 4, 1)])
def test_divisibility_definition_agrees(p, e, i):
    ny = _nygaard(p, e, i)
    divisibility = NygaardService.divisibility_scaling(ny.base, i)
    assert divisibility == ny.scaling


def test_divided_frobenius_rejects_wrong_scaling():
    ny = _nygaard(3, 2, 3)
    unscaled = dataclasses.replace(ny, scaling={key: 0 for key in ny.scaling})
    with pytest.raises(IntegralityViolation):
        NygaardService.divided_frobenius(unscaled)


@pytest.mark.parametrize("weight,expected", [
    (1, (1,)),   # j = 0 < i: W/p
    (3, (2,)),   # j = 1 < i: W/3p
    (5, ()),     # j = 2 >= i: W/5
    (9, (2,)),   # j = 4: W/9
    (2, ()),
    (4, ()),
])
def test_nygaard_cohomology_of_dual_numbers(weight, expected):
    ny = _nygaard(3, 2, 2)
    h0, h1 = NygaardService.nygaard_cohomology(ny, weight)
    assert h0.is_zero
    assert h1.factors == expected


def test_nygaard_cohomology_weight_zero():
    h0, h1 = NygaardService.nygaard_cohomology(_nygaard(3, 2, 2), 0)
    assert h0.factors == (5,)
    assert h1.is_zero


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("i", range(0, 7))
def test_gr_nygaard_matches_conjugate_filtration(p, i):
    e = 2
    weight_bound = e * (i + 1)
    base = DPComplexService.build(p, e, WittRing(p, 2), 2, p * weight_bound)
    report = NygaardService.gr_nygaard_check(NygaardService.nygaard_complex(base, i), weight_bound)
    assert report.passed
    assert report.rank == report.sources == report.targets == e * p * (i + 1)
    assert report.first_offending_weight is None


@pytest.mark.parametrize("e,i", [(3, 2), (4, 1)])
def test_gr_nygaard_general_e(e, i):
    p = 3
    weight_bound = e * (i + 1)
    base = DPComplexService.build(p, e, WittRing(p, 2), 2, p * weight_bound)
    assert NygaardService.gr_nygaard_check(NygaardService.nygaard_complex(base, i), weight_bound).passed


def test_gr_nygaard_needs_window():
    ny = _nygaard(3, 2, 1, Wmax=20)
    with pytest.raises(WindowTooSmall):
        NygaardService.gr_nygaard_check(ny, 7)


@pytest.mark.parametrize("p,e", [(3, 2), (5, 2), (3, 3), (7, 4)])
@pytest.mark.parametrize("i", [0, 1, 3, 6])
def test_next_filtration_step_scales_by_at_most_p(p, e, i):
    base = DPComplexService.build(p, e, WittRing(p, 5), 5, 60)
    lower = NygaardService.nygaard_complex(base, i)
    upper = NygaardService.nygaard_complex(base, i + 1)
    assert upper.scaling.keys() == lower.scaling.keys()
    for key in lower.scaling:
        assert upper.s(*key) - lower.s(*key) in (0, 1), key
