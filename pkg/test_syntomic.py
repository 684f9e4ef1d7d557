"""
Z_p(i)(k[x]/x^e): fiber assembly, tower certificates, closed form, oracles

The full closed-form sweep (p in {3,5,7}, i <= 12, f in {1,2}) and the full
oracle grid are marked slow.
"""
import asyncio
import json
import logging

import pytest

from app.config import auto_precision, settings
from app.errors import CertificateFailure, CompositionNonzero, NonTermination, Unsupported
from app.models.matrix import PModMatrix
from app.models.witt import WittRing
from app.services.syntomic_service import SyntomicService


def _fiber(p, e, i, N=5, Wmax=None, f=1, cone_sign=-1):
    return SyntomicService.build_fiber(p, e, i, WittRing(p, N, f), N, Wmax, cone_sign)


# ---------- complex ----------

@pytest.mark.parametrize("p,e,i,f", [(3, 2, 4, 1), (5, 3, 2, 1), (3, 2, 2, 2), (2, 2, 3, 1)])
def test_fiber_is_a_complex(p, e, i, f):
    c = _fiber(p, e, i, Wmax=40, f=f)
    d0, d1 = SyntomicService.assemble(c, range(0, 41))
    assert (d1 @ d0).is_zero


def test_sign_flip_breaks_the_complex():
    c = _fiber(3, 2, 4, Wmax=40, cone_sign=1)
    d0, d1 = SyntomicService.assemble(c, range(0, 41))
    assert not (d1 @ d0).is_zero


def test_sign_flip_is_caught_by_homology():
    c = _fiber(3, 2, 4, cone_sign=1)
    with pytest.raises(CompositionNonzero):
        for tower in SyntomicService.tower_decompose(c):
            SyntomicService.tower_cohomology(c, tower)


@pytest.mark.parametrize("i", [1, 2, 5])
def test_weight_zero_block_is_one_minus_p_to_the_i(i):
    N = 6
    c = _fiber(3, 2, i, N=N)
    d0, d1 = SyntomicService.assemble(c, [0])
    assert d0.entries.shape == (1, 1)
    assert int(d0.entries[0, 0]) == (1 - 3 ** i) % 3 ** N
    assert d1.entries.shape == (0, 1)
    assert all(g.is_zero for g in SyntomicService.complex_cohomology(d0, d1, 1))


def test_weight_zero_block_at_i_zero_is_saturated():
    c = _fiber(3, 2, 0, N=4)
    d0, d1 = SyntomicService.assemble(c, [0])
    h0, h1, h2 = SyntomicService.complex_cohomology(d0, d1, 1)
    assert h0.factors == (4,) and h1.factors == (4,)
    assert h2.is_zero


def test_assemble_refuses_weights_beyond_window():
    c = _fiber(3, 2, 1, Wmax=20)
    with pytest.raises(CertificateFailure):
        SyntomicService.assemble(c, [1, 3, 9, 27])


# ---------- towers ----------

def test_tower_positions_for_small_weight():
    c = _fiber(3, 2, 2)
    towers = {t.d: t for t in SyntomicService.tower_decompose(c)}
    assert towers[1].weights == (1, 3)
    assert towers[1].truncation.a_max == 2
    assert towers[1].truncation.certified
    assert towers[1].truncation.valuation_sum >= c.N
    assert len(towers[1].truncation.tail_valuations) == c.N


def test_large_towers_are_short_circuited():
    p, e, i = 3, 2, 3
    c = _fiber(p, e, i)
    for tower in SyntomicService.tower_decompose(c):
        assert tower.short_circuited == (tower.d >= e * (i + 1))


def test_extra_positions_extend_live_towers_only():
    c = _fiber(3, 2, 2, Wmax=200)
    towers = {t.d: t for t in SyntomicService.tower_decompose(c, extra_positions=2)}
    assert towers[1].weights == (1, 3, 9, 27)
    assert towers[7].short_circuited


def test_window_too_small_for_certificate():
    c = _fiber(3, 2, 2, Wmax=4)
    with pytest.raises(CertificateFailure):
        SyntomicService.tower_decompose(c)


def test_neumann_inverse_check():
    assert SyntomicService.neumann_inverse_ok([1, 1, 1, 1], 3, 4)
    assert SyntomicService.neumann_inverse_ok([2, 5, 1], 5, 3)
    assert not SyntomicService.neumann_inverse_ok([0, 1, 1], 3, 3)


# ---------- closed form ----------

@pytest.mark.parametrize("p,i,expected", [
    (3, 1, [(1, 1)]),
    (3, 2, [(1, 2)]),
    (5, 3, [(1, 2), (3, 1)]),
    (3, 5, [(1, 3), (5, 1), (7, 1)]),
])
def test_closed_form_h1(p, i, expected):
    assert SyntomicService.closed_form_h1(p, i) == expected


def test_closed_form_only_for_dual_numbers_and_odd_p():
    with pytest.raises(Unsupported):
        SyntomicService.closed_form_h1(3, 2, e=3)
    with pytest.raises(Unsupported):
        SyntomicService.closed_form_h1(2, 2)


# ---------- zp_i ----------

@pytest.mark.parametrize("p,i,factors", [(3, 1, {1: [1]}), (3, 2, {1: [2]}), (5, 3, {1: [2], 3: [1]})])
def test_zp_i_small_cases(p, i, factors):
    result = SyntomicService.zp_i(p, 2, i)
    assert result.tower_map(1) == factors
    assert result.degree(0).towers == []
    assert result.degree(2).towers == []
    assert result.validated == "closed-form"
    assert not result.saturated


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("i", range(1, 5))
def test_zp_i_matches_closed_form(p, i):
    assert SyntomicService.zp_i(p, 2, i).validated == "closed-form"


@pytest.mark.slow
@pytest.mark.parametrize("f", [1, 2])
@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("i", range(1, 13))
def test_zp_i_matches_closed_form_full_sweep(p, i, f):
    result = SyntomicService.zp_i(p, 2, i, f)
    expected = {d: [n] for d, n in SyntomicService.closed_form_h1(p, i)}
    assert result.tower_map(1) == expected
    assert all(t.multiplicity == f for t in result.degree(1).towers)
    assert not result.degree(0).towers and not result.degree(2).towers


def test_even_towers_vanish_for_dual_numbers():
    result = SyntomicService.zp_i(3, 2, 6)
    for deg in range(3):
        assert all(t.d % 2 == 1 for t in result.degree(deg).towers)


def test_residue_degree_only_changes_multiplicity():
    over_fp = SyntomicService.zp_i(5, 2, 3, 1)
    over_f25 = SyntomicService.zp_i(5, 2, 3, 2)
    assert over_f25.tower_map(1) == over_fp.tower_map(1)
    assert {t.multiplicity for t in over_f25.degree(1).towers} == {2}


@pytest.mark.parametrize("p,i", [(3, 3), (5, 4)])
def test_stability_under_precision_window_and_truncation(p, i):
    base = SyntomicService.zp_i(p, 2, i)
    reference = base.to_document()["h"]
    assert SyntomicService.zp_i(p, 2, i, N0=base.precision + 2).to_document()["h"] == reference
    assert SyntomicService.zp_i(p, 2, i, wmax=2 * base.wmax).to_document()["h"] == reference
    assert SyntomicService.zp_i(p, 2, i, extra_positions=2).to_document()["h"] == reference


def test_precision_escalates_from_too_small_start():
    result = SyntomicService.zp_i(3, 2, 2, N0=1)
    assert result.runtime.escalations >= 1
    assert result.precision > 1
    assert result.tower_map(1) == {1: [2]}


def test_precision_ceiling_stops_escalation(monkeypatch):
    monkeypatch.setattr(settings, "SYNTOMIC_PRECISION_CEILING", 2)
    with pytest.raises(NonTermination):
        SyntomicService.zp_i(3, 2, 1, N0=auto_precision(3, 2, 1))


def test_point_case_is_flagged():
    result = SyntomicService.zp_i(3, 2, 0)
    assert result.point
    assert result.saturated
    N = result.precision
    assert result.tower_map(0) == {0: [N]}
    assert result.tower_map(1) == {0: [N]}


def test_general_e_is_marked_unvalidated():
    result = SyntomicService.zp_i(3, 3, 2)
    assert result.validated == "invariants-only"
    assert any("unvalidated" in note for note in result.notes)


def test_p_two_is_exploratory():
    result = SyntomicService.zp_i(2, 2, 2)
    assert result.validated == "invariants-only"
    assert any("p = 2" in note for note in result.notes)


def test_concurrent_towers_give_same_document():
    serial = SyntomicService.zp_i(5, 2, 4, jobs=1)
    threaded = asyncio.run(SyntomicService.zp_i_async(5, 2, 4, jobs=3))
    assert threaded.to_document() == serial.to_document()


def test_document_key_order():
    document = SyntomicService.zp_i(3, 2, 2).to_document()
    assert list(document)[:8] == ["p", "e", "i", "f", "precision", "h", "saturated", "validated"]
    assert document["h"][1]["towers"] == [{"d": 1, "factors": [2], "multiplicity": 1}]


def test_json_matches_document_and_drops_runtime():
    result = SyntomicService.zp_i(5, 2, 3)
    assert json.loads(result.to_json()) == result.to_document()
    assert not {"wmax", "notes", "runtime"} & set(result.to_document())


# ---------- oracles ----------

@pytest.mark.parametrize("p,e,i", [(3, 2, 1), (3, 2, 3), (5, 2, 2), (3, 3, 1), (3, 3, 2), (5, 3, 2)])
def test_dense_oracle_agrees(p, e, i):
    main = SyntomicService.zp_i(p, e, i)
    naive = SyntomicService.zp_i_naive(p, e, i, 1, main.precision)
    for deg in range(3):
        assert naive.group(deg).raw() == main.group(deg).raw()


@pytest.mark.slow
@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("e", [2, 3])
@pytest.mark.parametrize("i", range(1, 7))
def test_dense_oracle_agrees_full_grid(p, e, i):
    main = SyntomicService.zp_i(p, e, i)
    naive = SyntomicService.zp_i_naive(p, e, i, 1, main.precision)
    for deg in range(3):
        assert naive.group(deg).raw() == main.group(deg).raw()


def test_dense_oracle_point_case():
    naive = SyntomicService.zp_i_naive(3, 2, 0, 1, 4)
    assert naive.group(0).raw() == [4]
    assert naive.group(1).raw() == [4]


def test_dense_oracle_window_must_cover_unstable_weights():
    with pytest.raises(CertificateFailure):
        SyntomicService.zp_i_naive(3, 2, 3, 1, 4, Wmax=5)


@pytest.mark.parametrize("p,i,f", [(3, 1, 1), (3, 2, 1), (3, 3, 1), (5, 3, 1), (3, 2, 2)])
def test_dense_oracle_is_checked_against_closed_form(p, i, f, caplog):
    main = SyntomicService.zp_i(p, 2, i, f)
    with caplog.at_level(logging.WARNING):
        naive = SyntomicService.zp_i_naive(p, 2, i, f, main.precision)
    assert naive.validated == "closed-form"
    assert not caplog.records


def test_uniform_truncation_keeps_the_answer():
    main = SyntomicService.zp_i(3, 2, 2)
    # drops 9 and 18, both past the stable weight 6
    naive = SyntomicService.zp_i_naive(3, 2, 2, 1, main.precision, Wmax=20, A_uniform=1)
    assert naive.group(1).raw() == main.group(1).raw() == [2]
    assert naive.validated == "closed-form"


def test_uniform_truncation_must_drop_stable_weights_only():
    with pytest.raises(CertificateFailure):
        SyntomicService.zp_i_naive(3, 2, 2, 1, 5, Wmax=20, A_uniform=0)


# ---------- K-theory ----------

@pytest.mark.parametrize("p", [3, 5, 7])
def test_relative_k1_matches_units_of_dual_numbers(p):
    k1 = SyntomicService.relative_k_group(p, 1, 1)
    units = SyntomicService.dual_number_units(p, 1)
    assert k1.raw() == units.raw() == [1]


def test_dual_number_units_over_f9():
    units = SyntomicService.dual_number_units(3, 2)
    assert units.factors == (1,)
    assert units.multiplicity == 2


def test_relative_k_group_over_f25():
    group = SyntomicService.relative_k_group(5, 3, 2)
    assert group.factors == (1, 2)
    assert group.multiplicity == 2


def test_relative_k3_of_dual_numbers_over_f3():
    assert SyntomicService.relative_k_group(3, 2, 1).raw() == [2]


def test_k_groups_table():
    table = SyntomicService.k_groups(3, 1, 4)
    assert table[1].raw() == [1]
    assert table[2].is_zero
    assert table[3].raw() == [2]
    assert table[4].is_zero


def test_tower_matrices_live_over_the_working_precision():
    c = _fiber(3, 2, 2, N=5)
    for tower in SyntomicService.tower_decompose(c):
        if not tower.short_circuited:
            assert isinstance(tower.d0, PModMatrix)
            assert (tower.d0.p, tower.d0.N) == (3, 5)
