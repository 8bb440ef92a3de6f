"""
Unit tests for the Ono invariants and the class number relations.

Author: Mounia Tonazzini
Date: October 2026
"""

import logging
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from multinorm.abelian import FiniteAbelianGroup, SubgroupGens
from multinorm.exceptions import (
    InsufficientDataError,
    MissingDegreeZeroDataError,
    MissingNarrowDataError,
    NonIntegralClassNumberError,
    ValidationError,
)
from multinorm.localnorm import LocalPlaceData
from multinorm.ono import (
    ClassNumberContext,
    IdealFormContext,
    check_narrow_quadratic_identity,
    coker_phi0_order,
    eval_cm_case,
    eval_E0,
    eval_ES,
    eval_ES_plus,
    eval_hS_ideal_form,
    eval_refined_E0,
    eval_refined_ES,
    eval_refined_ES_plus,
    eval_torus_class_number,
    q_phi0,
    residue_norm_index,
)

V4 = FiniteAbelianGroup((2, 2))
Z2 = FiniteAbelianGroup((2,))


def two_ramified_quadratics() -> LocalPlaceData:
    return LocalPlaceData(
        place_id="l",
        full_group=V4,
        decomposition_subgroups=(SubgroupGens(V4, ((1, 0),)), SubgroupGens(V4, ((0, 1),))),
        inertia_group=Z2,
        inertia_subgroups=(SubgroupGens(Z2), SubgroupGens(Z2)),
        ramified=True,
    )


def quadratic_in_s() -> LocalPlaceData:
    return LocalPlaceData(place_id="q", full_group=Z2, decomposition_subgroups=(SubgroupGens(Z2),), in_s=True)


# Test 1: E_S
def test_eval_ES_gaussian_shape():
    result = eval_ES(ClassNumberContext(hS_L=1, hS_k=1, sha_order=1, Lab_index=2, adelic_unit_index=2))
    assert result.value == 1
    assert result.class_number == 1


def test_eval_ES_split_torus():
    assert eval_ES(ClassNumberContext(hS_L=1, hS_k=1)).value == 1


def test_eval_ES_agrees_with_ideal_form():
    ctx = ClassNumberContext(hS_L=1, hS_k=1, sha_order=1, Lab_index=2, unit_index=2, adelic_unit_index=4)
    result = eval_ES(ctx)
    assert result.value == 1
    ideal = eval_hS_ideal_form(IdealFormContext(I1_over_P1=2, unit_meet_index=1, adelic_meet_index=2))
    assert ideal == result.class_number


def test_eval_ES_non_integral():
    with pytest.raises(NonIntegralClassNumberError):
        eval_ES(ClassNumberContext(hS_L=1, hS_k=1, sha_order=2))


# Test 2: E_S^+
def test_eval_ES_plus_matches_plain_when_q_phi_is_one():
    plain = dict(hS_L=3, hS_k=1, sha_order=1, Lab_index=2, unit_index=1, adelic_unit_index=2)
    ctx = ClassNumberContext(**plain, hS_plus_L=3, hS_plus_k=1, q_phi=1, unit_index_plus=1)
    assert eval_ES_plus(ctx) == eval_ES(ctx)


def test_eval_ES_plus_value():
    ctx = ClassNumberContext(hS_L=1, hS_k=1, Lab_index=2, adelic_unit_index=2,
                             hS_plus_L=1, hS_plus_k=1, q_phi="1", unit_index_plus=1)
    assert eval_ES_plus(ctx).value == 1


def test_eval_ES_plus_needs_narrow_inputs():
    with pytest.raises(MissingNarrowDataError):
        eval_ES_plus(ClassNumberContext(hS_L=1, hS_k=1, hS_plus_L=1))


def test_narrow_quadratic_identity():
    assert check_narrow_quadratic_identity(2, 1, 2)
    assert check_narrow_quadratic_identity(1, 1, 1)
    assert not check_narrow_quadratic_identity(2, 1, 1)


# Test 3: E^0
def test_eval_E0_trivial():
    ctx = ClassNumberContext(hS_L=1, hS_k=1, h0_L=1, h0_k=1, q_phi0=1, Uk_index=1, residue_norm_index=1)
    assert eval_E0(ctx).value == 1


def test_eval_E0_arithmetic():
    ctx = ClassNumberContext(hS_L=1, hS_k=1, h0_L=2, h0_k=1, q_phi0=2, Uk_index=2, residue_norm_index=2)
    result = eval_E0(ctx)
    assert result.value == 2
    assert result.class_number == 1


def test_eval_E0_recomputes_residue_index():
    base = dict(hS_L=1, hS_k=1, h0_L=1, h0_k=1, q_phi0=1, Uk_index=1,
                constant_field_size=4, residue_fields=[(16, 4)])
    assert eval_E0(ClassNumberContext(**base)).value == 1
    assert eval_E0(ClassNumberContext(**base, residue_norm_index=1)).value == 1
    with pytest.raises(ValidationError):
        eval_E0(ClassNumberContext(**base, residue_norm_index=3))


def test_eval_E0_needs_degree_zero_inputs():
    with pytest.raises(MissingDegreeZeroDataError):
        eval_E0(ClassNumberContext(hS_L=1, hS_k=1, h0_L=1))
    with pytest.raises(MissingDegreeZeroDataError):
        eval_E0(ClassNumberContext(hS_L=1, hS_k=1, h0_L=1, h0_k=1, q_phi0=1, Uk_index=1))


# Test 4: Residue norm index
def test_residue_norm_index_example():
    assert residue_norm_index(4, [(16, 4)]) == 1
    assert residue_norm_index(7, [(7, 3)]) == 3
    assert residue_norm_index(7, [(7, 3), (49, 2)]) == 1


def _residue_index_by_enumeration(q, residue_fields):
    # F_q^x is cyclic of order q - 1 and every residue norm is onto.
    image = {0}
    for q_i, degree in residue_fields:
        f_i = 1
        while q ** f_i < q_i:
            f_i += 1
        step = degree // f_i
        image |= {(t * step) % (q - 1) for t in range(q - 1)}
        closure = set(image)
        for a in image:
            for b in image:
                closure.add((a + b) % (q - 1))
        image = closure
    return (q - 1) // len(image) if q > 2 else 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 13])
def test_residue_norm_index_matches_enumeration(q):
    rng = random.Random(q)
    for _ in range(30):
        residue_fields = []
        for _ in range(rng.randint(1, 3)):
            f_i = rng.randint(1, 3)
            residue_fields.append((q ** f_i, f_i * rng.randint(1, 6)))
        assert residue_norm_index(q, residue_fields) == _residue_index_by_enumeration(q, residue_fields)


def test_residue_norm_index_errors():
    with pytest.raises(ValidationError):
        residue_norm_index(4, [(10, 2)])
    with pytest.raises(ValidationError):
        residue_norm_index(4, [(16, 3)])
    with pytest.raises(ValidationError):
        residue_norm_index(4, [])


def test_q_phi0_helpers():
    assert coker_phi0_order(3) == 3
    assert q_phi0(2, 1) == 2
    assert q_phi0(1, 4) == Fraction(1, 4)


# Test 5: Torus class number and Tamagawa number
def test_eval_torus_class_number():
    result = eval_torus_class_number(ClassNumberContext(hS_L=1, hS_k=1, Lab_index=2, adelic_unit_index=2))
    assert result.class_number == 1
    assert result.tamagawa == 2


def test_eval_torus_class_number_cancels():
    ctx = ClassNumberContext(hS_L=5, hS_k=5, sha_order=3, Lab_index=3, unit_index=2, adelic_unit_index=2)
    assert eval_torus_class_number(ctx).class_number == 1


def test_eval_torus_class_number_non_integral():
    with pytest.raises(NonIntegralClassNumberError):
        eval_torus_class_number(ClassNumberContext(hS_L=1, hS_k=1, sha_order=3))


BIG_PRIME = 101


def _consistent_context(rng):
    indices = {name: rng.randint(1, 12) for name in ("sha_order", "Lab_index", "unit_index", "adelic_unit_index")}
    hS_k = rng.randint(1, 6)
    e_s = Fraction(indices["sha_order"] * indices["adelic_unit_index"], indices["Lab_index"] * indices["unit_index"])
    h_t = rng.randint(1, 20) * (hS_k * e_s).denominator
    hS_L = h_t * hS_k * e_s
    return ClassNumberContext(hS_L=hS_L.numerator, hS_k=hS_k, **indices), h_t


def test_torus_class_number_times_ES_is_the_class_number_quotient():
    rng = random.Random(17)
    for _ in range(200):
        ctx, h_t = _consistent_context(rng)
        torus = eval_torus_class_number(ctx)
        e_s = eval_ES(ctx)
        assert torus.class_number == e_s.class_number == h_t
        assert torus.class_number * e_s.value == Fraction(ctx.hS_L, ctx.hS_k)
        assert torus.tamagawa == Fraction(ctx.Lab_index, ctx.sha_order)


def test_inconsistent_contexts_are_rejected():
    rng = random.Random(18)
    for _ in range(200):
        ctx, _ = _consistent_context(rng)
        corrupted = replace(ctx, sha_order=ctx.sha_order * BIG_PRIME)
        with pytest.raises(NonIntegralClassNumberError):
            eval_torus_class_number(corrupted)
        with pytest.raises(NonIntegralClassNumberError):
            eval_ES(corrupted)


def test_torus_class_number_matches_cm_case():
    torus = eval_torus_class_number(ClassNumberContext(hS_L=1, hS_k=1))
    assert Fraction(torus.class_number) == eval_cm_case(1, 1, 1, 1).value


# Test 6: CM extensions
@pytest.mark.parametrize("args, value", [((1, 1, 1, 1), Fraction(1)), ((2, 1, 1, 2), Fraction(1))])
def test_eval_cm_case(args, value):
    result = eval_cm_case(*args)
    assert result.value == value
    assert result.integral


def test_eval_cm_case_non_integral(caplog):
    with caplog.at_level(logging.WARNING, logger="multinorm.ono"):
        result = eval_cm_case(1, 1, 2, 1)
    assert result.value == Fraction(1, 2)
    assert not result.integral
    assert "not an integer" in caplog.text


# Test 7: Ideal-theoretic expression
@pytest.mark.parametrize("args, expected", [((1, 1, 1), 1), ((4, 2, 2), 4)])
def test_eval_hS_ideal_form(args, expected):
    assert eval_hS_ideal_form(IdealFormContext(*args)) == expected


def test_eval_hS_ideal_form_non_integral():
    with pytest.raises(NonIntegralClassNumberError):
        eval_hS_ideal_form(IdealFormContext(1, 1, 2))


# Test 8: Context validation
def test_context_validation():
    assert ClassNumberContext(hS_L=1, hS_k=1, q_phi="3/2").q_phi == Fraction(3, 2)
    with pytest.raises(ValidationError):
        ClassNumberContext(hS_L=0, hS_k=1)
    with pytest.raises(ValidationError):
        ClassNumberContext(hS_L=1, hS_k=1, q_phi="abc")
    with pytest.raises(ValidationError):
        ClassNumberContext(hS_L=1, hS_k=1, constant_field_size=1)


@pytest.mark.parametrize("residue_fields", [3, [16, 4], [(16, 4, 1)]])
def test_residue_fields_are_pairs(residue_fields):
    with pytest.raises(ValidationError):
        ClassNumberContext(hS_L=1, hS_k=1, constant_field_size=4, residue_fields=residue_fields)


# Test 9: Refined formulas from local data
def test_eval_refined_ES():
    assert eval_refined_ES([quadratic_in_s()], unit_index=1, lab_index=1) == 2
    assert eval_refined_ES([quadratic_in_s()], unit_index=1, lab_index=2) == 1
    assert eval_refined_ES([two_ramified_quadratics()], unit_index=1, lab_index=1) == 2


def test_eval_refined_ES_with_family_and_sha(first_family):
    sha = FiniteAbelianGroup((3, 3, 3))
    assert eval_refined_ES([], unit_index=1, sha=sha, family=first_family) == 27


def test_eval_refined_ES_needs_lab():
    with pytest.raises(InsufficientDataError):
        eval_refined_ES([], unit_index=1)


def test_eval_refined_ES_plus():
    value = eval_refined_ES_plus([quadratic_in_s()], unit_index_plus=1, q_phi="2", lab_index=1)
    assert value == 1


def test_eval_refined_E0():
    value = eval_refined_E0([two_ramified_quadratics()], q_phi0=1, residue_index=2, lab_index=1)
    assert value == 1
    assert eval_refined_E0([], q_phi0="1/2", residue_index=1, lab_index=1) == Fraction(1, 2)
