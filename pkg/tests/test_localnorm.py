"""
Unit tests for local norm indices.

Author: Mounia Tonazzini
Date: October 2026
"""

import pytest

from multinorm.abelian import FiniteAbelianGroup, SubgroupGens
from multinorm.exceptions import DimensionMismatchError, InsufficientDataError, ValidationError
from multinorm.localnorm import (
    LocalPlaceData,
    PlaceKind,
    global_local_factor,
    local_norm_index,
    local_unit_norm_index,
)

V4 = FiniteAbelianGroup((2, 2))
Z2 = FiniteAbelianGroup((2,))
Z4 = FiniteAbelianGroup((4,))


def two_ramified_quadratics(in_s: bool = False) -> LocalPlaceData:
    """Two ramified quadratic extensions of Q_l, l odd."""
    return LocalPlaceData(
        place_id="l",
        full_group=V4,
        decomposition_subgroups=(SubgroupGens(V4, ((1, 0),)), SubgroupGens(V4, ((0, 1),))),
        inertia_group=Z2,
        inertia_subgroups=(SubgroupGens(Z2), SubgroupGens(Z2)),
        in_s=in_s,
        ramified=True,
    )


def single_quadratic(in_s: bool = True) -> LocalPlaceData:
    return LocalPlaceData(
        place_id="q",
        full_group=Z2,
        decomposition_subgroups=(SubgroupGens(Z2),),
        in_s=in_s,
    )


# Test 1: Norm index at a finite place
def test_norm_index_two_ramified_quadratics():
    assert local_norm_index(two_ramified_quadratics()) == 1


def test_norm_index_single_quadratic():
    assert local_norm_index(single_quadratic()) == 2


# Test 2: Archimedean places
def test_norm_index_archimedean():
    assert local_norm_index(LocalPlaceData("c", kind=PlaceKind.COMPLEX)) == 1
    assert local_norm_index(LocalPlaceData("r", kind="real", real_local_degrees=(2, 1))) == 1
    assert local_norm_index(LocalPlaceData("r", kind="real", real_local_degrees=(2, 2))) == 2


def test_real_place_needs_degrees():
    with pytest.raises(InsufficientDataError):
        local_norm_index(LocalPlaceData("r", kind="real"))


# Test 3: Unit norm index
def test_unit_norm_index_two_ramified_quadratics():
    assert local_unit_norm_index(two_ramified_quadratics()) == 2


def test_unit_norm_index_with_an_unramified_place():
    d = LocalPlaceData(
        place_id="u",
        inertia_group=Z2,
        inertia_subgroups=(SubgroupGens(Z2, ((1,),)), SubgroupGens(Z2)),
    )
    assert local_unit_norm_index(d) == 1


def test_unit_norm_index_cyclic_of_order_four():
    d = LocalPlaceData(place_id="w", inertia_group=Z4, inertia_subgroups=(SubgroupGens(Z4, ((2,),)),))
    assert local_unit_norm_index(d) == 2


def test_unit_norm_index_errors():
    with pytest.raises(ValidationError):
        local_unit_norm_index(LocalPlaceData("c", kind="complex"))
    with pytest.raises(InsufficientDataError):
        local_unit_norm_index(single_quadratic())


def test_finite_place_needs_groups():
    with pytest.raises(InsufficientDataError):
        local_norm_index(LocalPlaceData("v"))


# Test 4: Place validation
def test_archimedean_place_cannot_be_ramified():
    with pytest.raises(ValidationError):
        LocalPlaceData("r", kind="real", real_local_degrees=(2,), ramified=True)


def test_unknown_kind():
    with pytest.raises(ValidationError):
        LocalPlaceData("x", kind="p-adic")


def test_subgroup_of_another_group():
    with pytest.raises(DimensionMismatchError):
        LocalPlaceData("v", full_group=Z4, decomposition_subgroups=(SubgroupGens(Z2),))
    with pytest.raises(DimensionMismatchError):
        LocalPlaceData("v", inertia_subgroups=(SubgroupGens(Z2),))


def test_one_inertia_subgroup_per_place_above():
    with pytest.raises(ValidationError):
        LocalPlaceData(
            "v",
            full_group=Z2,
            decomposition_subgroups=(SubgroupGens(Z2), SubgroupGens(Z2)),
            inertia_group=Z2,
            inertia_subgroups=(SubgroupGens(Z2),),
        )


def test_inertia_group_without_subgroups_is_rejected():
    with pytest.raises(ValidationError, match="2 H_w but 0 J_w"):
        LocalPlaceData(
            "v",
            full_group=V4,
            decomposition_subgroups=(SubgroupGens(V4, ((1, 0),)), SubgroupGens(V4, ((0, 1),))),
            inertia_group=Z2,
        )


def test_place_without_inertia_data_is_accepted():
    d = LocalPlaceData("v", full_group=V4, decomposition_subgroups=(SubgroupGens(V4, ((1, 0),)), SubgroupGens(V4)))
    assert local_norm_index(d) == 2
    with pytest.raises(InsufficientDataError):
        local_unit_norm_index(d)


def test_real_local_degree_is_one_or_two():
    with pytest.raises(ValidationError):
        LocalPlaceData("r", kind="real", real_local_degrees=(3,))


# Test 5: Global product
def test_global_local_factor():
    assert global_local_factor([]) == 1
    assert global_local_factor([two_ramified_quadratics()]) == 2
    assert global_local_factor([single_quadratic(), two_ramified_quadratics()]) == 4
    # In S, the full norm index is used instead of the unit index.
    assert global_local_factor([two_ramified_quadratics(in_s=True)]) == 1


def test_unramified_place_outside_s_contributes_nothing():
    assert global_local_factor([single_quadratic(in_s=False)]) == 1
