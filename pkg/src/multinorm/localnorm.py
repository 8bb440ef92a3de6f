"""
Local norm indices from group-theoretic local data.

At a finite place v, the compositum of the maximal abelian subextensions of
the L_w (w | v) has Galois group G_v over k_v, and each L_w cuts out a
subgroup H_w. The norm index [k_v^x : N(L_v^x)] is the degree of the
intersection of the abelian parts, i.e. the index of the join of the H_w.
The unit norm index is read the same way inside the inertia group.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass
from enum import Enum
from math import prod
from typing import Sequence
import logging

from multinorm.abelian import FiniteAbelianGroup, SubgroupGens, join_index
from multinorm.exceptions import DimensionMismatchError, InsufficientDataError, ValidationError

logger = logging.getLogger(__name__)


class PlaceKind(str, Enum):
    FINITE = "finite"
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class LocalPlaceData:
    """
    Local data at a place v of k.

    Attributes:
        - place_id (str): Label of the place.
        - kind (PlaceKind): finite, real or complex.
        - full_group (FiniteAbelianGroup | None): Gal of the compositum of the abelian parts over k_v.
        - decomposition_subgroups (tuple[SubgroupGens, ...]): One H_w per place w | v.
        - inertia_group (FiniteAbelianGroup | None): Inertia subgroup of the same compositum.
        - inertia_subgroups (tuple[SubgroupGens, ...]): One J_w per place w | v.
        - real_local_degrees (tuple[int, ...]): [L_w : R] for each w | v (real places only).
        - in_s (bool): v belongs to S.
        - ramified (bool): no w | v is unramified (v in R(L/k)).
    """

    place_id: str
    kind: PlaceKind = PlaceKind.FINITE
    full_group: FiniteAbelianGroup | None = None
    decomposition_subgroups: tuple[SubgroupGens, ...] = ()
    inertia_group: FiniteAbelianGroup | None = None
    inertia_subgroups: tuple[SubgroupGens, ...] = ()
    real_local_degrees: tuple[int, ...] = ()
    in_s: bool = False
    ramified: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", PlaceKind(self.kind))
        except ValueError as e:
            raise ValidationError(f"Place {self.place_id}: unknown kind '{self.kind}'") from e
        object.__setattr__(self, "decomposition_subgroups", tuple(self.decomposition_subgroups))
        object.__setattr__(self, "inertia_subgroups", tuple(self.inertia_subgroups))
        object.__setattr__(self, "real_local_degrees", tuple(self.real_local_degrees))

        if self.kind is not PlaceKind.FINITE and self.ramified:
            raise ValidationError(f"Place {self.place_id}: an archimedean place cannot be in R(L/k)")

        for sub in self.decomposition_subgroups:
            if self.full_group is None or sub.ambient != self.full_group:
                raise DimensionMismatchError(f"Place {self.place_id}: H_w does not live in the full group")
        for sub in self.inertia_subgroups:
            if self.inertia_group is None or sub.ambient != self.inertia_group:
                raise DimensionMismatchError(f"Place {self.place_id}: J_w does not live in the inertia group")
        # Once inertia data is given next to the H_w, it must list one J_w per w | v
        has_inertia = self.inertia_group is not None or bool(self.inertia_subgroups)
        if self.decomposition_subgroups and has_inertia:
            if len(self.decomposition_subgroups) != len(self.inertia_subgroups):
                raise ValidationError(
                    f"Place {self.place_id}: {len(self.decomposition_subgroups)} H_w but "
                    f"{len(self.inertia_subgroups)} J_w, expected one of each per w | v"
                )

        for degree in self.real_local_degrees:
            if degree not in (1, 2):
                raise ValidationError(f"Place {self.place_id}: a local degree over R is 1 or 2, got {degree}")


def local_norm_index(d: LocalPlaceData) -> int:
    """
    Computes [k_v^x : N(L_v^x)].

    - finite: [G_v : <H_w, w | v>]
    - real: 1 if some w | v is real, 2 if all are complex
    - complex: 1

    Raises:
        InsufficientDataError: if the group data needed for the place kind is missing.
    """

    if d.kind is PlaceKind.COMPLEX:
        return 1

    if d.kind is PlaceKind.REAL:
        if not d.real_local_degrees:
            raise InsufficientDataError(f"Place {d.place_id}: real_local_degrees are needed")
        return 1 if 1 in d.real_local_degrees else 2

    if d.full_group is None or not d.decomposition_subgroups:
        raise InsufficientDataError(f"Place {d.place_id}: full group and one H_w per w | v are needed")
    index = join_index(d.full_group, d.decomposition_subgroups)
    logger.info(f"Place {d.place_id}: local norm index {index}")
    return index


def local_unit_norm_index(d: LocalPlaceData) -> int:
    """
    Computes [O_v^x : N(O_{L_v}^x)] = e_v(L/k) as [I_v : <J_w, w | v>].

    Raises:
        - ValidationError: if the place is archimedean.
        - InsufficientDataError: if the inertia data is missing.
    """

    if d.kind is not PlaceKind.FINITE:
        raise ValidationError(f"Place {d.place_id}: unit norm indices are defined at finite places")
    if d.inertia_group is None or not d.inertia_subgroups:
        raise InsufficientDataError(f"Place {d.place_id}: inertia group and one J_w per w | v are needed")

    index = join_index(d.inertia_group, d.inertia_subgroups)
    logger.info(f"Place {d.place_id}: unit norm index {index}")
    return index


def global_local_factor(places: Sequence[LocalPlaceData]) -> int:
    """
    Product of the local norm indices over S and of the unit norm indices
    over the everywhere-ramified places outside S.

    Places that are neither in S nor ramified contribute 1.
    """

    factors = []
    for d in places:
        if d.in_s:
            factors.append(local_norm_index(d))
        elif d.ramified:
            factors.append(local_unit_norm_index(d))
    return prod(factors)
