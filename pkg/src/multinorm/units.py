"""
Global unit norm indices [O_{k,S}^x : N(O_{L,S}^x)].

This module handles:
- Fundamental solutions of Pell equations by continued fractions
- The norm sign of the fundamental unit of a real quadratic field
- The index over Q (1 or 2) from degrees and norm signs
- The general index as torsion index x |F_k / N(F_L)|

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Sequence
import logging

from sympy import factorint, integer_nthroot
from sympy.ntheory.continued_fraction import continued_fraction_convergents, continued_fraction_periodic

from multinorm.abelian import FiniteAbelianGroup, group_from_presentation
from multinorm.exceptions import InsufficientDataError, ValidationError
from multinorm.utils import validate_positive_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PellSolution:
    """
    Minimal positive solution of x^2 - d y^2 = +-1.

    Attributes:
        - d (int): Non-square integer >= 2.
        - x, y (int): The solution.
        - norm_sign (int): x^2 - d y^2, -1 exactly when the period is odd.
        - period (int): Length of the period of the continued fraction of sqrt(d).
    """

    d: int
    x: int
    y: int
    norm_sign: int
    period: int

    def __str__(self) -> str:
        return f"x={self.x} y={self.y} norm={self.norm_sign:+d}"


@dataclass(frozen=True)
class FieldUnitData:
    """
    One factor K_i of L over Q.

    Attributes:
        - degree (int): [K_i : Q].
        - norm_sign (int | None): -1 if -1 is the norm of a unit of K_i (for a real
          quadratic field: the norm of its fundamental unit), +1 if not, None if unknown.
    """

    degree: int
    norm_sign: int | None = None

    def __post_init__(self):
        validate_positive_int(self.degree, "degree")
        if self.norm_sign not in (None, 1, -1):
            raise ValidationError(f"norm_sign must be +1, -1 or unknown (provided: {self.norm_sign})")


@dataclass(frozen=True)
class FreePartData:
    """
    Generators of E_L, the image of N(F_L) in F_k / F_k^d = (Z/d)^rank.

    Attributes:
        - rank (int): Rank of the free part F_k of the S-units of k.
        - norm_images (tuple[tuple[int, ...], ...]): Coordinates of the generators.
    """

    rank: int
    norm_images: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class UnitIndexInput:
    """
    Data for the general unit norm index.

    Attributes:
        - torsion_index (int): [mu_k : N(mu_L)].
        - degrees (tuple[int, ...]): [K_i : k].
        - free_part_data (FreePartData | None): Optional generators of E_L.
    """

    torsion_index: int
    degrees: tuple[int, ...]
    free_part_data: FreePartData | None = None

    def __post_init__(self):
        validate_positive_int(self.torsion_index, "torsion_index")
        object.__setattr__(self, "degrees", tuple(validate_positive_int(g, "degree") for g in self.degrees))


def pell_fundamental(d: int) -> PellSolution:
    """
    Computes the minimal positive solution of x^2 - d y^2 = +-1.

    The solution is the last convergent before the end of the first period
    of the continued fraction of sqrt(d).

    Args:
        d (int): Non-square integer >= 2.

    Returns:
        PellSolution: x, y, the norm sign and the period length.

    Raises:
        ValidationError: if d < 2 or d is a square.
    """

    d = validate_positive_int(d, "d", minimum=2)
    _, exact = integer_nthroot(d, 2)
    if exact:
        raise ValidationError(f"d must not be a perfect square (provided: {d})")

    a0, period = continued_fraction_periodic(0, 1, d)
    terms = [a0] + list(period[:-1])
    convergent = list(continued_fraction_convergents(terms))[-1]
    x, y = int(convergent.p), int(convergent.q)
    norm_sign = x * x - d * y * y

    if norm_sign not in (1, -1) or (norm_sign == -1) != (len(period) % 2 == 1):
        raise ValidationError(f"Continued fraction of sqrt({d}) did not give a Pell solution")

    logger.info(f"Pell d={d}: x={x}, y={y}, norm {norm_sign:+d}, period {len(period)}")
    return PellSolution(d=d, x=x, y=y, norm_sign=norm_sign, period=len(period))


def squarefree_kernel(d: int) -> int:
    """Squarefree part of a positive integer (Q(sqrt(d)) = Q(sqrt(kernel)))."""
    d = validate_positive_int(d, "d")
    kernel = 1
    for p, e in factorint(d).items():
        if e % 2:
            kernel *= int(p)
    return kernel


def field_norm_sign(d: int) -> int:
    """
    Norm of the fundamental unit of Q(sqrt(d)).

    The fundamental unit eps may be half-integral, but eps^3 always lies in
    Z[sqrt(d)] and has the same norm, so the sign is read off the Pell
    solution for the squarefree kernel of d.

    Raises:
        ValidationError: if Q(sqrt(d)) is not a real quadratic field.
    """

    kernel = squarefree_kernel(d)
    if kernel == 1:
        raise ValidationError(f"Q(sqrt({d})) is not a quadratic field")
    return pell_fundamental(kernel).norm_sign


def unit_norm_index_over_Q(fields: Sequence[FieldUnitData | tuple[int, int | None]]) -> int:
    """
    [Z^x : N(O_L^x)] for L = K_1 x ... x K_r over Q, S = {infinity}.

    The index is 1 as soon as some degree is odd or -1 is the norm of a unit
    of some K_i, and 2 otherwise.

    Args:
        fields: FieldUnitData or (degree, norm_sign) pairs.

    Raises:
        - ValidationError: if no field is given.
        - InsufficientDataError: if all degrees are even, no sign is -1 and some sign is unknown.
    """

    data = [f if isinstance(f, FieldUnitData) else FieldUnitData(*f) for f in fields]
    if not data:
        raise ValidationError("At least one field is needed")

    if any(f.degree % 2 == 1 for f in data):
        return 1
    if any(f.norm_sign == -1 for f in data):
        return 1
    if all(f.norm_sign == 1 for f in data):
        return 2
    raise InsufficientDataError("All degrees are even: the norm sign of every factor is needed")


def gcd_degree(degrees: Sequence[int]) -> int:
    """
    Greatest common divisor of the degrees [K_i : k].

    Raises:
        ValidationError: if the list is empty.
    """

    if not degrees:
        raise ValidationError("gcd_degree needs at least one degree")
    return reduce(gcd, (validate_positive_int(g, "degree") for g in degrees))


def free_quotient_from_generators(rank: int, d: int, norm_images: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """
    Computes (F_k / F_k^d) / E_L, where F_k / F_k^d = (Z/d)^rank.

    Raises:
        DimensionMismatchError: if a generator does not have `rank` coordinates.
    """

    rank = validate_positive_int(rank, "rank", minimum=0)
    d = validate_positive_int(d, "d")
    relations = [[d if j == i else 0 for j in range(rank)] for i in range(rank)]
    relations.extend(list(g) for g in norm_images)
    return group_from_presentation(rank, relations)


def unit_norm_index_general(inp: UnitIndexInput, free_quotient: FiniteAbelianGroup | None = None) -> int:
    """
    [O_{k,S}^x : N(O_{L,S}^x)] = [mu_k : N(mu_L)] x |F_k / N(F_L)|.

    Args:
        - inp (UnitIndexInput): Torsion index, degrees, optional generators of E_L.
        - free_quotient (FiniteAbelianGroup, optional): F_k / N(F_L) when known. Otherwise it
          is computed from inp.free_part_data, or is trivial when gcd of the degrees is 1.

    Raises:
        - InsufficientDataError: if the free quotient cannot be determined.
        - ValidationError: if the exponent of the free quotient does not divide d.
    """

    d = gcd_degree(inp.degrees)
    if free_quotient is None:
        if inp.free_part_data is not None:
            free = inp.free_part_data
            free_quotient = free_quotient_from_generators(free.rank, d, free.norm_images)
        elif d == 1:
            free_quotient = FiniteAbelianGroup.trivial()
        else:
            raise InsufficientDataError(f"d = {d}: supply F_k/N(F_L) or the generators of E_L")

    if d % free_quotient.exponent != 0:
        raise ValidationError(
            f"F_k/N(F_L) = {free_quotient} is not a quotient of F_k/F_k^{d}: its exponent must divide {d}"
        )
    return inp.torsion_index * free_quotient.order
