"""
Ono invariants and class numbers of multinorm-one tori.

The formulas relate class numbers of L, k and T_{L/k} to Sha(L/k), the
degree [L_ab:k] and norm indices. Class numbers and q-symbols are inputs:
the module evaluates the relations exactly (fractions.Fraction) and checks
that every implied class number is a positive integer.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass, field, fields
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence
import logging

from multinorm.abelian import FiniteAbelianGroup
from multinorm.exceptions import (
    InsufficientDataError,
    MissingDegreeZeroDataError,
    MissingNarrowDataError,
    NonIntegralClassNumberError,
    ValidationError,
)
from multinorm.kummer import KummerFamily, lab_degree
from multinorm.localnorm import LocalPlaceData, global_local_factor, local_unit_norm_index
from multinorm.utils import format_rational, parse_rational, validate_positive_int

logger = logging.getLogger(__name__)

NARROW_FIELDS = ("hS_plus_L", "hS_plus_k", "q_phi", "unit_index_plus")
DEGREE_ZERO_FIELDS = ("h0_L", "h0_k", "q_phi0", "Uk_index")


@dataclass(frozen=True)
class ClassNumberContext:
    """
    Inputs of the class number formulas.

    Attributes:
        - hS_L, hS_k (int): S-class numbers of L and k.
        - sha_order (int): |Sha(L/k)|.
        - Lab_index (int): [L_ab : k].
        - unit_index (int): [O_{k,S}^x : N(O_{L,S}^x)].
        - adelic_unit_index (int): [U_{k,S} : N(U_{L,S})].
        - hS_plus_L, hS_plus_k, unit_index_plus (int | None), q_phi (Fraction | None): Narrow inputs.
        - h0_L, h0_k, Uk_index (int | None), q_phi0 (Fraction | None): Degree-zero inputs (function fields, S empty).
        - residue_norm_index (int | None): [F_q^x : N(prod F_{q_i}^x)].
        - constant_field_size (int | None), residue_fields (tuple[tuple[int, int], ...]):
          q and the pairs (q_i, [K_i:k]) used to recompute residue_norm_index.
    """

    hS_L: int
    hS_k: int
    sha_order: int = 1
    Lab_index: int = 1
    unit_index: int = 1
    adelic_unit_index: int = 1
    hS_plus_L: int | None = None
    hS_plus_k: int | None = None
    q_phi: Fraction | None = None
    unit_index_plus: int | None = None
    h0_L: int | None = None
    h0_k: int | None = None
    q_phi0: Fraction | None = None
    Uk_index: int | None = None
    residue_norm_index: int | None = None
    constant_field_size: int | None = None
    residue_fields: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or f.name == "residue_fields":
                continue
            if f.name in ("q_phi", "q_phi0"):
                object.__setattr__(self, f.name, parse_rational(value, f.name))
            elif f.name == "constant_field_size":
                validate_positive_int(value, f.name, minimum=2)
            else:
                validate_positive_int(value, f.name)
        try:
            pairs = tuple(tuple(pair) for pair in self.residue_fields)
        except TypeError as e:
            raise ValidationError("residue_fields must be pairs (q_i, [K_i:k])") from e
        if any(len(pair) != 2 for pair in pairs):
            raise ValidationError("residue_fields must be pairs (q_i, [K_i:k])")
        object.__setattr__(self, "residue_fields", pairs)


@dataclass(frozen=True)
class IdealFormContext:
    """
    Inputs of the ideal-theoretic expression of h_S(T_{L/k}).

    Attributes:
        - I1_over_P1 (int): [I_{L,S}^(1) : P_{L,S}^(1)].
        - unit_meet_index (int): [O_{k,S}^x cap N(L^x) : N(O_{L,S}^x)].
        - adelic_meet_index (int): [U_{k,S} cap N(A_L^x) : N(U_{L,S})].
    """

    I1_over_P1: int
    unit_meet_index: int
    adelic_meet_index: int

    def __post_init__(self):
        for f in fields(self):
            validate_positive_int(getattr(self, f.name), f.name)


@dataclass(frozen=True)
class OnoResult:
    """An Ono invariant and the torus class number it implies."""

    value: Fraction
    class_number: int


@dataclass(frozen=True)
class TorusClassNumber:
    """h(T_{L/k}) and the Tamagawa number tau(T_{L/k}) = [L_ab:k] / |Sha(L/k)|."""

    class_number: int
    tamagawa: Fraction


@dataclass(frozen=True)
class CMResult:
    value: Fraction
    integral: bool


def _implied_class_number(numerator: int, denominator: int, invariant: Fraction, what: str) -> int:
    implied = Fraction(numerator, denominator) / invariant
    if implied.denominator != 1 or implied <= 0:
        raise NonIntegralClassNumberError(
            f"Implied {what} = {format_rational(implied)} is not a positive integer: inputs are inconsistent"
        )
    return implied.numerator


def _require(ctx, names: Sequence[str], error: type[ValidationError], what: str) -> None:
    missing = [name for name in names if getattr(ctx, name) is None]
    if missing:
        raise error(f"{what} needs {', '.join(missing)}")


def eval_ES(ctx: ClassNumberContext) -> OnoResult:
    """
    E_S(L/k) = |Sha| / [L_ab:k] * [U_{k,S} : N(U_{L,S})] / [O_{k,S}^x : N(O_{L,S}^x)].

    Returns:
        OnoResult: E_S and the implied h_S(T) = h_S(L) / (h_S(k) E_S).

    Raises:
        NonIntegralClassNumberError: if h_S(T) is not a positive integer.
    """

    value = Fraction(ctx.sha_order, ctx.Lab_index) * Fraction(ctx.adelic_unit_index, ctx.unit_index)
    class_number = _implied_class_number(ctx.hS_L, ctx.hS_k, value, "h_S(T)")
    logger.info(f"E_S = {format_rational(value)}, h_S(T) = {class_number}")
    return OnoResult(value, class_number)


def eval_ES_plus(ctx: ClassNumberContext) -> OnoResult:
    """
    E_S^+(L/k) = |Sha| / ([L_ab:k] q(phi)) * [U_{k,S} : N(U_{L,S})] / [O_{k,S}^{x+} : N(O_{L,S}^{x+})].

    Raises:
        - MissingNarrowDataError: if a narrow input is missing.
        - NonIntegralClassNumberError: if the implied narrow class number of T is not a positive integer.
    """

    _require(ctx, NARROW_FIELDS, MissingNarrowDataError, "E_S^+")
    value = (
        Fraction(ctx.sha_order, ctx.Lab_index) / ctx.q_phi
        * Fraction(ctx.adelic_unit_index, ctx.unit_index_plus)
    )
    class_number = _implied_class_number(ctx.hS_plus_L, ctx.hS_plus_k, value, "h_S^+(T)")
    logger.info(f"E_S^+ = {format_rational(value)}, h_S^+(T) = {class_number}")
    return OnoResult(value, class_number)


def residue_norm_index(q: int, residue_fields: Sequence[tuple[int, int]]) -> int:
    """
    Computes [F_q^x : N(prod F_{q_i}^x)].

    On F_{q_i}^x the norm of K_i/k is the residue norm (onto F_q^x) raised to
    the power [K_i:k] / [F_{q_i}:F_q], so the image is the subgroup of g-th
    powers with g = gcd of those exponents, of index gcd(q - 1, g).

    Args:
        - q (int): Size of the constant field of k.
        - residue_fields: Pairs (q_i, [K_i:k]), q_i the size of the constant field of K_i.

    Raises:
        ValidationError: if some q_i is not a power of q or its degree does not divide [K_i:k].
    """

    q = validate_positive_int(q, "q", minimum=2)
    if not residue_fields:
        raise ValidationError("At least one residue field is needed")

    exponents = []
    for q_i, degree in residue_fields:
        q_i = validate_positive_int(q_i, "q_i", minimum=2)
        degree = validate_positive_int(degree, "[K_i:k]")
        f_i, size = 1, q
        while size < q_i:
            size *= q
            f_i += 1
        if size != q_i:
            raise ValidationError(f"{q_i} is not a power of {q}")
        if degree % f_i != 0:
            raise ValidationError(f"[F_{q_i}:F_{q}] = {f_i} does not divide [K_i:k] = {degree}")
        exponents.append(degree // f_i)

    return gcd(q - 1, reduce(gcd, exponents))


def coker_phi0_order(deg_generator: int) -> int:
    """|coker phi^0| = [Z : deg_k(N(A_L^x))], given the positive generator of that image."""
    return validate_positive_int(deg_generator, "deg_generator")


def q_phi0(coker_order: int, kernel_order: int) -> Fraction:
    """q(phi^0) = |coker phi^0| / |ker phi^0|."""
    return Fraction(
        validate_positive_int(coker_order, "coker_order"),
        validate_positive_int(kernel_order, "kernel_order"),
    )


def _checked_residue_index(ctx: ClassNumberContext) -> int:
    recomputed = None
    if ctx.constant_field_size is not None and ctx.residue_fields:
        recomputed = residue_norm_index(ctx.constant_field_size, ctx.residue_fields)

    if ctx.residue_norm_index is None:
        if recomputed is None:
            raise MissingDegreeZeroDataError("E^0 needs residue_norm_index or the residue fields")
        return recomputed
    if recomputed is not None and recomputed != ctx.residue_norm_index:
        raise ValidationError(
            f"residue_norm_index = {ctx.residue_norm_index} but the residue fields give {recomputed}"
        )
    return ctx.residue_norm_index


def eval_E0(ctx: ClassNumberContext) -> OnoResult:
    """
    E^0(L/k) = |Sha| / [L_ab:k] * q(phi^0) * [U_k : N(U_L)] / [F_q^x : N(prod F_{q_i}^x)].

    Raises:
        - MissingDegreeZeroDataError: if a degree-zero input is missing.
        - ValidationError: if the supplied residue norm index contradicts the residue fields.
        - NonIntegralClassNumberError: if h^0(T) is not a positive integer.
    """

    _require(ctx, DEGREE_ZERO_FIELDS, MissingDegreeZeroDataError, "E^0")
    residue = _checked_residue_index(ctx)
    value = Fraction(ctx.sha_order, ctx.Lab_index) * ctx.q_phi0 * Fraction(ctx.Uk_index, residue)
    class_number = _implied_class_number(ctx.h0_L, ctx.h0_k, value, "h^0(T)")
    logger.info(f"E^0 = {format_rational(value)}, h^0(T) = {class_number}")
    return OnoResult(value, class_number)


def eval_torus_class_number(ctx: ClassNumberContext) -> TorusClassNumber:
    """
    h(T_{L/k}) = h(L)/h(k) * [L_ab:k]/|Sha| * [O_k^x : N(O_L^x)] / [U_k : N(U_L)]   (S = archimedean places)

    Raises:
        NonIntegralClassNumberError: if the result is not a positive integer.
    """

    value = (
        Fraction(ctx.hS_L, ctx.hS_k)
        * Fraction(ctx.Lab_index, ctx.sha_order)
        * Fraction(ctx.unit_index, ctx.adelic_unit_index)
    )
    if value.denominator != 1:
        raise NonIntegralClassNumberError(
            f"h(T) = {format_rational(value)} is not a positive integer: inputs are inconsistent"
        )
    tamagawa = Fraction(ctx.Lab_index, ctx.sha_order)
    return TorusClassNumber(class_number=value.numerator, tamagawa=tamagawa)


def eval_cm_case(hK: int, hKplus: int, Q_unit_index: int, t: int) -> CMResult:
    """
    h(T) for a CM extension K/K^+: h_K / h_{K^+} * 1 / (Q * 2^(t-1)).

    A non-integral value is returned with integral = False and logged.
    """

    hK = validate_positive_int(hK, "hK")
    hKplus = validate_positive_int(hKplus, "hKplus")
    Q_unit_index = validate_positive_int(Q_unit_index, "Q_unit_index")
    t = validate_positive_int(t, "t")

    value = Fraction(hK, hKplus * Q_unit_index * 2 ** (t - 1))
    integral = value.denominator == 1
    if not integral:
        logger.warning(f"CM class number {format_rational(value)} is not an integer: CM data inconsistent")
    return CMResult(value, integral)


def eval_hS_ideal_form(ictx: IdealFormContext) -> Fraction:
    """
    h_S(T) = [I^(1) : P^(1)] [O_{k,S}^x cap N(L^x) : N(O_{L,S}^x)] / [U_{k,S} cap N(A_L^x) : N(U_{L,S})].

    Raises:
        NonIntegralClassNumberError: if the quotient is not an integer.
    """

    value = Fraction(ictx.I1_over_P1 * ictx.unit_meet_index, ictx.adelic_meet_index)
    if value.denominator != 1:
        raise NonIntegralClassNumberError(f"h_S(T) = {format_rational(value)} is not an integer")
    return value


def check_narrow_quadratic_identity(h_plus: int, h_star: int, t: int) -> bool:
    """For K quadratic over Q: does h^+(K) = h_K^* 2^(t-1) hold, t the number of ramified primes?"""
    h_plus = validate_positive_int(h_plus, "h_plus")
    h_star = validate_positive_int(h_star, "h_star")
    t = validate_positive_int(t, "t")
    return h_plus == h_star * 2 ** (t - 1)


def _lab(family: KummerFamily | None, lab_index: int | None) -> int:
    if lab_index is not None:
        return validate_positive_int(lab_index, "Lab_index")
    if family is not None:
        return lab_degree(family)
    raise InsufficientDataError("[L_ab:k] needs a Kummer family or an explicit Lab_index")


def eval_refined_ES(
    places: Sequence[LocalPlaceData],
    unit_index: int,
    sha: FiniteAbelianGroup | None = None,
    family: KummerFamily | None = None,
    lab_index: int | None = None,
) -> Fraction:
    """
    E_S(L/k) from local data:
    |Sha| * prod_{v in S} [L_{v,ab}:k_v] * prod_{v in R(L/k) - S} e_v / ([L_ab:k] [O_{k,S}^x : N(O_{L,S}^x)]).

    Without sha, Sha is trivial (some HNP rule holds).
    """

    sha_order = sha.order if sha is not None else 1
    local = global_local_factor(places)
    return Fraction(sha_order * local, _lab(family, lab_index) * validate_positive_int(unit_index, "unit_index"))


def eval_refined_ES_plus(
    places: Sequence[LocalPlaceData],
    unit_index_plus: int,
    q_phi: Fraction | int | str,
    sha: FiniteAbelianGroup | None = None,
    family: KummerFamily | None = None,
    lab_index: int | None = None,
) -> Fraction:
    """Narrow version of eval_refined_ES, divided by q(phi) and using the totally positive unit index."""

    sha_order = sha.order if sha is not None else 1
    local = global_local_factor(places)
    denominator = _lab(family, lab_index) * validate_positive_int(unit_index_plus, "unit_index_plus")
    return Fraction(sha_order * local, denominator) / parse_rational(q_phi, "q_phi")


def eval_refined_E0(
    places: Sequence[LocalPlaceData],
    q_phi0: Fraction | int | str,
    residue_index: int,
    sha: FiniteAbelianGroup | None = None,
    family: KummerFamily | None = None,
    lab_index: int | None = None,
) -> Fraction:
    """
    E^0(L/k) from local data (function field, S empty):
    |Sha| * q(phi^0) * prod_{v in R(L/k)} e_v / ([L_ab:k] [F_q^x : N(prod F_{q_i}^x)]).
    """

    sha_order = sha.order if sha is not None else 1
    ramification = 1
    for d in places:
        if d.ramified:
            ramification *= local_unit_norm_index(d)
    denominator = _lab(family, lab_index) * validate_positive_int(residue_index, "residue_index")
    return Fraction(sha_order * ramification, denominator) * parse_rational(q_phi0, "q_phi0")
