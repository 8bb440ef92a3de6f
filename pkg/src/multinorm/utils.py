"""
Utility functions for the multinorm project.

This module contains helper functions for:
- Integer and prime validation
- p-adic valuations
- Exact rational parsing and formatting

Author: Mounia Tonazzini
Date: October 2026
"""

from fractions import Fraction
from numbers import Integral, Rational

from sympy import isprime

from multinorm.exceptions import ValidationError


def validate_positive_int(value: int, name: str = "value", minimum: int = 1) -> int:
    """
    Validates that a value is an integer greater than or equal to a minimum.

    Args:
        - value (int): Value to check.
        - name (str): Name used in the error message.
        - minimum (int): Smallest accepted value (default: 1).

    Returns:
        int: The value as a plain Python int.

    Raises:
        ValidationError: if the value is not an integer or is too small.
    """

    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ValidationError(f"{name} must be an integer, got {type(value).__name__}")

    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum} (provided: {value})")

    return int(value)


def validate_prime(p: int, name: str = "p") -> int:
    """
    Validates that a value is a rational prime.

    Raises:
        ValidationError: if p is not a prime number.
    """

    p = validate_positive_int(p, name, minimum=2)
    if not isprime(p):
        raise ValidationError(f"{name} must be a prime number (provided: {p})")
    return p


def p_adic_valuation(x: int, p: int, cap: int | None = None) -> int:
    """
    Returns the p-adic valuation of an integer.

    Args:
        - x (int): Integer to evaluate. v_p(0) is infinite and returns the cap.
        - p (int): Prime.
        - cap (int, optional): Upper bound for the result. Required when x can be 0.

    Returns:
        int: min(v_p(x), cap)

    Raises:
        ValidationError: if x is 0 and no cap was given.
    """

    if x == 0:
        if cap is None:
            raise ValidationError("The valuation of 0 is infinite: provide a cap.")
        return cap

    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def parse_rational(value: int | str | Fraction, name: str = "value") -> Fraction:
    """
    Converts an integer, a Fraction or a string 'a/b' into an exact positive rational.

    Raises:
        ValidationError: if the value is not a positive rational.
    """

    if isinstance(value, bool):
        raise ValidationError(f"{name} must be a rational number, got bool")

    try:
        if isinstance(value, (Rational, str)):
            result = Fraction(value)
        else:
            raise TypeError(type(value).__name__)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ValidationError(f"{name} must be an exact rational like '3/2' (provided: {value!r})") from e

    if result <= 0:
        raise ValidationError(f"{name} must be positive (provided: {value})")
    return result


def format_rational(value: Fraction) -> str:
    """Format an exact rational as 'a' or 'a/b'."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
