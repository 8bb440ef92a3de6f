"""
Exact kernel for finitely presented finite abelian groups.

This module provides:
- Smith normal form of integer matrices (numpy object arrays, Python ints)
- The canonical invariant-factor form of a finite abelian group
- Quotients by relation lattices, subgroup joins and indices
- p-primary parts, direct sums and q-symbols

Every value is immutable and every function is pure.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import zip_longest
from math import prod
from numbers import Integral
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from multinorm.exceptions import DimensionMismatchError, InfiniteQuotientError, ValidationError
from multinorm.utils import validate_positive_int, validate_prime, p_adic_valuation


# Integer matrices are numpy arrays of dtype=object holding Python ints,
# so that no entry can ever overflow.
IntMatrix = np.ndarray


def as_int_matrix(entries: Sequence[Sequence[int]] | np.ndarray, cols: int | None = None) -> IntMatrix:
    """
    Builds a validated integer matrix.

    Args:
        - entries: Rows of integers (list of lists or a 2-d numpy array).
        - cols (int, optional): Expected number of columns. Mandatory for a matrix without rows.

    Returns:
        IntMatrix: A (rows x cols) array of dtype=object holding Python ints.

    Raises:
        DimensionMismatchError: if the rows are ragged or do not have `cols` entries.
    """

    if isinstance(entries, np.ndarray):
        if entries.ndim != 2:
            raise DimensionMismatchError(f"A matrix must be 2-dimensional (got {entries.ndim} dimensions)")
        if cols is None:
            cols = entries.shape[1]
        elif entries.shape[1] != cols:
            raise DimensionMismatchError(f"Expected {cols} columns, got {entries.shape[1]}")
        rows = entries.tolist()
    else:
        rows = [list(row) for row in entries]

    if cols is None:
        if not rows:
            raise DimensionMismatchError("A matrix without rows needs an explicit column count.")
        cols = len(rows[0])

    matrix = np.zeros((len(rows), cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != cols:
            raise DimensionMismatchError(f"Row {i} has {len(row)} entries, expected {cols}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, Integral):
                raise DimensionMismatchError(f"Entry ({i}, {j}) is not an integer: {x!r}")
            matrix[i, j] = int(x)
    return matrix


def _identity(n: int) -> IntMatrix:
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    return eye


def _smallest_pivot(d: IntMatrix, t: int) -> tuple[int, int] | None:
    """Position of the nonzero entry of smallest absolute value in d[t:, t:]."""
    best = None
    rows, cols = d.shape
    for i in range(t, rows):
        for j in range(t, cols):
            x = d[i, j]
            if x != 0 and (best is None or abs(x) < abs(d[best])):
                best = (i, j)
    return best


def smith_normal_form(m: Sequence[Sequence[int]] | IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Computes the Smith normal form of an integer matrix.

    The pivot is always the nonzero entry of smallest absolute value of the
    remaining block, which keeps the coefficients small.

    Args:
        m: Integer matrix (rows x cols), the zero matrix is allowed.

    Returns:
        tuple (d, u, v) of integer matrices with u @ m @ v == d, u and v unimodular,
        d diagonal with nonnegative entries d_1 | d_2 | ...

    Raises:
        DimensionMismatchError: on malformed input.
    """

    a = as_int_matrix(m)
    rows, cols = a.shape
    d = a.copy()
    u = _identity(rows)
    v = _identity(cols)

    for t in range(min(rows, cols)):
        while True:
            pivot = _smallest_pivot(d, t)
            if pivot is None:
                # The remaining block is zero: nothing left to diagonalize.
                return d, u, v
            i, j = pivot
            if i != t:
                d[[t, i]] = d[[i, t]]
                u[[t, i]] = u[[i, t]]
            if j != t:
                d[:, [t, j]] = d[:, [j, t]]
                v[:, [t, j]] = v[:, [j, t]]

            cleared = True
            for i in range(t + 1, rows):
                q = d[i, t] // d[t, t]
                if q:
                    d[i, :] -= q * d[t, :]
                    u[i, :] -= q * u[t, :]
                if d[i, t] != 0:
                    cleared = False
            for j in range(t + 1, cols):
                q = d[t, j] // d[t, t]
                if q:
                    d[:, j] -= q * d[:, t]
                    v[:, j] -= q * v[:, t]
                if d[t, j] != 0:
                    cleared = False
            if not cleared:
                continue

            # Divisibility: the pivot must divide the whole remaining block.
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i, j] % d[t, t] != 0),
                None,
            )
            if offender is None:
                break
            d[t, :] += d[offender, :]
            u[t, :] += u[offender, :]

        if d[t, t] < 0:
            d[t, :] *= -1
            u[t, :] *= -1

    return d, u, v


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    A finite abelian group in canonical invariant-factor form.

    The group is Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... | d_k and every d_j >= 2.
    The empty tuple encodes the trivial group. Since the form is unique,
    two groups are isomorphic exactly when they are equal.

    Attributes:
        invariant_factors (tuple[int, ...]): The divisibility chain.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(validate_positive_int(d, "invariant factor", minimum=2) for d in self.invariant_factors)
        for smaller, larger in zip(factors, factors[1:]):
            if larger % smaller != 0:
                raise ValidationError(
                    f"Invariant factors must form a divisibility chain: {smaller} does not divide {larger}"
                )
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls(())

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        """Returns Z/n (the trivial group for n = 1)."""
        n = validate_positive_int(n, "cyclic order")
        return cls(() if n == 1 else (n,))

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """
        Canonical form of the direct sum Z/n_1 x Z/n_2 x ... for arbitrary positive orders.

        The orders are split into elementary divisors, then recombined into
        invariant factors (Chinese Remainder Theorem).
        """

        exponents: dict[int, list[int]] = {}
        for n in orders:
            n = validate_positive_int(n, "cyclic order")
            for p, e in factorint(n).items():
                exponents.setdefault(int(p), []).append(int(e))

        # Largest prime powers are combined together first.
        columns = [[p ** e for e in sorted(es, reverse=True)] for p, es in sorted(exponents.items())]
        factors = [prod(column) for column in zip_longest(*columns, fillvalue=1)]
        return cls(tuple(reversed(factors)))

    @cached_property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        """Number of cyclic factors, i.e. the minimal number of generators."""
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elementary_divisors(self) -> list[int]:
        """
        Prime-power view of the group.

        Returns:
            list[int]: Prime powers, sorted by prime then by exponent.
        """
        divisors = []
        for d in self.invariant_factors:
            divisors.extend(int(p) ** int(e) for p, e in factorint(d).items())
        return sorted(divisors, key=lambda q: (min(factorint(q)), q))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        for d in sorted(set(self.invariant_factors)):
            count = self.invariant_factors.count(d)
            parts.append(f"Z/{d}" if count == 1 else f"(Z/{d})^{count}")
        return " x ".join(parts)


@dataclass(frozen=True)
class SubgroupGens:
    """
    A subgroup given by generators, in the coordinates of the ambient invariant factors.

    Attributes:
        - ambient (FiniteAbelianGroup): The group containing the subgroup.
        - generators (tuple[tuple[int, ...], ...]): Integer vectors of length ambient.rank.
    """

    ambient: FiniteAbelianGroup
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rank = self.ambient.rank
        generators = []
        for g in self.generators:
            g = tuple(g)
            if len(g) != rank:
                raise DimensionMismatchError(
                    f"Generator {g} has {len(g)} coordinates but the ambient group {self.ambient} has rank {rank}"
                )
            for x in g:
                if isinstance(x, bool) or not isinstance(x, Integral):
                    raise DimensionMismatchError(f"Generator {g} has a non-integer coordinate {x!r}")
            generators.append(tuple(int(x) for x in g))
        object.__setattr__(self, "generators", tuple(generators))


@dataclass(frozen=True)
class QSymbolInput:
    """Orders of the kernel and cokernel of a homomorphism with finite kernel and cokernel."""

    kernel_order: int
    cokernel_order: int

    def __post_init__(self):
        validate_positive_int(self.kernel_order, "kernel_order")
        validate_positive_int(self.cokernel_order, "cokernel_order")


def group_from_presentation(rank: int, relations: Sequence[Sequence[int]] | IntMatrix) -> FiniteAbelianGroup:
    """
    Computes Z^rank / <rows of relations> in canonical form.

    Args:
        - rank (int): Number of generators.
        - relations: Relation matrix with `rank` columns (one relation per row).

    Returns:
        FiniteAbelianGroup: The quotient, factors equal to 1 dropped.

    Raises:
        - InfiniteQuotientError: if the quotient is infinite.
        - DimensionMismatchError: if a relation does not have `rank` coordinates.
    """

    rank = validate_positive_int(rank, "rank", minimum=0)
    if rank == 0:
        return FiniteAbelianGroup.trivial()

    matrix = as_int_matrix(relations, cols=rank)
    if matrix.shape[0] < rank:
        raise InfiniteQuotientError(
            f"{matrix.shape[0]} relations cannot give a finite quotient of Z^{rank}"
        )

    d, _, _ = smith_normal_form(matrix)
    diagonal = [d[t, t] for t in range(rank)]
    if any(x == 0 for x in diagonal):
        raise InfiniteQuotientError(f"The quotient of Z^{rank} has a free part (Smith diagonal {diagonal})")

    return FiniteAbelianGroup(tuple(int(x) for x in diagonal if x != 1))


def _ambient_relations(ambient: FiniteAbelianGroup) -> list[list[int]]:
    rank = ambient.rank
    return [[d if j == i else 0 for j in range(rank)] for i, d in enumerate(ambient.invariant_factors)]


def join_index(ambient: FiniteAbelianGroup, subs: Sequence[SubgroupGens]) -> int:
    """
    Index of the subgroup generated by all listed subgroups.

    The relation lattice of the ambient group is stacked with every generator
    and the order of the quotient is read off the Smith normal form.

    Args:
        - ambient (FiniteAbelianGroup): The ambient group.
        - subs (list[SubgroupGens]): Subgroups of the ambient group.

    Returns:
        int: [ambient : <union of subs>], equal to |ambient| for an empty list.

    Raises:
        DimensionMismatchError: if a subgroup lives in another ambient group.
    """

    relations = _ambient_relations(ambient)
    for sub in subs:
        if sub.ambient != ambient:
            raise DimensionMismatchError(
                f"Subgroup of {sub.ambient} cannot be joined inside {ambient}"
            )
        relations.extend(list(g) for g in sub.generators)

    if ambient.is_trivial:
        return 1
    return group_from_presentation(ambient.rank, relations).order


def subgroup_order(ambient: FiniteAbelianGroup, subs: Sequence[SubgroupGens]) -> int:
    """Order of the subgroup generated by the listed subgroups."""
    return ambient.order // join_index(ambient, subs)


def p_primary_part(g: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    """
    Returns the p-Sylow subgroup of g in canonical form.

    Raises:
        ValidationError: if p is not prime.
    """

    p = validate_prime(p)
    factors = []
    for d in g.invariant_factors:
        v = p_adic_valuation(d, p)
        if v:
            factors.append(p ** v)
    return FiniteAbelianGroup(tuple(factors))


def direct_sum(gs: Iterable[FiniteAbelianGroup]) -> FiniteAbelianGroup:
    """Canonical form of the direct sum of the given groups."""
    return FiniteAbelianGroup.from_cyclic_orders(d for g in gs for d in g.invariant_factors)


def is_isomorphic(g: FiniteAbelianGroup, h: FiniteAbelianGroup) -> bool:
    return g == h


def q_symbol(q: QSymbolInput) -> Fraction:
    """q(alpha) = |coker alpha| / |ker alpha| as an exact rational."""
    return Fraction(q.cokernel_order, q.kernel_order)
