"""
Kummer families of cyclic p-power extensions.

A family L = K_0 x ... x K_m over k = Q(zeta_{p^n}) is described by exponent
vectors (a_i, b_i) in (Z/p^n)^2: K_i = k((l1^a_i l2^b_i)^{1/p^n}). The field
K_i corresponds to the cyclic submodule C_i generated by (a_i, b_i), so every
degree and every intersection degree is a question about cyclic submodules
of (Z/p^n)^2.

This module handles:
- Family validation and normalization (distinguished index 0, ordering of the rest)
- Degrees and intersection degrees (closed-form valuations)
- The equivalence structure feeding the Sha formula

We assume l1 and l2 are multiplicatively independent modulo p^n-th powers in k,
so that [K_i:k] = |C_i|. This is not verified.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass, field
from numbers import Integral
import logging

import pandas as pd

from multinorm.exceptions import (
    ValidationError,
    ZeroVectorError,
    DuplicateFieldError,
    CommonIntersectionNotTrivialError,
)
from multinorm.utils import validate_positive_int, validate_prime, p_adic_valuation

logger = logging.getLogger(__name__)

DEFAULT_BASE_LABEL = "Q(zeta_{p^n})"


@dataclass(frozen=True)
class KummerFamily:
    """
    A Kummer-type family of cyclic extensions of k = Q(zeta_{p^n}).

    Attributes:
        - p (int): Prime.
        - n (int): Level, k contains the p^n-th roots of unity.
        - vectors (tuple[tuple[int, int], ...]): Exponent pairs (a_i, b_i), 0 <= a_i, b_i < p^n.
        - prime_pair (tuple[int, int] | None): The generating primes (l1, l2), for display.
        - base_label (str): Description of the base field.
        - independent_generators (bool): Acknowledgment of the independence assumption on (l1, l2).
        - original_order (tuple[int, ...]): original_order[i] is the input position of vector i.
    """

    p: int
    n: int
    vectors: tuple[tuple[int, int], ...]
    prime_pair: tuple[int, int] | None = None
    base_label: str = DEFAULT_BASE_LABEL
    independent_generators: bool = True
    original_order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        p = validate_prime(self.p)
        n = validate_positive_int(self.n, "n")
        modulus = p ** n

        vectors = []
        for i, vector in enumerate(self.vectors):
            vector = tuple(vector)
            if len(vector) != 2:
                raise ValidationError(f"Vector {i} must be a pair (a, b), got {vector!r}")
            for x in vector:
                if isinstance(x, bool) or not isinstance(x, Integral):
                    raise ValidationError(f"Vector {i} has a non-integer entry {x!r}")
                if not 0 <= x < modulus:
                    raise ValidationError(f"Vector {i} entries must lie in [0, {modulus}) (provided: {vector})")
            vectors.append((int(vector[0]), int(vector[1])))
        if not vectors:
            raise ValidationError("A Kummer family needs at least one vector.")

        if self.prime_pair is not None:
            pair = tuple(self.prime_pair)
            if len(pair) != 2:
                raise ValidationError(f"prime_pair must hold two primes, got {pair!r}")
            l1, l2 = (validate_prime(q, "prime_pair entry") for q in pair)
            if l1 == l2:
                raise ValidationError(f"prime_pair must hold two distinct primes (provided: {pair})")
            object.__setattr__(self, "prime_pair", (l1, l2))

        order = tuple(self.original_order) or tuple(range(len(vectors)))
        if sorted(order) != list(range(len(vectors))):
            raise ValidationError(f"original_order must be a permutation of 0..{len(vectors) - 1}")

        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "vectors", tuple(vectors))
        object.__setattr__(self, "original_order", order)

    @property
    def m(self) -> int:
        """Index of the last field (the family has m + 1 fields)."""
        return len(self.vectors) - 1

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def label(self) -> str:
        """Short human description, e.g. 'p=3, n=3, 5 fields over Q(zeta_27)'."""
        base = self.base_label
        if base == DEFAULT_BASE_LABEL:
            base = f"Q(zeta_{self.modulus})"
        return f"p={self.p}, n={self.n}, {len(self.vectors)} fields over {base}"


@dataclass(frozen=True)
class EquivalenceStructure:
    """
    Combinatorial data of a normalized family.

    Attributes:
        - p, n (int): Prime and level of the family.
        - epsilons (tuple[int, ...]): Degree exponents, [K_i:k] = p^epsilons[i].
        - e_matrix (tuple[tuple[int, ...], ...]): Intersection exponents, e_matrix[i][i] = epsilons[i].
        - u_partition (dict[int, tuple[int, ...]]): r -> U_r = {i >= 1 : e_{0,i} = r}, for 0 <= r <= epsilon_0.
        - r_set (tuple[int, ...]): The r with U_r nonempty.
        - classes (dict[tuple[int, int], tuple[tuple[int, ...], ...]]): (r, l) -> l-equivalence classes of U_r.
        - non_transitive (tuple[tuple[int, int], ...]): (r, l) where the raw relation is not transitive.
    """

    p: int
    n: int
    epsilons: tuple[int, ...]
    e_matrix: tuple[tuple[int, ...], ...]
    u_partition: dict[int, tuple[int, ...]]
    r_set: tuple[int, ...]
    classes: dict[tuple[int, int], tuple[tuple[int, ...], ...]]
    non_transitive: tuple[tuple[int, int], ...] = ()

    def level(self, c) -> int:
        """L(c) = min of e_{i,j} over ordered pairs of c, i = j included."""
        members = tuple(c)
        if not members:
            raise ValidationError("The level of an empty index set is undefined.")
        return min(self.e_matrix[i][j] for i in members for j in members)

    def class_count(self, c, l: int) -> int:
        """n_l(c): number of l-equivalence classes inside c."""
        return len(_components(tuple(c), self.e_matrix, l))

    def to_frame(self) -> pd.DataFrame:
        """Returns the e-matrix as a labelled DataFrame."""
        labels = list(range(len(self.epsilons)))
        df = pd.DataFrame([list(row) for row in self.e_matrix], index=labels, columns=labels)
        df.index.name = "i"
        df.columns.name = "j"
        return df


def _check_index(f: KummerFamily, i: int) -> int:
    if isinstance(i, bool) or not isinstance(i, Integral) or not 0 <= i <= f.m:
        raise ValidationError(f"Index {i!r} out of range for a family of {len(f.vectors)} fields")
    return int(i)


def _vector_valuation(f: KummerFamily, vector: tuple[int, int]) -> int:
    a, b = vector
    return min(p_adic_valuation(a, f.p, cap=f.n), p_adic_valuation(b, f.p, cap=f.n))


def field_degree_exponent(f: KummerFamily, i: int) -> int:
    """
    Exponent eps_i with [K_i:k] = p^eps_i.

    eps_i is the p-adic order of (a_i, b_i) in (Z/p^n)^2, i.e. n - min(v_p(a_i), v_p(b_i), n).
    """

    i = _check_index(f, i)
    return f.n - _vector_valuation(f, f.vectors[i])


def intersection_exponent(f: KummerFamily, i: int, j: int) -> int:
    """
    Exponent e_{i,j} with [K_i cap K_j : k] = p^e_{i,j}.

    |C_i cap C_j| = |C_i| |C_j| / |C_i + C_j|, and the index of C_i + C_j in
    (Z/p^n)^2 is the gcd of the 2x2 minors of the lattice spanned by u, v and
    p^n Z^2, whose p-part is p^min(v_p(det), n + min(v(u), v(v)), 2n).
    """

    i = _check_index(f, i)
    j = _check_index(f, j)
    if i == j:
        return field_degree_exponent(f, i)

    u, v = f.vectors[i], f.vectors[j]
    n = f.n
    det = u[0] * v[1] - u[1] * v[0]
    quotient_exponent = min(
        p_adic_valuation(det, f.p, cap=2 * n),
        n + min(_vector_valuation(f, u), _vector_valuation(f, v)),
        2 * n,
    )
    return field_degree_exponent(f, i) + field_degree_exponent(f, j) - (2 * n - quotient_exponent)


def common_intersection_exponent(f: KummerFamily) -> int:
    """
    Exponent of the intersection of all the fields over k.

    All C_i cap C_0 are subgroups of the cyclic group C_0, hence form a chain:
    the common intersection is the smallest of them.
    """

    return min(intersection_exponent(f, 0, i) for i in range(len(f.vectors)))


def lab_degree(f: KummerFamily) -> int:
    """[L_ab : k] for a Kummer family (all K_i are abelian over k)."""
    return f.p ** common_intersection_exponent(f)


def validate_and_normalize(f: KummerFamily) -> KummerFamily:
    """
    Validates a family and reindexes it.

    Index 0 becomes the earliest field of minimal degree, the remaining fields
    are sorted by descending e_i = eps_0 - e_{0,i} (ties keep input order).
    Applying the function twice gives the same result as applying it once.

    Args:
        f (KummerFamily): Input family.

    Returns:
        KummerFamily: The normalized family, `original_order` records the input positions.

    Raises:
        - ZeroVectorError: if some vector is (0, 0).
        - DuplicateFieldError: if two vectors generate the same cyclic submodule.
        - CommonIntersectionNotTrivialError: if the intersection of all the fields is not k.
        - ValidationError: if the independence assumption is not acknowledged.
    """

    if not f.independent_generators:
        raise ValidationError(
            "independent_generators = false: degrees cannot be read off the exponent vectors"
        )

    for i, vector in enumerate(f.vectors):
        if vector == (0, 0):
            raise ZeroVectorError(f"Vector {f.original_order[i]} is zero: it does not define a field extension")

    size = len(f.vectors)
    epsilons = [field_degree_exponent(f, i) for i in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            if intersection_exponent(f, i, j) == epsilons[i] == epsilons[j]:
                raise DuplicateFieldError(
                    f"Vectors {f.original_order[i]} {f.vectors[i]} and {f.original_order[j]} {f.vectors[j]} "
                    f"define the same field"
                )

    # A single cyclic field is accepted as is (Hasse norm theorem).
    common = common_intersection_exponent(f) if size > 1 else 0
    if common > 0:
        raise CommonIntersectionNotTrivialError(
            f"The fields share a common subfield of degree {f.p ** common} over k"
        )

    base = epsilons.index(min(epsilons))
    eps0 = epsilons[base]
    rest = [i for i in range(size) if i != base]
    rest.sort(key=lambda i: -(eps0 - intersection_exponent(f, base, i)))
    permutation = [base] + rest

    if permutation != list(range(size)):
        logger.info(f"Family reindexed, new position -> input position: {[f.original_order[i] for i in permutation]}")

    return KummerFamily(
        p=f.p,
        n=f.n,
        vectors=tuple(f.vectors[i] for i in permutation),
        prime_pair=f.prime_pair,
        base_label=f.base_label,
        independent_generators=f.independent_generators,
        original_order=tuple(f.original_order[i] for i in permutation),
    )


def _components(members: tuple[int, ...], e_matrix, l: int) -> tuple[tuple[int, ...], ...]:
    """Connected components of the graph on members with edges {i, j : e_{i,j} >= l}."""

    remaining = list(members)
    components = []
    while remaining:
        stack = [remaining.pop(0)]
        component = set(stack)
        while stack:
            i = stack.pop()
            for j in list(remaining):
                if e_matrix[i][j] >= l:
                    remaining.remove(j)
                    component.add(j)
                    stack.append(j)
        components.append(tuple(sorted(component)))
    return tuple(sorted(components))


def equivalence_structure(f: KummerFamily) -> EquivalenceStructure:
    """
    Computes the e-matrix, the sets U_r and every l-equivalence partition.

    The family is expected to be normalized (see validate_and_normalize).
    Classes are connected components of the relation e_{i,j} >= l, computed for
    L(U_r) <= l <= n. Any (r, l) where the raw relation is not already
    transitive is recorded and logged.
    """

    size = len(f.vectors)
    epsilons = tuple(field_degree_exponent(f, i) for i in range(size))
    e_matrix = tuple(tuple(intersection_exponent(f, i, j) for j in range(size)) for i in range(size))

    eps0 = epsilons[0]
    u_partition = {r: tuple(i for i in range(1, size) if e_matrix[0][i] == r) for r in range(eps0 + 1)}
    r_set = tuple(r for r, members in u_partition.items() if members)

    classes = {}
    non_transitive = []
    for r in r_set:
        members = u_partition[r]
        start = min(e_matrix[i][j] for i in members for j in members)
        for l in range(start, f.n + 1):
            components = _components(members, e_matrix, l)
            classes[(r, l)] = components
            if any(e_matrix[i][j] < l for c in components for i in c for j in c if i != j):
                non_transitive.append((r, l))

    if non_transitive:
        logger.warning(f"l-equivalence is not transitive at (r, l) = {non_transitive}, using the transitive closure")

    return EquivalenceStructure(
        p=f.p,
        n=f.n,
        epsilons=epsilons,
        e_matrix=e_matrix,
        u_partition=u_partition,
        r_set=r_set,
        classes=classes,
        non_transitive=tuple(non_transitive),
    )
