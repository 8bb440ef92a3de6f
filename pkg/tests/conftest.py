import sys
from pathlib import Path

import matplotlib
import pytest

matplotlib.use("Agg")

ROOT_DIR = Path(__file__).resolve().parents[1]
sys.path.append(str(ROOT_DIR / "src"))

from multinorm.kummer import KummerFamily  # noqa: E402

FIXTURES_DIR = ROOT_DIR / "src" / "multinorm" / "data" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def first_family() -> KummerFamily:
    """Bicyclic family over Q(zeta_27), Sha = (Z/3)^3."""
    return KummerFamily(p=3, n=3, prime_pair=(5, 19),
                        vectors=((1, 0), (1, 1), (2, 3), (3, 5), (5, 11)))


@pytest.fixture
def second_family() -> KummerFamily:
    """Bicyclic family over Q(zeta_27), Sha = Z/3."""
    return KummerFamily(p=3, n=3, prime_pair=(5, 19),
                        vectors=((1, 0), (1, 1), (2, 3), (4, 9), (10, 19)))


def _cyclic_submodule(vector, modulus):
    a, b = vector
    return frozenset(((t * a) % modulus, (t * b) % modulus) for t in range(modulus))


def _generated_subgroup(factors, generators):
    """All elements of the subgroup of Z/d_1 x ... x Z/d_k generated by the generators."""
    zero = tuple(0 for _ in factors)
    elements = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = tuple((xi + gi) % d for xi, gi, d in zip(x, g, factors))
            if y not in elements:
                elements.add(y)
                frontier.append(y)
    return elements


@pytest.fixture
def cyclic_submodule():
    """Oracle: the cyclic submodule of (Z/modulus)^2 generated by a vector, as a set."""
    return _cyclic_submodule


@pytest.fixture
def generated_subgroup():
    """Oracle: the subgroup generated by vectors in a product of cyclic groups, as a set."""
    return _generated_subgroup
