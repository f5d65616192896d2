"""Shared fixtures: the worked four-part families used across the suite.

Colours are written a, b, c (indices 0, 1, 2) on every pair.  F1 is the
small six-triangle family whose class passes; F2 and F3 are the larger
passing families with richer correspondence censuses.
"""

import pytest

from amalgam.core import Language, Monic
from amalgam.family import Family


def tri(i, j, k, cij, cik, cjk):
    """Triangle on parts {i, j, k} (ascending) with colours in pair order."""
    return Monic.from_edges((i, j, k), {(i, j): cij, (i, k): cik, (j, k): cjk})


A, B, C = 0, 1, 2  # colour indices for a, b, c


@pytest.fixture(scope="session")
def lang4():
    return Language.uniform(4)


@pytest.fixture(scope="session")
def lang3():
    return Language.uniform(3)


def f1_members():
    return [
        tri(0, 1, 2, A, A, A),  # A1
        tri(0, 1, 2, B, A, A),  # A2
        tri(0, 1, 3, C, A, A),  # A3
        tri(0, 2, 3, A, A, A),  # A4
        tri(1, 2, 3, A, A, B),  # A5
        tri(1, 2, 3, A, A, C),  # A6
    ]


@pytest.fixture(scope="session")
def f1(lang4):
    return Family.of(lang4, f1_members())


@pytest.fixture(scope="session")
def f1_extras():
    """The three optional extensions of F1 that keep the class passing."""
    a7 = tri(0, 1, 3, B, A, A)
    a8 = tri(0, 2, 3, A, A, B)
    a_star = Monic.from_edges(
        (0, 1, 2, 3),
        {(0, 1): B, (0, 2): B, (0, 3): B, (1, 2): B, (1, 3): B, (2, 3): B},
    )
    return [a7, a8, a_star]


def f2_members():
    return [
        tri(0, 1, 2, A, A, A),  # A1
        tri(0, 1, 2, B, A, A),  # B1
        tri(0, 1, 2, A, B, A),  # B2
        tri(0, 1, 2, A, A, B),  # B3
        tri(0, 1, 3, A, A, A),  # A2
        tri(0, 1, 3, C, A, A),  # C1
        tri(0, 1, 3, A, B, A),  # B4
        tri(0, 1, 3, A, A, B),  # B5
        tri(0, 2, 3, A, A, A),  # A3
        tri(0, 2, 3, C, A, A),  # C2
        tri(0, 2, 3, A, C, A),  # C3
        tri(0, 2, 3, A, A, B),  # B6
        tri(1, 2, 3, A, A, A),  # A4
        tri(1, 2, 3, C, A, A),  # C4
        tri(1, 2, 3, A, C, A),  # C5
        tri(1, 2, 3, A, A, C),  # C6
    ]


@pytest.fixture(scope="session")
def f2(lang4):
    return Family.of(lang4, f2_members())


def f3_members():
    # spelled out member by member to match the worked 32-triangle family
    return [
        tri(0, 1, 2, A, A, A), tri(0, 1, 2, B, A, A),      # A1 A2
        tri(0, 1, 3, A, A, A), tri(0, 1, 3, C, A, A),      # A3 A4
        tri(0, 2, 3, A, A, A), tri(0, 2, 3, A, A, B),      # A5 A6
        tri(1, 2, 3, A, A, A), tri(1, 2, 3, A, A, C),      # A7 A8
        tri(0, 1, 2, A, A, C), tri(0, 1, 2, B, A, C),      # B1 B2
        tri(0, 1, 3, A, C, A), tri(0, 1, 3, C, C, A),      # B3 B4
        tri(0, 2, 3, A, C, A), tri(0, 2, 3, A, C, B),      # B5 B6
        tri(1, 2, 3, C, A, A), tri(1, 2, 3, C, A, C),      # B7 B8
        tri(0, 1, 2, A, C, A), tri(0, 1, 2, B, C, A),      # C1 C2
        tri(0, 1, 3, A, A, C), tri(0, 1, 3, C, A, C),      # C3 C4
        tri(0, 2, 3, C, A, A), tri(0, 2, 3, C, A, B),      # C5 C6
        tri(1, 2, 3, A, C, A), tri(1, 2, 3, A, C, C),      # C7 C8
        tri(0, 1, 2, A, C, C), tri(0, 1, 2, B, C, C),      # D1 D2
        tri(0, 1, 3, A, C, C), tri(0, 1, 3, C, C, C),      # D3 D4
        tri(0, 2, 3, C, C, A), tri(0, 2, 3, C, C, B),      # D5 D6
        tri(1, 2, 3, C, C, A), tri(1, 2, 3, C, C, C),      # D7 D8
    ]


@pytest.fixture(scope="session")
def f3(lang4):
    return Family.of(lang4, f3_members())
