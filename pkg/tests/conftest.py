from fractions import Fraction

import pytest

from pathnash.game import BimatrixGame

F = Fraction


def matching_pennies() -> BimatrixGame:
    return BimatrixGame([[1, 0], [0, 1]], [[0, 1], [1, 0]], name="matching-pennies")


def coordination() -> BimatrixGame:
    return BimatrixGame([[1, 0], [0, 1]], [[1, 0], [0, 1]], name="coordination")


def dominant() -> BimatrixGame:
    # row 1 and column 0 strictly dominant
    return BimatrixGame([[0, F(1, 4)], [F(1, 2), 1]], [[1, 0], [F(3, 4), F(1, 2)]])


def prisoners_dilemma() -> BimatrixGame:
    # action 1 = defect
    return BimatrixGame([[3, 0], [5, 1]], [[3, 5], [0, 1]])


@pytest.fixture
def mp():
    return matching_pennies()


@pytest.fixture
def coord():
    return coordination()


@pytest.fixture
def dom():
    return dominant()
