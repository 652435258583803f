import random
from fractions import Fraction

import pytest

from pklie.simplex import LPError, LPResult, feasibility, verify_farkas


def test_feasible_simple():
    # x >= 1, -x >= -3  (1 <= x <= 3)
    res = feasibility([[1], [-1]], [1, -3])
    assert res.feasible
    assert Fraction(1) <= res.point[0] <= Fraction(3)


def test_infeasible_interval():
    # x >= 2 and -x >= -1 cannot hold
    res = feasibility([[1], [-1]], [2, -1])
    assert not res.feasible
    assert verify_farkas([[1], [-1]], [2, -1], res.farkas_ge)


def test_zero_row_infeasible():
    # 0 * x >= 1
    res = feasibility([[0, 0]], [1])
    assert not res.feasible
    assert res.farkas_ge == [Fraction(1)]


def test_equalities():
    res = feasibility([[1, 0]], [0], [[1, 1]], [2])
    assert res.feasible
    x, y = res.point
    assert x + y == 2 and x >= 0
    res2 = feasibility([[1, 0], [0, 1]], [2, 2], [[1, 1]], [3])
    assert not res2.feasible
    assert verify_farkas(
        [[1, 0], [0, 1]], [2, 2], res2.farkas_ge, [[1, 1]], [3], res2.farkas_eq
    )


def test_free_variables():
    # feasible only with a negative coordinate
    res = feasibility([[1, 1], [-1, 0]], [0, 5])
    assert res.feasible
    x, y = res.point
    assert x <= -5 and x + y >= 0


def test_random_systems_verified():
    rng = random.Random(0)
    feasible_count = infeasible_count = 0
    for _ in range(60):
        nv = rng.randint(1, 4)
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(nv)] for _ in range(rng.randint(1, 6))]
        rhs = [Fraction(rng.randint(-3, 3)) for _ in rows]
        res = feasibility(rows, rhs)
        if res.feasible:
            feasible_count += 1
            for row, b in zip(rows, rhs):
                assert sum(c * v for c, v in zip(row, res.point)) >= b
        else:
            infeasible_count += 1
            assert verify_farkas(rows, rhs, res.farkas_ge)
    assert feasible_count and infeasible_count


def test_sum_to_zero_functionals():
    # three functionals summing to zero but all required >= 1: infeasible,
    # and the multipliers must expose the vanishing combination
    rows = [[1, 0], [0, 1], [-1, -1]]
    rhs = [1, 1, 1]
    res = feasibility(rows, rhs)
    assert not res.feasible
    y = res.farkas_ge
    assert all(v >= 0 for v in y) and sum(v * b for v, b in zip(y, rhs)) > 0


def test_empty_system():
    assert feasibility([], []).feasible
