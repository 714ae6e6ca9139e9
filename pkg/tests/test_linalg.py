from fractions import Fraction
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from waringlab import linalg
from waringlab.field import QuadExt

entries = st.integers(-5, 5)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[Fraction(draw(entries)) for _ in range(c)] for _ in range(r)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    assert linalg.rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_det_matches_sympy(m):
    k = min(len(m), len(m[0]))
    sq = [row[:k] for row in m[:k]]
    assert linalg.det(sq) == sympy.Matrix(sq).det()


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_kernel_is_annihilated(m):
    ker = linalg.kernel(m, len(m[0]))
    assert len(ker) + linalg.rank(m) == len(m[0])
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_solve_and_inverse():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    inv = linalg.inverse(a)
    assert linalg.matmul(a, inv) == linalg.identity(2)
    x = linalg.solve(a, [Fraction(3), Fraction(5)])
    assert x is not None


def test_quadratic_field_rank():
    i = QuadExt.sqrt(-1)
    m = [[Fraction(1), i], [i, Fraction(-1)]]
    assert linalg.rank(m) == 1


def test_numeric_rank_uses_tolerance():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 5))
    m = [[complex(x) for x in row] for row in a]
    assert linalg.rank(m, 1e-9) == 2
