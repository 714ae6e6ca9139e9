import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from waringlab.field import (
    MixedDomainError, QuadExt, embed, field_of, format_scalar, parse_field_name,
    field_name, scalar_from_json, scalar_to_json, sqrt_rational, squarefree_decompose,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
radicands = st.sampled_from([-7, -3, -1, 2, 3, 5, 6])


@st.composite
def quad(draw, d=None):
    return QuadExt(draw(rationals), draw(rationals), d if d is not None else draw(radicands))


def test_sqrt_squares_to_radicand():
    r = QuadExt.sqrt(-3)
    assert r * r == -3
    assert QuadExt.sqrt(2) ** 2 == 2


def test_rejects_non_squarefree():
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 1)


def test_collapse_to_rational():
    x = QuadExt(2, 1, 5) - QuadExt(0, 1, 5)
    assert x == 2 and isinstance(x, Fraction)


def test_mixed_radicands_raise():
    with pytest.raises(MixedDomainError):
        QuadExt.sqrt(2) + QuadExt.sqrt(3)


@pytest.mark.parametrize("n,expected", [(12, (2, 3)), (-12, (2, -3)), (1, (1, 1)), (50, (5, 2)), (-1, (1, -1))])
def test_squarefree_decompose(n, expected):
    assert squarefree_decompose(n) == expected


@pytest.mark.parametrize("x", [Fraction(9, 4), Fraction(-3), Fraction(8), Fraction(-1, 12)])
def test_sqrt_rational_exact(x):
    r = sqrt_rational(x)
    assert r * r == x


@given(quad(d=-3), quad(d=-3))
def test_field_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    if a != 0:
        assert (b / a) * a == b


@given(quad(d=2))
def test_norm_is_multiplicative_with_conjugate(a):
    assert a * a.conjugate() == a.norm()


@given(quad())
def test_embedding_is_a_ring_map(a):
    b = a * a + 3
    assert cmath.isclose(embed(b), embed(a) ** 2 + 3, rel_tol=1e-9, abs_tol=1e-9)


@given(st.one_of(rationals, quad()))
def test_json_roundtrip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_complex_json_roundtrip():
    z = complex(0.25, -1.5)
    assert scalar_from_json(scalar_to_json(z)) == z


def test_field_of():
    assert field_of([Fraction(1), 2]) == "Q"
    assert field_of([QuadExt.sqrt(-1), Fraction(1)]) == -1
    assert field_of([QuadExt.sqrt(-1), QuadExt.sqrt(3)]) == "C"
    assert field_of([1j]) == "C"


@pytest.mark.parametrize("f", ["Q", "C", -3, 2])
def test_field_names_roundtrip(f):
    assert parse_field_name(field_name(f)) == f


def test_format_scalar():
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert "sqrt(-1)" in format_scalar(QuadExt.sqrt(-1))
