from math import comb
import random

import pytest
import sympy

from waringlab.apolarity import (
    ann_degree, ann_dim, ann_jacobian_degree, catalecticant, essential_reduction, is_concise, span_equal,
)
from waringlab.families import normal_form
from waringlab.poly import DUAL, MultiPoly, apply_diff, gl_substitute, parse_poly

from conftest import random_gl
from test_poly import to_sympy


def sympy_catalecticant_rank(F: MultiPoly, t: int) -> int:
    """Independent oracle: span of all t-th order partials, computed by sympy."""
    x = sympy.symbols(f"x0:{F.nvars}")
    f = to_sympy(F)
    parts = []
    for combo in sympy.utilities.iterables.combinations_with_replacement(range(F.nvars), t):
        g = f
        for i in combo:
            g = sympy.diff(g, x[i])
        parts.append(sympy.Poly(g, *x) if g != 0 else None)
    mons = sorted({m for p in parts if p is not None for m in p.monoms()})
    rows = [[p.coeff_monomial(m) if p is not None else 0 for m in mons] for p in parts]
    return sympy.Matrix(rows).rank() if mons else 0


def fixture_non_asymptotic(n):
    names = [f"x{i}" for i in range(n + 1)]
    return parse_poly("*".join(names) + f"*({'+'.join(names)})*({'+'.join(v + '^2' for v in names)})", n + 1)


def fixture_high_degrees(n, k):
    head = "*".join(f"x{i}" for i in range(k + 1))
    tail = "+".join(f"x{i}^2" for i in range(k + 1, n + 1))
    return parse_poly(f"{head}*({tail})", n + 1)


@pytest.mark.parametrize("n", [2, 3])
def test_non_asymptotic_example_has_no_quadrics(n):
    assert ann_dim(fixture_non_asymptotic(n), 2) == 0


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (5, 2)])
def test_high_degrees_ann2(n, k):
    F = fixture_high_degrees(n, k)
    # squares of the k+1 linear variables, the traceless part of the tail quadric
    expected = (k + 1) + comb(n - k, 2) + (n - k - 1)
    assert expected == n + comb(n - k, 2)
    assert ann_dim(F, 2) == expected


def test_f7_ann2_basis():
    F = normal_form("F7", 3)
    basis = ann_degree(F, 2).basis
    assert span_equal(basis, [parse_poly("y2*y3", 4), parse_poly("y2^2 - y3^2", 4)])


@pytest.mark.parametrize("family,lam", [("F8-nonzero", 1), ("F8-nonzero", 3), ("F10", 0)])
def test_quartic_families_share_ann2(family, lam):
    F = normal_form(family, 3, lam)
    assert span_equal(ann_degree(F, 2).basis, [parse_poly("y2*y3", 4), parse_poly("y2^2 - y3^2", 4)])


def test_f10_literal_ann2_is_a_translate():
    # the literal F10 form at lam = 1 gives the same space after y2 -> y2 - y1
    basis = ann_degree(normal_form("F10", 3, 1), 2).basis
    assert span_equal(basis, [parse_poly("(y2-y1)*y3", 4), parse_poly("(y2-y1)^2 - y3^2", 4)])


def test_f9_ann2_is_larger():
    # for the F9 normal form Ann_2 is 4-dimensional and contains y2^2
    F = normal_form("F9", 3)
    basis = ann_degree(F, 2).basis
    assert len(basis) == 4 == 10 - sympy_catalecticant_rank(F, 2)
    assert span_equal(basis + [parse_poly("y2^2", 4)], basis)


@pytest.mark.parametrize("text,t", [
    ("x0*x1*(x2^2+x3^2)", 2),
    ("x0^3*x1 + x1^2*x2^2", 2),
    ("x0*(x0+x1)*(x0^2+x0*x2+x1*x2+x3^2)", 1),
    ("x0^2*x1*x2 - x2^4", 2),
    ("x0*x1*x2*(x0+x1+x2)*(x0^2+x1^2+x2^2)", 3),
])
def test_catalecticant_rank_matches_sympy(text, t):
    F = parse_poly(text)
    cat = catalecticant(F, t)
    assert cat.rank == sympy_catalecticant_rank(F, t)
    assert cat.rank + len(ann_degree(F, t).basis) == comb(F.nvars - 1 + t, t)


def test_catalecticant_columns_are_derivatives():
    F = parse_poly("x0^2*x1*(x1+x2)", 3)
    cat = catalecticant(F, 2)
    for j, b in enumerate(cat.cols):
        img = apply_diff(MultiPoly.monomial(b, 1, DUAL), F)
        assert cat.column(j) == [img.coeff(r) for r in cat.rows]


def test_catalecticant_of_power():
    F = parse_poly("x0^5", 3)
    assert all(catalecticant(F, t).rank == 1 for t in range(1, 5))
    with pytest.raises(ValueError):
        catalecticant(F, 6)


def test_basis_elements_annihilate_and_ideal_property():
    F = normal_form("F5", 3)
    basis = ann_degree(F, 2).basis
    for delta in basis:
        assert apply_diff(delta, F).is_zero()
        for i in range(F.nvars):
            assert apply_diff(delta * MultiPoly.var(i, F.nvars, DUAL), F).is_zero()


def test_jacobian_annihilator_agrees_below_top():
    F = normal_form("F4", 3)
    for e in range(4):
        assert span_equal(ann_jacobian_degree(F, e).basis, ann_degree(F, e).basis)
    assert ann_jacobian_degree(F, 4).dim == comb(3 + 4, 4)
    assert ann_jacobian_degree(F, 2).dim == 4


def test_conciseness():
    assert is_concise(parse_poly("x0^2+x1^2", 2))
    assert not is_concise(parse_poly("x0^2", 3))
    assert is_concise(normal_form("F9", 4))
    assert ann_degree(parse_poly("x0^2+x1^2", 2), 1).dim == 0
    with pytest.raises(ValueError):
        is_concise(MultiPoly.zero(2))


def test_gl_invariance_of_ann_dims():
    rng = random.Random(11)
    F = normal_form("F6", 3)
    dims = [ann_dim(F, t) for t in (1, 2, 3)]
    for _ in range(20):
        G = gl_substitute(F, random_gl(rng, 4, 2))
        assert [ann_dim(G, t) for t in (1, 2, 3)] == dims


def test_essential_reduction():
    F = parse_poly("(x0+x1)^3 + (x0-x1+x2)^3", 4)
    G, m = essential_reduction(F)
    assert G.nvars == 2
    assert is_concise(G)
