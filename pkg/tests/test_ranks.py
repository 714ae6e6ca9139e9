from fractions import Fraction
from math import comb
import random

import pytest
from hypothesis import given, settings, strategies as st

from waringlab import ranks
from waringlab.apolarity import ann_dim
from waringlab.families import normal_form, normal_form_factors
from waringlab.poly import MultiPoly, gl_substitute, parse_poly
from waringlab.ranks import (
    BoundReport, PreconditionError, StructuredInput, best_catalecticant_bound, catalecticant_bound,
    conic_intersection_count, generic_quartic_rank, monomial_rank, partially_symmetric_bound,
    quadratic_rank, structured_bound, sylvester_rank, ternary_quartic_rank, test_condition_a,
    test_condition_b,
)

from conftest import random_gl, xs


def test_bound_report_validation():
    assert BoundReport(3, 3).exact
    assert BoundReport(3).to_json()["upper"] == "unknown"
    with pytest.raises(ValueError):
        BoundReport(5, 4)


@pytest.mark.parametrize("text,nv,r", [
    ("x0^2+x0*x2+x1*x2+x3^2+x4^2", 5, 5),
    ("x2^2+x3^2+x4^2", 5, 3),
    ("x0*x1", 2, 2),
])
def test_quadratic_rank(text, nv, r):
    assert quadratic_rank(parse_poly(text, nv)) == r


def test_quadratic_rank_rejects_cubic():
    with pytest.raises(PreconditionError):
        quadratic_rank(parse_poly("x0^3", 2))


@pytest.mark.parametrize("exps,r", [((1, 1, 2), 6), ((3, 1, 1, 1), 16), ((5,), 1), ((0, 2, 2), 3)])
def test_monomial_rank(exps, r):
    assert monomial_rank(exps) == r


@pytest.mark.parametrize("a,b", [(a, b) for b in range(1, 7) for a in range(1, b + 1)])
def test_sylvester_agrees_with_monomial_formula(a, b):
    F = MultiPoly.monomial((a, b))
    res = sylvester_rank(F)
    assert res.rank == monomial_rank((a, b)) == b + 1
    assert res.delta1.degree() + res.delta2.degree() == a + b + 2


def test_sylvester_fixtures():
    x0, x1 = xs(2)
    assert sylvester_rank(x0**3 * (x0**2 + x1**2)).rank == 4
    r, d1, d2 = sylvester_rank(x0**3 * x1)
    assert r == 4 and d1.degree() == 2 and d2.degree() == 4
    assert sylvester_rank(x0 * x1).rank == 2


def test_sylvester_in_more_variables():
    F = parse_poly("x0^4 + x1^4 + x2^4", 3)
    with pytest.raises(PreconditionError):
        sylvester_rank(F)
    G = parse_poly("(x0+x2)^4 + 2*(x0-x2)^4", 4)
    assert sylvester_rank(G).rank == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_sylvester_recovers_short_sums(d, seed):
    # r < (d+2)/2 distinct powers: the rank is exactly r
    rng = random.Random(seed)
    r = rng.randint(1, (d + 1) // 2)
    slopes = rng.sample(range(-20, 21), r)
    F = MultiPoly.zero(2)
    for s in slopes:
        F = F + MultiPoly.linear([Fraction(1), Fraction(s)]) ** d * rng.choice([1, 2, -3])
    res = sylvester_rank(F)
    assert res.rank == r
    assert res.delta1.degree() + res.delta2.degree() == d + 2


def test_catalecticant_bounds():
    n = 3
    names = [f"x{i}" for i in range(n + 1)]
    F = parse_poly("*".join(names) + f"*({'+'.join(names)})*({'+'.join(v + '^2' for v in names)})")
    assert catalecticant_bound(F, 2) == comb(5, 2)
    assert catalecticant_bound(normal_form("F4", 3), 2) == 6
    assert catalecticant_bound(parse_poly("x0^4", 3), 2) == 1
    value, t = best_catalecticant_bound(normal_form("F4", 3))
    assert value == 6 and t == 2


def test_generic_quartic_rank():
    assert [generic_quartic_rank(n) for n in (3, 4, 5, 6)] == [10, 15, 21, 30]


def _quartic_input(family, n, lam=None, **kw):
    l0, l1, q = normal_form_factors(family, n, lam)
    lin = [(l0, 2)] if family in ("F1", "F2", "F3") else [(l0, 1), (l1, 1)]
    return StructuredInput.from_factors(lin, q, **kw)


@pytest.mark.parametrize("family", ["F4", "F5", "F6", "F7", "F8-zero", "F8-nonzero", "F9", "F10"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_structured_bound_quartics(family, n):
    inp = _quartic_input(family, n)
    assert inp.dim_L == 1
    assert structured_bound(inp) == 4 * (n - 1)
    assert partially_symmetric_bound(inp) == 3 * (n - 1)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
@pytest.mark.parametrize("n", [3, 4])
def test_structured_bound_high_multiplicity(d, n):
    x = xs(n + 1)
    q = x[0] * x[1] + sum((x[i] ** 2 for i in range(2, n + 1)), MultiPoly.zero(n + 1))
    inp = StructuredInput.from_factors([(x[0], d - 2)], q)
    assert inp.dim_L == 0
    assert structured_bound(inp) == (d - 1) * n


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (5, 2), (6, 3)])
def test_structured_bound_high_degrees(n, k):
    x = xs(n + 1)
    q = sum((x[i] ** 2 for i in range(k + 1, n + 1)), MultiPoly.zero(n + 1))
    inp = StructuredInput.from_factors([(x[i], 1) for i in range(k + 1)], q)
    assert structured_bound(inp) == (k + 3) * (n - k)


@pytest.mark.parametrize("n", [5, 6])
def test_structured_bound_example_iii(n):
    x = xs(n + 1)
    q = sum((x[i] ** 2 for i in range(2, n + 1)), MultiPoly.zero(n + 1))
    inp = StructuredInput.from_factors([(x[0], n - 3), (x[1], 1)], q)
    assert structured_bound(inp) == n * (n - 1)


def test_structured_modes():
    x = xs(5)
    q = x[3] ** 2 + x[4] ** 2
    inp = StructuredInput.from_factors([(x[0], 1), (x[1], 1), (x[2], 1)], q, mode="gamma", gamma=3)
    assert structured_bound(inp) == 3 * (4 - 2)
    inp = StructuredInput.from_factors([(x[0], 1), (x[1], 1), (x[2], 1)], q, mode="k0")
    assert structured_bound(inp) == 4 * (4 - 2)
    bad = StructuredInput.from_factors([(x[0], 1), (x[1], 1), (x[2], 1)], q, mode="gamma", gamma=9)
    with pytest.raises(PreconditionError):
        structured_bound(bad)


def test_structured_bound_rejects_non_concise():
    x = xs(4)
    inp = StructuredInput.from_factors([(x[0], 1), (x[1], 1)], x[2] ** 2 + x[0] * x[1])
    with pytest.raises(PreconditionError):
        structured_bound(inp)


def test_from_factors_checks_product():
    x = xs(3)
    with pytest.raises(PreconditionError):
        StructuredInput.from_factors([(x[0], 1)], x[1] ** 2 + x[2] ** 2, F=x[0] ** 3)


@pytest.mark.parametrize("family", ["F3", "F5", "F9", "F10"])
def test_condition_a_no_counterexample(family):
    rep = test_condition_a(_quartic_input(family, 3), trials=200, seed=5)
    assert rep.status == "no-counterexample"
    assert rep.consistent > 0


def test_condition_a_is_reproducible():
    inp = _quartic_input("F5", 3)
    a = test_condition_a(inp, 50, seed=9)
    b = test_condition_a(inp, 50, seed=9)
    assert a == b


def test_condition_a_rejects_zero_trials():
    with pytest.raises(PreconditionError):
        test_condition_a(_quartic_input("F5", 3), trials=0)


@pytest.mark.parametrize("lam", [0, 1, 2])
def test_condition_b_holds_for_f10(lam):
    assert test_condition_b(_quartic_input("F10", 3, lam)).status == "holds"


def test_condition_b_holds_for_f4():
    assert test_condition_b(_quartic_input("F4", 3)).status == "holds"


def test_condition_b_for_f5_is_violated():
    res = test_condition_b(_quartic_input("F5", 3))
    assert res.status == "violated" and res.witness is not None


def test_condition_b_needs_positive_dim():
    x = xs(3)
    inp = StructuredInput.from_factors([(x[0], 2)], x[0] * x[1] + x[2] ** 2)
    with pytest.raises(PreconditionError):
        test_condition_b(inp)


def test_conic_intersection_count():
    y = [MultiPoly.var(i, 3, "S") for i in range(3)]
    assert conic_intersection_count(y[0] ** 2 - y[1] ** 2, y[1] ** 2 - y[2] ** 2) == 4
    assert conic_intersection_count(y[0] * y[2] - y[1] ** 2, y[0] ** 2) == 1
    assert conic_intersection_count(y[0] * y[1], y[0] * y[2] + y[1] * y[2] - y[2] ** 2) == 4
    # two conics tangent at (1:0:0) meet in three points
    assert conic_intersection_count(y[1] * y[0] - y[2] ** 2, y[1] * y[0] - y[2] ** 2 + y[1] * y[0] - y[1] * y[2]) == 3


G5 = "x0*x1*(-x0^2-x1^2+x1*x2)"
G6 = "x0*x1*(-x0^2-x1^2+x2^2)"
G7 = "x0*(x0+x1)*(-2*x0^2-2*x0*x1+x2^2)"


@pytest.mark.parametrize("text,rank,dim2", [(G5, 6, 2), (G6, 4, 2), (G7, 6, 0)])
def test_kleppe_fixtures(text, rank, dim2):
    G = parse_poly(text, 3)
    assert ann_dim(G, 2) == dim2
    assert ternary_quartic_rank(G) == rank


@pytest.mark.parametrize("text,rank", [(G5, 6), (G6, 4), (G7, 6)])
def test_kleppe_gl_invariance(text, rank):
    rng = random.Random(len(text))
    G = parse_poly(text, 3)
    for _ in range(5):
        assert ternary_quartic_rank(gl_substitute(G, random_gl(rng, 3))) == rank


def test_kleppe_dim_one_raises():
    # five general fourth powers: Ann_2 is the single conic through the five points
    G = parse_poly("x0^4 + x1^4 + x2^4 + (x0+x1+x2)^4 + (x0-x1+2*x2)^4", 3)
    assert ann_dim(G, 2) == 1
    with pytest.raises(PreconditionError):
        ternary_quartic_rank(G)
    with pytest.raises(PreconditionError):
        ternary_quartic_rank(parse_poly("x0^4 + x1^4", 3))
