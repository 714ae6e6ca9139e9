"""Rank formulas, lower bounds and the hypothesis testers behind them."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, prod

from . import binary, linalg
from .apolarity import ann_degree, ann_dim, essential_reduction, is_concise
from .field import embed, is_exact
from .poly import DUAL, MultiPoly, apply_diff, dual_point, gl_substitute, hessian, monomials


class PreconditionError(ValueError):
    """Input violates the mathematical preconditions of an operation."""


@dataclass
class BoundReport:
    lower: int
    upper: int | None = None
    methods: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": "unknown" if self.upper is None else self.upper,
            "exact": self.exact,
            "methods": list(self.methods),
            "notes": dict(self.notes),
        }


# ---------------------------------------------------------------------------
# classical ranks


def quadratic_rank(q: MultiPoly, eps: float | None = None) -> int:
    if q.is_zero() or q.degree() != 2 or not q.is_homogeneous():
        raise PreconditionError("expected a nonzero quadratic form")
    return linalg.rank(hessian(q), eps)


def monomial_rank(exps) -> int:
    a = sorted(e for e in exps if e > 0)
    if not a:
        return 1
    return prod(1 + e for e in a[1:])


@dataclass(frozen=True)
class SylvesterResult:
    rank: int
    delta1: MultiPoly
    delta2: MultiPoly

    def __iter__(self):
        return iter((self.rank, self.delta1, self.delta2))


def _binary_frame(F: MultiPoly, eps=None):
    """Return ``(G, M)`` with G a binary form and F(M z) = G(z0, z1)."""
    if F.nvars == 2:
        return F, None
    if F.nvars == 1:
        return F.embed_vars(2, [0]), None
    G, m = essential_reduction(F, eps)
    if G.nvars > 2:
        raise PreconditionError(f"form has {G.nvars} essential variables, at most 2 allowed")
    if G.nvars == 1:
        G = G.embed_vars(2, [0])
    return G, m


def sylvester_rank(F: MultiPoly, eps: float | None = None) -> SylvesterResult:
    """Rank of a binary form from the two generators of its apolar ideal.

    Forms in more variables are accepted when they have at most two essential
    variables; the generators are then returned in the reduced coordinates.
    """
    if F.is_zero() or not F.is_homogeneous() or F.degree() < 1:
        raise PreconditionError("expected a nonzero form of degree >= 1")
    G, _ = _binary_frame(F, eps)
    d = G.degree()
    s = next(t for t in range(1, d + 2) if ann_dim(G, t, eps) > 0)
    if s > d:
        basis = [MultiPoly.monomial(e, 1, DUAL) for e in monomials(2, s)]
    else:
        basis = ann_degree(G, s, eps).basis
    if len(basis) >= 2:
        d1, d2 = basis[0], basis[1]
        for cand in basis:
            if binary.is_squarefree(binary.coeffs_of(cand), eps):
                d1 = cand
                d2 = next(b for b in basis if b is not cand)
                break
        return SylvesterResult(s, d1, d2)
    delta1 = basis[0]
    e = next(t for t in range(s + 1, d + 3) if ann_dim(G, t, eps) > t - s + 1)
    if e > d:
        ann_e = [MultiPoly.monomial(m, 1, DUAL) for m in monomials(2, e)]
    else:
        ann_e = ann_degree(G, e, eps).basis
    multiples = [delta1 * MultiPoly.monomial(m, 1, DUAL) for m in monomials(2, e - s)]
    keys = monomials(2, e)
    mult_rows = [[p.coeff(k) for k in keys] for p in multiples]
    base_rank = linalg.rank(mult_rows, eps)
    delta2 = next(
        b for b in ann_e
        if linalg.rank(mult_rows + [[b.coeff(k) for k in keys]], eps) > base_rank
    )
    sqfree = binary.is_squarefree(binary.coeffs_of(delta1), eps)
    return SylvesterResult(s if sqfree else e, delta1, delta2)


def catalecticant_bound(F: MultiPoly, t: int, eps: float | None = None) -> int:
    n1 = F.nvars
    value = comb(n1 - 1 + t, t) - ann_dim(F, t, eps)
    return max(value, 0)


def best_catalecticant_bound(F: MultiPoly, eps: float | None = None) -> tuple[int, int]:
    """Largest catalecticant bound over t and the t attaining it."""
    d = F.degree()
    return max(((catalecticant_bound(F, t, eps), t) for t in range(0, d + 1)), key=lambda x: (x[0], -x[1]))


def generic_quartic_rank(n: int) -> int:
    if n < 3:
        raise PreconditionError("generic quartic rank is tabulated for n >= 3")
    if n == 3:
        return 10
    if n == 4:
        return 15
    return ceil(comb(n + 4, 4) / (n + 1))


# ---------------------------------------------------------------------------
# structured lower bound


MODES = ("full", "k0", "extended", "gamma")


@dataclass
class StructuredInput:
    """A form F = l_0^a_0 ... l_k^a_k * q together with its factor data."""

    F: MultiPoly
    linear: list
    q: MultiPoly
    L: list
    dim_L: int
    mode: str = "full"
    gamma: int | None = None

    @classmethod
    def from_factors(cls, linear, q: MultiPoly, mode: str = "full", gamma: int | None = None,
                     F: MultiPoly | None = None, eps: float | None = None) -> StructuredInput:
        linear = [(ell, int(a)) for ell, a in linear]
        if not linear:
            raise PreconditionError("at least one linear factor is required")
        if q.degree() != 2 or not q.is_homogeneous():
            raise PreconditionError("q must be a quadratic form")
        for ell, a in linear:
            if ell.degree() != 1 or not ell.is_homogeneous() or a < 1:
                raise PreconditionError("linear factors must be linear forms with positive multiplicity")
        product = q
        for ell, a in linear:
            product = product * ell**a
        if F is None:
            F = product
        elif not (F == product or (not F.is_exact() and F.is_close(product, eps))):
            raise PreconditionError("F is not the product of the declared factors")
        pts = [dual_point(ell) for ell, _ in linear]
        dim_L = linalg.rank([list(p.coords) for p in pts], eps) - 1
        if mode not in MODES:
            raise PreconditionError(f"unknown mode {mode!r}")
        return cls(F, linear, q, pts, dim_L, mode, gamma)

    @property
    def n(self) -> int:
        return self.F.nvars - 1

    @property
    def degree(self) -> int:
        return self.F.degree()

    def spanning_prefix(self, eps=None) -> int:
        """Number of leading factors whose dual points already span L."""
        rows = []
        for i, p in enumerate(self.L):
            rows.append(list(p.coords))
            if linalg.rank(rows, eps) == self.dim_L + 1:
                return i + 1
        return len(self.L)

    def base_product(self, eps=None) -> MultiPoly:
        """The product of linear factors that condition (a) talks about."""
        factors = self.linear
        if self.mode == "extended":
            factors = self.linear[: self.spanning_prefix(eps)]
        out = MultiPoly.constant(1, self.F.nvars)
        for ell, a in factors:
            out = out * ell**a
        return out

    def max_chain(self, eps=None) -> int:
        """Largest i for which condition (a) is quantified."""
        if self.mode == "extended":
            return self.base_product(eps).degree() + 1
        if self.mode == "gamma":
            return int(self.gamma)
        return self.degree - 1


def structured_bound(inp: StructuredInput, eps: float | None = None) -> int:
    """The formula of the structured lower bound for the requested mode.

    Hypotheses (a)/(b) are not checked here.
    """
    F, n, k = inp.F, inp.n, inp.dim_L
    if not is_concise(F, eps):
        raise PreconditionError("F is not concise")
    if k >= n:
        raise PreconditionError("dim L must be smaller than n")
    deg = inp.degree
    if inp.mode == "full":
        return (deg - 1) * n if k == 0 else deg * (n - k)
    if inp.mode == "k0":
        return (deg - 1) * (n - k)
    if inp.mode == "extended":
        d_ext = inp.base_product(eps).degree()
        return (d_ext + 1) * (n - k)
    if inp.mode == "gamma":
        g = inp.gamma
        if g is None or not 2 <= g <= deg - 1:
            raise PreconditionError("gamma must satisfy 2 <= gamma <= deg F - 1")
        return g * (n - k)
    raise PreconditionError(f"unknown mode {inp.mode!r}")


def partially_symmetric_bound(inp: StructuredInput, eps: float | None = None) -> int:
    if not is_concise(inp.F, eps):
        raise PreconditionError("F is not concise")
    return (inp.degree - 1) * (inp.n - inp.dim_L)


def _vanishing_forms(points, nvars, eps=None):
    """Basis of the linear forms in S vanishing at all given points."""
    rows = [list(p.coords) for p in points]
    vecs = linalg.kernel(rows, nvars, eps)
    return [MultiPoly.linear(v, DUAL) for v in vecs]


@dataclass
class FalsifierReport:
    status: str
    trials: int
    consistent: int
    seed: int
    counterexample: list | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "trials": self.trials, "consistent": self.consistent, "seed": self.seed}
        if self.counterexample:
            out["counterexample"] = [str(h) for h in self.counterexample]
        return out


def _random_combo(rng, basis, nvars):
    while True:
        if len(basis) > 1 and rng.random() < 0.3:
            return basis[rng.randrange(len(basis))]
        out = MultiPoly.zero(nvars, DUAL)
        for b in basis:
            out = out + b * rng.randint(-3, 3)
        if not out.is_zero():
            return out


def test_condition_a(inp: StructuredInput, trials: int = 1000, seed: int = 0,
                     eps: float | None = None) -> FalsifierReport:
    """Randomized search for a violation of hypothesis (a).

    Each trial picks a chain length i, a form H_i vanishing on L, free forms
    H_1..H_{i-2}, and solves the linear conditions for H_{i-1} so that the
    product annihilates F.  Inconsistent draws are skipped.
    """
    if trials < 1:
        raise PreconditionError("trials must be positive")
    rng = random.Random(seed)
    F = inp.F
    nv = F.nvars
    P = inp.base_product(eps)
    imax = inp.max_chain(eps)
    if imax < 2:
        return FalsifierReport("no-counterexample", trials, 0, seed)
    on_L = _vanishing_forms(inp.L, nv, eps)
    all_forms = [MultiPoly.var(i, nv, DUAL) for i in range(nv)]
    consistent = 0
    for _ in range(trials):
        i = rng.randint(2, imax)
        h_top = _random_combo(rng, on_L, nv)
        free = [_random_combo(rng, all_forms, nv) for _ in range(i - 2)]
        G = apply_diff(h_top, F)
        for h in free:
            G = apply_diff(h, G)
        if G.is_zero():
            h_solved = _random_combo(rng, all_forms, nv)
        else:
            sols = ann_degree(G, 1, eps).basis if G.degree() >= 1 else []
            if not sols:
                continue
            h_solved = _random_combo(rng, sols, nv)
        consistent += 1
        chain = free + [h_solved]
        image = P
        for h in chain:
            image = apply_diff(h, image)
        if not image.is_zero():
            return FalsifierReport("counterexample", trials, consistent, seed, chain + [h_top])
    return FalsifierReport("no-counterexample", trials, consistent, seed)


@dataclass
class ConditionBResult:
    status: str
    witness: MultiPoly | None = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def test_condition_b(inp: StructuredInput, eps: float | None = None) -> ConditionBResult:
    """Exhaustive check that no H vanishing on L sends q to a point of L.

    Solves ``H[q] = sum mu_j l_j`` over the space of L-vanishing H.
    """
    if inp.dim_L <= 0:
        raise PreconditionError("condition (b) needs dim L > 0")
    nv = inp.F.nvars
    V = _vanishing_forms(inp.L, nv, eps)
    images = [apply_diff(h, inp.q).linear_coeffs() for h in V]
    ells = [list(p.coords) for p in inp.L]
    # columns: images of V (coefficient h_j) then -l_j (coefficient mu_j)
    cols = images + [[-c for c in e] for e in ells]
    mat = [[col[r] for col in cols] for r in range(nv)]
    for vec in linalg.kernel(mat, len(cols), eps):
        h_part = vec[: len(V)]
        if all(binary_is_zero(c, eps) for c in h_part):
            continue
        H = MultiPoly.zero(nv, DUAL)
        for c, h in zip(h_part, V):
            H = H + h * c
        if apply_diff(H, inp.q).is_zero():
            raise PreconditionError("an L-vanishing form annihilates q, so F is not concise")
        return ConditionBResult("violated", H)
    return ConditionBResult("holds")


def binary_is_zero(c, eps=None) -> bool:
    if is_exact(c):
        return c == 0
    return abs(embed(c)) <= (eps or 1e-9)


# ---------------------------------------------------------------------------
# ternary quartics


def _conic_resultant(c1: MultiPoly, c2: MultiPoly) -> MultiPoly:
    """Resultant in y2 of two ternary quadrics, as a binary form in y0, y1."""

    def split(c):
        a = c.coeff((0, 0, 2))
        b = MultiPoly(2, {(e[0], e[1]): v for e, v in c.terms.items() if e[2] == 1}, DUAL)
        cc = MultiPoly(2, {(e[0], e[1]): v for e, v in c.terms.items() if e[2] == 0}, DUAL)
        return a, b, cc

    a1, b1, k1 = split(c1)
    a2, b2, k2 = split(c2)
    u = k2 * a1 - k1 * a2
    return u * u - (b2 * a1 - b1 * a2) * (b1 * k2 - b2 * k1)


def conic_intersection_count(c1: MultiPoly, c2: MultiPoly, seed: int = 0,
                             eps: float | None = None) -> int:
    """Number of distinct points in Var(c1, c2) inside P^2.

    Projects from a random center; several centers are tried and the largest
    count is kept, since a collision can only merge points.
    """
    rng = random.Random(seed)
    best = -1
    tries = 0
    while tries < 3:
        m = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        if linalg.rank(m) < 3:
            continue
        d1, d2 = gl_substitute(c1, m), gl_substitute(c2, m)
        if d1.coeff((0, 0, 2)) == 0 or d2.coeff((0, 0, 2)) == 0:
            continue
        res = _conic_resultant(d1, d2)
        if res.is_zero() or all(binary_is_zero(c, eps) for c in res.terms.values()):
            raise PreconditionError("the two conics share a component")
        best = max(best, binary.distinct_root_count(binary.coeffs_of(res), eps))
        tries += 1
    return best


def ternary_quartic_rank(G: MultiPoly, eps: float | None = None) -> int:
    """Rank of a concise ternary quartic with dim Ann(G)_2 <= 2."""
    if G.nvars != 3 or G.degree() != 4 or not G.is_homogeneous():
        raise PreconditionError("expected a ternary quartic")
    if not is_concise(G, eps):
        raise PreconditionError("G is not concise")
    ann2 = ann_degree(G, 2, eps).basis
    if len(ann2) == 0:
        return 6
    if len(ann2) == 1:
        raise PreconditionError("dim Ann(G)_2 = 1: the variety is a conic and the rank lemma does not apply")
    if len(ann2) > 2:
        raise PreconditionError("dim Ann(G)_2 > 2")
    k = conic_intersection_count(ann2[0], ann2[1], eps=eps)
    return 4 if k == 4 else 6


# ---------------------------------------------------------------------------
# point splitting


def _span_rank(vectors, eps=None) -> int:
    return linalg.rank(vectors, eps) if vectors else 0


def split_points(Z, L, eps: float | None = None):
    """Greedy extraction of independent blocks avoiding L.

    Returns ``(blocks, remainder)``: each block has n - dim L independent
    points whose span misses L.
    """
    Z = list(Z)
    if not Z:
        return [], []
    nv = len(Z[0])
    Lrows = [list(p.coords) for p in L]
    dimL = _span_rank(Lrows, eps) - 1
    target = nv - 1 - dimL
    blocks = []
    remaining = Z
    while remaining:
        if _span_rank([list(p.coords) for p in remaining] + Lrows, eps) < nv:
            break
        block = []
        for p in remaining:
            rows = [list(x.coords) for x in block + [p]]
            if _span_rank(rows, eps) != len(rows):
                continue
            if _span_rank(rows + Lrows, eps) != len(rows) + dimL + 1:
                continue
            block.append(p)
            if len(block) == target:
                break
        if len(block) < target:
            break
        blocks.append(block)
        chosen = {id(p) for p in block}
        remaining = [p for p in remaining if id(p) not in chosen]
    return blocks, remaining


# keep pytest from collecting the falsifiers when they are imported into tests
test_condition_a.__test__ = False
test_condition_b.__test__ = False
