"""Catalecticant matrices and graded pieces of the apolar ideal."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .poly import DUAL, PRIMAL, MultiPoly, apply_diff, gl_substitute, monomials


@dataclass(frozen=True)
class CatalecticantMatrix:
    """Matrix of the map S_t -> R_{d-t}, g -> g[F] in the monomial bases."""

    degree: int
    rows: list
    cols: list
    entries: list
    rank: int

    def column(self, j: int) -> list:
        return [row[j] for row in self.entries]


@dataclass(frozen=True)
class AnnBasis:
    degree: int
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def _check_form(F: MultiPoly):
    if F.ring != PRIMAL:
        raise ValueError("expected a form in R")
    if F.is_zero():
        raise ValueError("the zero polynomial has no apolar ideal")
    if not F.is_homogeneous():
        raise ValueError("expected a homogeneous form")


def _cat_entries(F: MultiPoly, t: int, rows, cols):
    index = {e: i for i, e in enumerate(rows)}
    entries = [[Fraction(0)] * len(cols) for _ in rows]
    for j, b in enumerate(cols):
        img = apply_diff(MultiPoly.monomial(b, 1, DUAL), F)
        for e, c in img.terms.items():
            entries[index[e]][j] = c
    return entries


def catalecticant(F: MultiPoly, t: int, eps: float | None = None) -> CatalecticantMatrix:
    _check_form(F)
    d = F.degree()
    if not 0 <= t <= d:
        raise ValueError(f"t={t} outside 0..{d}")
    rows = monomials(F.nvars, d - t)
    cols = monomials(F.nvars, t)
    entries = _cat_entries(F, t, rows, cols)
    return CatalecticantMatrix(t, rows, cols, entries, linalg.rank(entries, eps))


def _basis_from_kernel(vectors, cols, nvars):
    out = []
    for v in vectors:
        out.append(MultiPoly(nvars, {b: c for b, c in zip(cols, v)}, DUAL))
    return out


def ann_degree(F: MultiPoly, t: int, eps: float | None = None) -> AnnBasis:
    """Basis of Ann(F)_t, reduced with respect to the monomial order of S_t."""
    _check_form(F)
    d = F.degree()
    if t < 0 or t > d:
        raise ValueError(f"t={t} outside 0..{d}")
    cols = monomials(F.nvars, t)
    rows = monomials(F.nvars, d - t)
    entries = _cat_entries(F, t, rows, cols)
    vecs = linalg.kernel(entries, len(cols), eps)
    return AnnBasis(t, _basis_from_kernel(vecs, cols, F.nvars))


def ann_dim(F: MultiPoly, t: int, eps: float | None = None) -> int:
    """dim Ann(F)_t for any t >= 0 (every form of degree > deg F annihilates)."""
    d = F.degree()
    if t > d:
        return comb(F.nvars - 1 + t, t)
    return comb(F.nvars - 1 + t, t) - catalecticant(F, t, eps).rank


def is_concise(F: MultiPoly, eps: float | None = None) -> bool:
    _check_form(F)
    if F.degree() == 0:
        return F.nvars == 0
    return ann_dim(F, 1, eps) == 0


def ann_jacobian_degree(F: MultiPoly, e: int, eps: float | None = None) -> AnnBasis:
    """Basis of Ann(J_F)_e, computed from the stacked partial derivatives."""
    _check_form(F)
    d = F.degree()
    if not 0 <= e <= d:
        raise ValueError(f"e={e} outside 0..{d}")
    cols = monomials(F.nvars, e)
    if e == d:
        one = Fraction(1)
        vecs = [[one if i == j else Fraction(0) for i in range(len(cols))] for j in range(len(cols))]
        return AnnBasis(e, _basis_from_kernel(vecs, cols, F.nvars))
    rows = monomials(F.nvars, d - 1 - e)
    stacked = []
    for i in range(F.nvars):
        partial = F.derivative(i)
        if partial.is_zero():
            continue
        stacked.extend(_cat_entries(partial, e, rows, cols))
    vecs = linalg.kernel(stacked, len(cols), eps)
    basis = AnnBasis(e, _basis_from_kernel(vecs, cols, F.nvars))
    direct = ann_degree(F, e, eps)
    if direct.dim != basis.dim:
        raise ArithmeticError("Ann(J_F)_e differs from Ann(F)_e below the top degree")
    return basis


def span_equal(a, b, eps: float | None = None) -> bool:
    """Whether two lists of homogeneous dual forms of equal degree span the same space."""
    polys = list(a) + list(b)
    if not polys:
        return True
    keys = sorted({e for p in polys for e in p.terms}, reverse=True)
    ma = [[p.coeff(k) for k in keys] for p in a]
    mb = [[p.coeff(k) for k in keys] for p in b]
    ra = linalg.rank(ma, eps) if ma else 0
    rb = linalg.rank(mb, eps) if mb else 0
    return ra == rb == linalg.rank(ma + mb, eps)


def essential_reduction(F: MultiPoly, eps: float | None = None):
    """Write F in its essential variables.

    Returns ``(G, M)`` where ``G`` has ``m = nvars - dim Ann(F)_1`` variables
    and ``F(M z)`` equals ``G(z_0..z_{m-1})``.  A point ``p`` of a
    decomposition of ``G`` maps to the point ``M^{-T} (p, 0, ..., 0)`` for F.
    """
    n = F.nvars
    kernel = ann_degree(F, 1, eps).basis
    kvecs = [[p.coeff(tuple(int(i == j) for i in range(n))) for j in range(n)] for p in kernel]
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        trial = cols + [e] + kvecs
        if linalg.rank(trial, eps) == len(trial):
            cols.append(e)
        if len(cols) + len(kvecs) == n:
            break
    basis = cols + kvecs
    m_mat = linalg.transpose(basis)
    Fz = gl_substitute(F, m_mat)
    m = len(cols)
    G = Fz.drop_vars(range(m))
    return G, m_mat
