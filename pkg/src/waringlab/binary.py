"""Binary forms as coefficient lists.

A binary form of degree s is stored as ``[a_0, ..., a_s]`` with ``a_k`` the
coefficient of ``v0^(s-k) * v1^k``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg
from .field import QuadExt, embed, is_exact, sqrt_rational
from .poly import MultiPoly


def coeffs_of(p: MultiPoly) -> list:
    if p.nvars != 2 or not p.is_homogeneous() or p.is_zero():
        raise ValueError("expected a nonzero binary form")
    s = p.degree()
    return [p.coeff((s - k, k)) for k in range(s + 1)]


def from_coeffs(a, ring: str) -> MultiPoly:
    s = len(a) - 1
    return MultiPoly(2, {(s - k, k): c for k, c in enumerate(a)}, ring)


def sylvester_matrix(a, b) -> list:
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(a) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(b) + [zero] * (size - n - 1 - i))
    return rows


def gcd_degree(a, b, eps: float | None = None) -> int:
    """Degree of the gcd of two binary forms with formal degrees len-1."""
    m, n = len(a) - 1, len(b) - 1
    if m + n == 0:
        return 0
    return m + n - linalg.rank(sylvester_matrix(a, b), eps)


def partials(a):
    s = len(a) - 1
    d0 = [a[k] * (s - k) for k in range(s)]
    d1 = [a[k] * k for k in range(1, s + 1)]
    return d0, d1


def distinct_root_count(a, eps: float | None = None) -> int:
    """Number of distinct points of P^1 where the binary form vanishes."""
    s = len(a) - 1
    if s <= 1:
        return s
    d0, d1 = partials(a)
    return s - gcd_degree(d0, d1, eps)


def is_squarefree(a, eps: float | None = None) -> bool:
    if all((x == 0) for x in a):
        return False
    return distinct_root_count(a, eps) == len(a) - 1


# ---------------------------------------------------------------------------
# roots


def _horner(a, t):
    acc = 0
    for c in a:
        acc = acc * t + c
    return acc


def numeric_roots(a, polish_steps: int = 8) -> list[tuple[complex, complex]]:
    """Roots of a binary form as points (v0 : v1), Newton-polished."""
    coeffs = [embed(c) for c in a]
    k = 0
    while k < len(coeffs) and (coeffs[k] == 0 if not is_exact(a[k]) else a[k] == 0):
        k += 1
    points: list[tuple[complex, complex]] = [(1 + 0j, 0j)] * k
    poly = np.array(coeffs[k:], dtype=complex)
    if len(poly) <= 1:
        return points
    deriv = np.polyder(poly)
    for z in np.roots(poly):
        for _ in range(polish_steps):
            fz = np.polyval(poly, z)
            dz = np.polyval(deriv, z)
            if dz == 0:
                break
            step = fz / dz
            z = z - step
            if abs(step) <= 1e-16 * max(1.0, abs(z)):
                break
        points.append((complex(z), 1 + 0j))
    return points


def _rationalize(x: float, bound: int = 10**6) -> Fraction:
    return Fraction(x).limit_denominator(bound)


def exact_roots(a) -> list | None:
    """Exact roots of a squarefree rational binary form, if all of them lie in
    Q or in a single field Q(sqrt d).  Returns points ``(v0, v1)`` or ``None``.
    """
    if not all(isinstance(c, Fraction) or isinstance(c, int) for c in a):
        return None
    a = [Fraction(c) for c in a]
    k = 0
    while k < len(a) and a[k] == 0:
        k += 1
    found: list = [(Fraction(1), Fraction(0))] * k
    p = a[k:]
    if len(p) <= 1:
        return found
    approx = [pt[0] for pt in numeric_roots(p)]
    radicand = None
    left = []
    for z in approx:
        if abs(z.imag) < 1e-7:
            r = _rationalize(z.real)
            if _horner(p, r) == 0:
                found.append((r, Fraction(1)))
                continue
        left.append(z)
    while left:
        z = left.pop(0)
        order = sorted(range(len(left)), key=lambda j: abs(left[j] - z.conjugate()))
        for j in order:
            w = left[j]
            s, pr = z + w, z * w
            if abs(s.imag) > 1e-7 or abs(pr.imag) > 1e-7:
                continue
            s_q, pr_q = _rationalize(s.real), _rationalize(pr.real)
            disc = s_q * s_q / 4 - pr_q
            if abs(disc.numerator * disc.denominator) > 10**12:
                continue
            try:
                root = sqrt_rational(disc)
            except ValueError:
                continue
            if not isinstance(root, QuadExt):
                continue
            r1, r2 = s_q / 2 + root, s_q / 2 - root
            if _horner(p, r1) != 0 or _horner(p, r2) != 0:
                continue
            if radicand is None:
                radicand = root.d
            elif radicand != root.d:
                return None
            found.extend([(r1, Fraction(1)), (r2, Fraction(1))])
            left.pop(j)
            break
        else:
            return None
    return found
