"""Explicit Waring decompositions and their verification by linear algebra.

A decomposition of a form F of degree d is a list of points p_j together
with coefficients c_j such that F = sum_j c_j (p_j . x)^d.  By the apolarity
lemma this is the same as I(Z) inside Ann(F), so verification reduces to one
linear system in the monomial basis of R_d.
"""

from __future__ import annotations

import itertools
import random
import dataclasses
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import binary, linalg
from .apolarity import ann_degree
from .families import normal_form
from .field import (
    MixedDomainError,
    QuadExt,
    default_tolerance,
    embed,
    field_name,
    field_of,
    is_exact,
    parse_field_name,
    scalar_from_json,
    scalar_to_json,
    sqrt_rational,
    to_scalar,
)
from .poly import MultiPoly, ProjectivePoint, apply_diff, monomials, multinomial, power_of_linear
from .ranks import PreconditionError, sylvester_rank


class DecompositionError(RuntimeError):
    """A constructor could not produce a verified decomposition."""


@dataclass
class Decomposition:
    points: list
    coeffs: list | None
    degree: int
    field: object = "Q"
    residual: float = 0.0
    poly: MultiPoly | None = None
    notes: dict = dataclasses.field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    @property
    def exact(self) -> bool:
        return self.field != "C"

    def to_json(self, include_poly: bool = True) -> dict:
        out = {
            "degree": self.degree,
            "field": field_name(self.field),
            "points": [[scalar_to_json(c) for c in p.coords] for p in self.points],
            "coeffs": None if self.coeffs is None else [scalar_to_json(c) for c in self.coeffs],
            "residual": "0" if self.exact else repr(float(self.residual)),
        }
        if include_poly and self.poly is not None:
            out["poly"] = self.poly.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> Decomposition:
        points = [ProjectivePoint([scalar_from_json(c) for c in p]) for p in obj["points"]]
        coeffs = obj.get("coeffs")
        if coeffs is not None:
            coeffs = [scalar_from_json(c) for c in coeffs]
        poly = MultiPoly.from_json(obj["poly"]) if obj.get("poly") else None
        res = obj.get("residual", "0")
        return cls(points, coeffs, int(obj["degree"]), parse_field_name(obj.get("field", "Q")),
                   float(res), poly)


@dataclass
class VerificationResult:
    status: str
    coeffs: list | None
    residual: float
    length: int
    field: object = "Q"

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "length": self.length,
            "field": field_name(self.field),
            "residual": "0" if self.field != "C" and self.verified else repr(float(self.residual)),
            "coeffs": _coeffs_json(self.coeffs),
        }


def _coeffs_json(coeffs):
    if coeffs is None:
        return None
    return [_coeffs_json(c) if isinstance(c, list) else scalar_to_json(c) for c in coeffs]


# ---------------------------------------------------------------------------
# verification


def points_distinct(points, eps: float | None = None) -> bool:
    for p, r in itertools.combinations(points, 2):
        if p.same_as(r, eps):
            return False
    return True


def _columns(points, d: int, keys):
    cols = []
    for p in points:
        pw = power_of_linear(list(p.coords), d, len(p.coords))
        cols.append([pw[k] for k in keys])
    return cols


def _numeric_columns(points, d: int, keys):
    pts = np.array([[embed(c) for c in p.coords] for p in points], dtype=complex)
    mult = np.array([multinomial(k) for k in keys], dtype=float)
    exps = np.array(keys, dtype=int)
    # column j: multinomial(k) * prod_i p_ji^k_i
    powers = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
    return (powers * mult[None, :]).T


def _solve_span(points, targets, d: int, nvars: int, eps=None):
    """Express each target form as a combination of the d-th powers.

    Returns ``(coeff_lists, residual, field)``; coeff_lists is None when an
    exact system is inconsistent.
    """
    keys = monomials(nvars, d)
    values = [c for p in points for c in p.coords] + [c for t in targets for c in t.terms.values()]
    fld = field_of(values)
    if fld != "C":
        try:
            cols = _columns(points, d, keys)
            mat = [[col[r] for col in cols] for r in range(len(keys))]
            out = []
            for t in targets:
                sol = linalg.solve(mat, [t.coeff(k) for k in keys])
                if sol is None:
                    return None, float("inf"), fld
                out.append(sol)
            return out, 0.0, fld
        except MixedDomainError:
            fld = "C"
    a = _numeric_columns(points, d, keys)
    out = []
    worst = 0.0
    for t in targets:
        f = np.array([embed(t.coeff(k)) for k in keys], dtype=complex)
        c, *_ = np.linalg.lstsq(a, f, rcond=None)
        res = float(np.linalg.norm(a @ c - f) / max(np.linalg.norm(f), 1e-300))
        worst = max(worst, res)
        out.append([complex(x) for x in c])
    return out, worst, "C"


def _check_points(F: MultiPoly, points):
    if not points:
        raise PreconditionError("empty decomposition")
    for p in points:
        if len(p) != F.nvars:
            raise PreconditionError(f"point {p} has {len(p)} coordinates, F has {F.nvars} variables")


def verify_waring(F: MultiPoly, Z, eps: float | None = None) -> VerificationResult:
    """Check F = sum c_j (p_j . x)^d for some coefficients c_j."""
    points = Z.points if isinstance(Z, Decomposition) else list(Z)
    _check_points(F, points)
    tol = default_tolerance() if eps is None else eps
    if not points_distinct(points, tol):
        return VerificationResult("failed", None, float("inf"), len(points), field_of([]))
    d = F.degree()
    sols, res, fld = _solve_span(points, [F], d, F.nvars, tol)
    if sols is None or res > tol:
        return VerificationResult("failed", None if sols is None else sols[0], res, len(points), fld)
    return VerificationResult("verified", sols[0], res, len(points), fld)


def verify_partially_symmetric(F: MultiPoly, Z, eps: float | None = None) -> VerificationResult:
    """Check that every partial y_i[F] lies in the span of the (d-1)-th powers."""
    points = Z.points if isinstance(Z, Decomposition) else list(Z)
    _check_points(F, points)
    tol = default_tolerance() if eps is None else eps
    if not points_distinct(points, tol):
        return VerificationResult("failed", None, float("inf"), len(points), field_of([]))
    d = F.degree()
    partials = [F.derivative(i) for i in range(F.nvars)]
    targets = [p for p in partials if not p.is_zero()]
    sols, res, fld = _solve_span(points, targets, d - 1, F.nvars, tol)
    if sols is None or res > tol:
        return VerificationResult("failed", None, res, len(points), fld)
    return VerificationResult("verified", sols, res, len(points), fld)


def finalize(F: MultiPoly, points, eps: float | None = None, notes=None) -> Decomposition:
    """Solve for coefficients and refuse to return anything unverified."""
    result = verify_waring(F, points, eps)
    if not result.verified:
        raise DecompositionError(f"constructed point set failed verification (residual {result.residual:.3g})")
    return Decomposition(list(points), result.coeffs, F.degree(), result.field, result.residual, F,
                         dict(notes or {}))


# ---------------------------------------------------------------------------
# binary forms


def _coefficient_grid(m: int, bound: int):
    """Small integer vectors ordered by max-norm, first nonzero entry positive."""
    for b in range(1, bound + 1):
        for vec in itertools.product(range(-b, b + 1), repeat=m):
            if max(abs(v) for v in vec) != b:
                continue
            first = next(v for v in vec if v != 0)
            if first > 0:
                yield vec


def _binary_points(roots, nvars: int, positions):
    pts = []
    for v0, v1 in roots:
        coords = [Fraction(0)] * nvars
        coords[positions[0]] = v0
        coords[positions[1]] = v1
        pts.append(ProjectivePoint(coords))
    return pts


def binary_decomposition(F: MultiPoly, positions=(0, 1), nvars: int | None = None,
                         avoid_axes: bool = False, seed: int = 0,
                         eps: float | None = None, field_hint=None) -> Decomposition:
    """Decomposition of a binary form from a squarefree apolar form.

    ``F`` lives in 2 variables; the points are placed at ``positions`` of an
    ambient space with ``nvars`` coordinates.  With ``avoid_axes`` the roots
    (1:0) and (0:1) are skipped so that blocks glued along a shared variable
    stay disjoint.  Exact roots in Q or in Q(sqrt field_hint) are preferred
    over exact roots in another quadratic field.
    """
    if F.nvars != 2:
        raise PreconditionError("binary_decomposition expects a form in 2 variables")
    nvars = nvars or 2
    r = sylvester_rank(F, eps).rank
    d = F.degree()
    if r > d:
        basis = [MultiPoly.monomial(e, 1, "S") for e in monomials(2, r)]
    else:
        basis = ann_degree(F, r, eps).basis
    embedded = F.embed_vars(nvars, list(positions))
    fallback = None
    other_field = None
    tried = 0
    for vec in _coefficient_grid(len(basis), 4):
        tried += 1
        if tried > 400:
            break
        delta = MultiPoly.zero(2, "S")
        for c, b in zip(vec, basis):
            if c:
                delta = delta + b * c
        a = binary.coeffs_of(delta) if not delta.is_zero() else None
        if a is None or len(a) - 1 != r or not binary.is_squarefree(a, eps):
            continue
        if avoid_axes and (a[0] == 0 or a[-1] == 0):
            continue
        roots = binary.exact_roots(a)
        if roots is not None:
            pts = _binary_points(roots, nvars, positions)
            fld = field_of(c for p in pts for c in p.coords)
            if field_hint is not None and fld not in ("Q", field_hint):
                if other_field is None:
                    other_field = (pts, delta)
                continue
            try:
                return finalize(embedded, pts, eps, {"apolar": str(delta)})
            except DecompositionError:
                continue
        if fallback is None:
            fallback = (a, delta)
    if other_field is not None:
        return finalize(embedded, other_field[0], eps, {"apolar": str(other_field[1])})
    if fallback is None:
        rng = random.Random(seed)
        for _ in range(50):
            delta = MultiPoly.zero(2, "S")
            for b in basis:
                delta = delta + b * Fraction(rng.randint(-50, 50), rng.randint(1, 7))
            if delta.is_zero():
                continue
            a = binary.coeffs_of(delta)
            if len(a) - 1 == r and binary.is_squarefree(a, eps) and not (avoid_axes and (a[0] == 0 or a[-1] == 0)):
                fallback = (a, delta)
                break
    if fallback is None:
        raise DecompositionError("no squarefree apolar form found")
    a, delta = fallback
    roots = binary.numeric_roots(a)
    return finalize(embedded, _binary_points(roots, nvars, positions), eps, {"apolar": str(delta)})


# ---------------------------------------------------------------------------
# pairs (a x_0 +- x_i) for cubics x_0 * sum x_i^2


def _pair_scalars(m: int, total) -> list:
    """Nonzero a_1..a_m with sum a_i^2 = total, using Q or Q(i)."""
    i_unit = QuadExt(0, 1, -1)
    total = Fraction(total)
    if total == 0:
        if m < 2:
            raise PreconditionError("need at least two squares for a zero sum")
        if m % 2 == 0:
            return [Fraction(1), i_unit] * (m // 2)
        return [Fraction(3), Fraction(4), 5 * i_unit] + [Fraction(1), i_unit] * ((m - 3) // 2)
    if total == 3:
        if m == 1:
            return [sqrt_rational(3)]
        if m % 2 == 0:
            return [Fraction(2), i_unit] + [Fraction(1), i_unit] * ((m - 2) // 2)
        return [Fraction(1)] * 3 + [Fraction(1), i_unit] * ((m - 3) // 2)
    raise ValueError("only totals 0 and 3 are tabulated")


def _pair_points(nvars: int, pivot: int, others, scalars):
    pts = []
    for idx, a in zip(others, scalars):
        for s in (1, -1):
            coords = [Fraction(0)] * nvars
            coords[pivot] = a
            coords[idx] = Fraction(s)
            pts.append(ProjectivePoint(coords))
    return pts


def cubic_base_decomposition(n: int, eps: float | None = None) -> Decomposition:
    """2(n-1) points for x1(x2^2 + ... + xn^2), written in n variables."""
    if n < 3:
        raise PreconditionError("cubic_base_decomposition needs n >= 3")
    nv = n
    x = [MultiPoly.var(i, nv) for i in range(nv)]
    F = x[0] * sum((x[i] ** 2 for i in range(1, nv)), MultiPoly.zero(nv))
    scalars = _pair_scalars(n - 1, 0)
    return finalize(F, _pair_points(nv, 0, range(1, nv), scalars), eps, {"construction": "pairs"})


def _hm_form(d: int, n: int, variant: int) -> MultiPoly:
    nv = n + 1
    x = [MultiPoly.var(i, nv) for i in range(nv)]
    tail = sum((x[i] ** 2 for i in range(2, nv)), MultiPoly.zero(nv))
    if variant == 1:
        q = x[0] ** 2 + x[1] ** 2 + tail
    elif variant == 2:
        q = x[1] ** 2 + tail
    elif variant == 3:
        q = x[0] * x[1] + tail
    else:
        raise PreconditionError("variant must be 1, 2 or 3")
    return x[0] ** (d - 2) * q


def high_multiplicity_decomposition(d: int, n: int, variant: int, eps: float | None = None) -> Decomposition:
    """Decompositions of x0^(d-2) q for the three quadrics of the proposition.

    Lengths are (d-1)n, (d-1)n and (d-1)n + 1 for variants 1, 2, 3.
    """
    if d < 3 or n < 2:
        raise PreconditionError("need d >= 3 and n >= 2")
    F = _hm_form(d, n, variant)
    nv = n + 1
    if d == 3:
        return _cubic_hm(F, n, variant, eps)
    y = [MultiPoly.var(i, 2) for i in range(2)]
    points = []
    first = 1 if variant == 2 else 2
    hint = None
    for i in range(first, nv):
        block = binary_decomposition(y[0] ** (d - 2) * y[1] ** 2, (0, i), nv, True, eps=eps)
        hint = block.field if block.field not in ("Q", "C") else hint
        points += block.points
    if variant == 1:
        piece = y[0] ** (d - 2) * (y[0] ** 2 + y[1] ** 2)
    elif variant == 3:
        piece = y[0] ** (d - 1) * y[1]
    if variant != 2:
        points += binary_decomposition(piece, (0, 1), nv, True, eps=eps, field_hint=hint).points
    return finalize(F, points, eps, {"construction": f"binary blocks, variant {variant}"})


def _cubic_hm(F: MultiPoly, n: int, variant: int, eps=None) -> Decomposition:
    nv = n + 1
    if variant == 1:
        pts = _pair_points(nv, 0, range(1, nv), _pair_scalars(n, 3))
    elif variant == 2:
        pts = _pair_points(nv, 0, range(1, nv), _pair_scalars(n, 0))
    else:
        # pairs on x2..xn contribute (T/3) x0^3, so the binary piece is
        # x0^2 x1 - (T/3) x0^3 = x0^2 x1 - s x0^3
        if n == 2:
            scalars, s = [Fraction(1)], Fraction(1, 3)
        else:
            scalars, s = _pair_scalars(n - 1, 0), Fraction(0)
        pts = _pair_points(nv, 0, range(2, nv), scalars)
        # an apolar cubic t^3 + 3s t^2 + ... with three rational roots
        third = -3 * s - 3
        roots = [Fraction(1), Fraction(2), third]
        if len(set(roots)) < 3 or third == 0:
            roots = [Fraction(1), Fraction(3), -3 * s - 4]
        for r in roots:
            coords = [Fraction(0)] * nv
            coords[0], coords[1] = r, Fraction(1)
            pts.append(ProjectivePoint(coords))
    return finalize(F, pts, eps, {"construction": f"pairs, variant {variant}"})


# ---------------------------------------------------------------------------
# F4 and F8,0


def lift_and_glue_F4(n: int, lam=1, eps: float | None = None) -> Decomposition:
    """4(n-1) points for x0x1(x2^2 + ... + xn^2) on the hyperplanes y0 = +-lam y1."""
    lam = to_scalar(lam)
    if lam == 0:
        raise PreconditionError("lambda must be nonzero")
    base = cubic_base_decomposition(n, eps)
    pts = []
    for sign in (1, -1):
        for p in base.points:
            a = list(p.coords)
            pts.append(ProjectivePoint([sign * lam * a[0]] + a))
    return finalize(normal_form("F4", n), pts, eps, {"construction": "lift and glue", "lambda": str(lam)})


def _f80_form(n: int) -> MultiPoly:
    nv = n + 1
    x = [MultiPoly.var(i, nv) for i in range(nv)]
    return x[0] * x[1] * sum((x[i] ** 2 for i in range(nv)), MultiPoly.zero(nv))


def _f80_small(n: int):
    """Points of (y0^2 - y1^2, y1^2 - 3y2^2[, y2^2 - y3^2]) for n = 2, 3."""
    r3 = sqrt_rational(3)
    pts = []
    for s in itertools.product((1, -1), repeat=2 if n == 2 else 3):
        coords = [s[0] * s[1] * r3, s[1] * r3, Fraction(1)]
        if n == 3:
            coords.append(Fraction(s[2]))
        pts.append(ProjectivePoint(coords))
    return pts


def _rotate_23(points, lam):
    """Rotate the (x2, x3) plane by the rational rotation with tan(theta/2) = (lam-1)/lam.

    x0 x1 (x0^2 + ... + x3^2) is invariant, so the image is again a
    decomposition; lam = 1 is the identity.
    """
    t = (lam - 1) / lam
    c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    out = []
    for p in points:
        a = list(p.coords)
        a[2], a[3] = c * a[2] - s * a[3], s * a[2] + c * a[3]
        out.append(ProjectivePoint(a))
    return out


def f80_decomposition(n: int, lam=1, eps: float | None = None) -> Decomposition:
    """4(n-1) points for x0x1(x0^2 + ... + xn^2).

    ``lam`` selects a member of a family of decompositions: a rotation of
    the (x2, x3) plane at n = 3 and the lift-and-glue parameter for n >= 4.
    At n = 2 the decomposition is unique (Ann_2 is a single pencil), so only
    lam = +-1 is accepted there.
    """
    lam = to_scalar(lam)
    if lam == 0:
        raise PreconditionError("lambda must be nonzero")
    if n < 2:
        raise PreconditionError("f80_decomposition needs n >= 2")
    F = _f80_form(n)
    if n == 2:
        if lam * lam != 1:
            raise PreconditionError("at n = 2 the length-4 decomposition is unique; lambda must be +-1")
        return finalize(F, _f80_small(2), eps, {"construction": "binomial ideal"})
    if n == 3:
        pts = _rotate_23(_f80_small(3), lam)
        return finalize(F, pts, eps, {"construction": "binomial ideal, rotated", "lambda": str(lam)})
    nv = n + 1
    pts = [ProjectivePoint(list(p.coords) + [Fraction(0)] * (nv - 3)) for p in _f80_small(2)]
    glue = lift_and_glue_F4(n - 1, lam, eps)
    for p in glue.points:
        c = list(p.coords)
        pts.append(ProjectivePoint(c[:2] + [Fraction(0)] + c[2:]))
    return finalize(F, pts, eps, {"construction": "n=2 block plus lift and glue", "lambda": str(lam)})


# ---------------------------------------------------------------------------
# G + H splittings


GH_FAMILIES = ("F5", "F6", "F7", "F8-nonzero", "F9", "F10")


@dataclass
class GHSplit:
    family: str
    n: int
    G: MultiPoly  # ternary
    H: MultiPoly  # in n+1 variables
    frame: list   # rows: linear forms x0, z1, x3, ..., xn
    scale: object

    @property
    def G_full(self) -> MultiPoly:
        return self.G.embed_vars(self.n + 1, [0, 1, 2])


def split_GH(family: str, n: int, lam=None) -> GHSplit:
    """Write a normal form as G + H with G ternary and H of F8,0 type.

    H equals ``scale * x0 z1 (x0^2 + z1^2 + x3^2 + ... + xn^2)`` where z1 is
    the second row of ``frame``.
    """
    if family not in GH_FAMILIES:
        raise PreconditionError(f"split_GH does not cover {family}")
    if n < 3:
        raise PreconditionError("split_GH needs n >= 3")
    from .families import default_lambda

    if lam is None:
        lam = default_lambda(family)
    lam = to_scalar(lam) if lam is not None else None
    nv = n + 1
    t = [MultiPoly.var(i, 3) for i in range(3)]
    x0, x1, x2 = t
    scale = Fraction(1)
    z1 = [Fraction(0), Fraction(1), Fraction(0)]
    if family == "F5":
        G = x0 * x1 * (-x0 ** 2 - x1 ** 2 + x1 * x2)
    elif family == "F6":
        G = x0 * x1 * (-x0 ** 2 - x1 ** 2 + x2 ** 2)
        r2 = sqrt_rational(2)
        z1 = [Fraction(0), r2, Fraction(0)]
        scale = 1 / r2
    elif family == "F7":
        ell = x0 + x1
        G = x0 * ell * (x0 ** 2 * -2 - x0 * x1 * 2 + x2 ** 2)
        z1 = [Fraction(1), Fraction(1), Fraction(0)]
    elif family == "F8-nonzero":
        if lam == 0:
            raise PreconditionError("F8-nonzero requires lambda != 0")
        ell = x0 * lam + x1
        G = x0 * ell * (x0 ** 2 * (-lam * lam) - x0 * x1 * (2 * lam) + x2 ** 2)
        z1 = [lam, Fraction(1), Fraction(0)]
    elif family == "F9":
        G = x0 * x1 * (-x1 ** 2 + x1 * x2)
    else:
        ell = x0 * (-lam * lam) + x1 + x2 * lam
        G = x0 * ell * (-x0 ** 2 - ell ** 2 + x0 * x1 + x2 ** 2)
        z1 = [-lam * lam, Fraction(1), lam]
    frame = []
    for i in range(nv):
        if i == 2:
            continue
        row = [Fraction(0)] * nv
        if i == 1:
            row[:3] = z1
        else:
            row[i] = Fraction(1)
        frame.append(row)
    z = MultiPoly.linear(frame[1])
    xs = [MultiPoly.var(i, nv) for i in range(nv)]
    tail = sum((xs[i] ** 2 for i in range(3, nv)), MultiPoly.zero(nv))
    H = xs[0] * z * (xs[0] ** 2 + z ** 2 + tail) * scale
    F = normal_form(family, n, lam)
    if G.embed_vars(nv, [0, 1, 2]) + H != F:
        raise AssertionError(f"G + H does not reproduce {family}")
    return GHSplit(family, n, G, H, frame, scale)


def _pullback(frame, w) -> list:
    """Coefficient vector of the linear form sum_k w_k * frame_k."""
    nv = len(frame[0])
    if field_of(list(w) + [c for row in frame for c in row]) == "C":
        w = [embed(c) for c in w]
        frame = [[embed(c) for c in row] for row in frame]
    out = []
    for j in range(nv):
        acc = Fraction(0)
        for k, row in enumerate(frame):
            if row[j] != 0:
                acc = acc + w[k] * row[j]
        out.append(acc)
    return out


def g6_decomposition(eps: float | None = None) -> Decomposition:
    """The four points cut by (y1^2 + 3y2^2, y0^2 + 3y2^2)."""
    r = sqrt_rational(-3)
    pts = [ProjectivePoint([s0 * r, s1 * r, Fraction(1)]) for s0 in (1, -1) for s1 in (1, -1)]
    G = split_GH("F6", 3).G
    return finalize(G, pts, eps, {"construction": "ideal (y1^2+3y2^2, y0^2+3y2^2)"})


# ---------------------------------------------------------------------------
# numeric search for ternary quartics


def _power_system(P, keys, mult, exps):
    """Values and Jacobian of sum_j (p_j . x)^d in the monomial basis."""
    powers = np.prod(P[:, None, :] ** exps[None, :, :], axis=2)  # r x K
    vals = (powers * mult[None, :]).sum(axis=0)
    r, m = P.shape
    jac = np.zeros((len(keys), r * m), dtype=complex)
    for k in range(m):
        e = exps.copy()
        coef = e[:, k].astype(float)
        e[:, k] = np.maximum(e[:, k] - 1, 0)
        dp = np.prod(P[:, None, :] ** e[None, :, :], axis=2) * (coef * mult)[None, :]
        for j in range(r):
            jac[:, j * m + k] = dp[j]
    return vals, jac


def numeric_waring(F: MultiPoly, length: int, seed: int = 0, restarts: int = 32,
                   iters: int = 200, eps: float | None = None) -> Decomposition:
    """Gauss-Newton search for ``length`` points with F = sum (p_j . x)^d.

    The system is underdetermined in general; minimum-norm steps converge
    quadratically near a solution.  Restarts use seeds ``seed, seed+1, ...``.
    """
    d = F.degree()
    keys = monomials(F.nvars, d)
    exps = np.array(keys, dtype=int)
    mult = np.array([multinomial(k) for k in keys], dtype=float)
    target = np.array([embed(F.coeff(k)) for k in keys], dtype=complex)
    norm = max(np.linalg.norm(target), 1e-300)
    tol = default_tolerance() if eps is None else eps
    for attempt in range(restarts):
        rng = np.random.default_rng(seed + attempt)
        P = (rng.standard_normal((length, F.nvars)) + 1j * rng.standard_normal((length, F.nvars))) * 0.7
        mu = 1e-3
        for _ in range(iters):
            vals, jac = _power_system(P, keys, mult, exps)
            res = vals - target
            err = np.linalg.norm(res) / norm
            if err < 1e-14:
                break
            # Levenberg-Marquardt step in the minimum-norm form
            jjh = jac @ jac.conj().T
            step = jac.conj().T @ np.linalg.solve(jjh + mu * np.eye(len(keys)), -res)
            trial = P + step.reshape(P.shape)
            tvals, _ = _power_system(trial, keys, mult, exps)
            terr = np.linalg.norm(tvals - target) / norm
            if terr < err:
                P = trial
                mu = max(mu / 10, 1e-15)
            else:
                mu = min(mu * 10, 1e6)
        vals, _ = _power_system(P, keys, mult, exps)
        if np.linalg.norm(vals - target) / norm > 1e-11:
            continue
        pts = [ProjectivePoint([complex(c) for c in row]) for row in P]
        try:
            out = finalize(F, pts, tol)
        except (DecompositionError, ValueError):
            continue
        out.notes.update({"construction": "numeric", "seed": seed + attempt})
        return out
    raise DecompositionError(f"numeric search failed after {restarts} restarts (seed {seed})")


# ---------------------------------------------------------------------------
# family dispatcher


def _h_block(split: GHSplit, lam_decomp, eps=None) -> list:
    m = split.n - 1
    block = f80_decomposition(m, lam_decomp, eps)
    return [ProjectivePoint(_pullback(split.frame, list(p.coords))) for p in block.points]


def family_upper_decomposition(family: str, n: int, lam=None, d: int = 4, seed: int = 0,
                               eps: float | None = None, mu=1) -> Decomposition:
    """A verified decomposition of the normal form of a family.

    ``lam`` is the family parameter (F8 and F10 only); ``mu`` is the free
    parameter of the F4 / F8,0 constructions.  ``d`` applies to F1-F3.
    """
    from .families import default_lambda

    if n < 3:
        raise PreconditionError("family decompositions need n >= 3")
    if family in ("F1", "F2", "F3"):
        out = high_multiplicity_decomposition(d, n, int(family[1]), eps)
        out.notes["family"] = family
        return out
    if d != 4:
        raise PreconditionError(f"{family} is a quartic family")
    if family == "F4":
        return lift_and_glue_F4(n, mu, eps)
    if family == "F8-zero":
        if lam is not None and to_scalar(lam) != 0:
            raise PreconditionError("F8-zero has lambda = 0")
        return f80_decomposition(n, mu, eps)
    if family not in GH_FAMILIES:
        raise PreconditionError(f"unknown family {family!r}")
    if lam is None:
        lam = default_lambda(family)
    split = split_GH(family, n, lam)
    F = normal_form(family, n, lam)
    if family == "F6":
        g_pts = g6_decomposition(eps).points
    else:
        g_pts = numeric_waring(split.G, 6, seed=seed, eps=eps).points
    nv = n + 1
    pts = [ProjectivePoint(list(p.coords) + [Fraction(0)] * (nv - 3)) for p in g_pts]
    pts += _h_block(split, mu, eps)
    out = finalize(F, pts, eps, {"construction": "G + H", "family": family, "seed": seed})
    return out
