"""The ten normal forms of concise reducible quartics l0*l1*q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .apolarity import is_concise
from .field import to_scalar
from .poly import MultiPoly, ProjectivePoint, hessian, restrict_to_hyperplane
from .ranks import BoundReport, PreconditionError, quadratic_rank

FAMILIES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8-zero", "F8-nonzero", "F9", "F10")
LAMBDA_FAMILIES = ("F8", "F8-zero", "F8-nonzero", "F10")

_ALIASES = {"F80": "F8-zero", "F8,0": "F8-zero", "F8-0": "F8-zero", "F8": "F8"}


@dataclass(frozen=True)
class FamilyTag:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def base(self) -> str:
        return "F8" if self.family.startswith("F8") else self.family

    @property
    def lambda_class(self) -> str | None:
        if self.family.startswith("F8"):
            return self.family.split("-")[1]
        return None

    def __str__(self):
        return self.family

    def to_json(self) -> dict:
        out = {"family": self.base, "n": self.n}
        if self.lambda_class:
            out["lambda_class"] = self.lambda_class
        return out


def resolve_family(name: str, lam=None) -> str:
    """Canonical family id from a user string; ``F8`` is resolved via lambda."""
    key = name.strip().upper().replace("_", "-").replace("F8-ZERO", "F8-zero").replace("F8-NONZERO", "F8-nonzero")
    key = _ALIASES.get(key, key)
    if key == "F8":
        if lam is None:
            raise ValueError("F8 needs a lambda value (or use F8-zero / F8-nonzero)")
        return "F8-zero" if to_scalar(lam) == 0 else "F8-nonzero"
    if key not in FAMILIES:
        raise ValueError(f"unknown family {name!r}")
    return key


def default_lambda(family: str):
    if family == "F8-zero":
        return Fraction(0)
    if family in ("F8-nonzero", "F10"):
        return Fraction(1)
    return None


def _sq_sum(nv: int, start: int) -> MultiPoly:
    out = MultiPoly.zero(nv)
    for i in range(start, nv):
        out = out + MultiPoly.var(i, nv) ** 2
    return out


def normal_form_factors(family: str, n: int, lam=None):
    """Return ``(l0, l1, q)`` for the normal form of a family."""
    if n < 3:
        raise PreconditionError("normal forms are defined for n >= 3")
    nv = n + 1
    x = [MultiPoly.var(i, nv) for i in range(nv)]
    if lam is None:
        lam = default_lambda(family)
    lam = to_scalar(lam) if lam is not None else None
    if family == "F8-zero" and lam != 0:
        raise PreconditionError("F8-zero requires lambda = 0")
    if family == "F8-nonzero" and lam == 0:
        raise PreconditionError("F8-nonzero requires lambda != 0")
    if family == "F1":
        return x[0], x[0], _sq_sum(nv, 0)
    if family == "F2":
        return x[0], x[0], _sq_sum(nv, 1)
    if family == "F3":
        return x[0], x[0], x[0] * x[1] + _sq_sum(nv, 2)
    if family == "F4":
        return x[0], x[1], _sq_sum(nv, 2)
    if family == "F5":
        return x[0], x[1], x[1] * x[2] + _sq_sum(nv, 3)
    if family == "F6":
        return x[0], x[1], _sq_sum(nv, 1)
    if family == "F7":
        return x[0], x[0] + x[1], _sq_sum(nv, 1)
    if family in ("F8-zero", "F8-nonzero"):
        return x[0], x[0] * lam + x[1], _sq_sum(nv, 0)
    if family == "F9":
        return x[0], x[1], x[0] ** 2 + x[1] * x[2] + _sq_sum(nv, 3)
    if family == "F10":
        return x[0], x[0] * (-lam * lam) + x[1] + x[2] * lam, x[0] * x[1] + _sq_sum(nv, 2)
    raise ValueError(f"unknown family {family!r}")


def tangent_f10_factors(n: int, lam=1):
    """F10 factors with l1 = -(lam^2/4) x0 + x1 + lam x2.

    This line is tangent to x0x1 + x2^2 + ... for every lam.  The literal
    normal form uses -lam^2 x0, which is tangent only at lam = 0.
    """
    l0, _, q = normal_form_factors("F10", n, 0)
    lam = to_scalar(lam)
    nv = n + 1
    x = [MultiPoly.var(i, nv) for i in range(nv)]
    return l0, x[0] * (-lam * lam / 4) + x[1] + x[2] * lam, q


def normal_form(family: str, n: int, lam=None) -> MultiPoly:
    l0, l1, q = normal_form_factors(family, n, lam)
    return l0 * l1 * q


# ---------------------------------------------------------------------------
# geometry of the quadric


def is_tangent(q: MultiPoly, ell: MultiPoly, eps: float | None = None) -> bool:
    r = quadratic_rank(q, eps)
    if r <= 2:
        raise PreconditionError("quadric of rank <= 2 is reducible")
    restricted = restrict_to_hyperplane(q, ell)
    rr = 0 if restricted.is_zero() else quadratic_rank(restricted, eps)
    return rr <= r - 2


def quadric_vertex(q: MultiPoly, eps: float | None = None) -> list[ProjectivePoint]:
    """Basis of the projective kernel of the Hessian."""
    return [ProjectivePoint(v) for v in linalg.kernel(hessian(q), q.nvars, eps)]


def _contains(ell: MultiPoly, pts, eps=None) -> bool:
    coeffs = ell.linear_coeffs()
    for p in pts:
        value = sum((c * x for c, x in zip(coeffs, p.coords)), Fraction(0))
        if linalg.rank([[value]], eps) != 0:
            return False
    return True


def _restricted_rank(q, ell, eps=None) -> int:
    r = restrict_to_hyperplane(q, ell)
    return 0 if r.is_zero() else quadratic_rank(r, eps)


@dataclass
class ClassificationReport:
    n: int
    quadric_rank: int
    restricted_ranks: tuple
    proportional: bool
    tangent: tuple
    vertex_on: tuple | None
    conjugate: bool | None
    tag: FamilyTag

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "quadric_rank": self.quadric_rank,
            "restricted_ranks": list(self.restricted_ranks),
            "proportional": self.proportional,
            "tangent": list(self.tangent),
            "vertex_on": None if self.vertex_on is None else list(self.vertex_on),
            "conjugate": self.conjugate,
            "tag": self.tag.to_json(),
        }


def classify_quartic(l0: MultiPoly, l1: MultiPoly, q: MultiPoly, n: int,
                     eps: float | None = None) -> ClassificationReport:
    """Decide which normal form l0*l1*q is GL-equivalent to."""
    if n < 3:
        raise PreconditionError("the classification needs n >= 3")
    for p in (l0, l1, q):
        if p.nvars != n + 1:
            raise PreconditionError(f"expected {n + 1} variables, got {p.nvars}")
    if l0.degree() != 1 or l1.degree() != 1 or not (l0.is_homogeneous() and l1.is_homogeneous()):
        raise PreconditionError("l0 and l1 must be linear forms")
    r = quadratic_rank(q, eps)
    if not is_concise(l0 * l1 * q, eps):
        raise PreconditionError("F is not concise")
    # at n = 3 the F4 quadric x2^2 + x3^2 has rank 2; it is accepted there
    if r <= 2 and r != n - 1:
        raise PreconditionError("q has rank <= 2, so it is reducible")
    rr = (_restricted_rank(q, l0, eps), _restricted_rank(q, l1, eps))
    tangent = (rr[0] <= r - 2, rr[1] <= r - 2) if r > 2 else (False, False)
    proportional = linalg.rank([l0.linear_coeffs(), l1.linear_coeffs()], eps) == 1
    vertex_on = None
    conjugate = None

    if proportional:
        if r == n:
            family = "F2"
        elif r == n + 1:
            family = "F3" if tangent[0] else "F1"
        else:
            raise PreconditionError(f"unexpected quadric rank {r}")
    elif r == n - 1:
        family = "F4"
    elif r == n:
        vertex = quadric_vertex(q, eps)
        vertex_on = (_contains(l0, vertex, eps), _contains(l1, vertex, eps))
        if tangent[0] != tangent[1]:
            family = "F5"
        elif tangent[0]:
            raise PreconditionError("two tangent hyperplanes through the vertex: F is not concise")
        elif vertex_on[0] or vertex_on[1]:
            family = "F6"
        else:
            family = "F7"
    elif r == n + 1:
        if not tangent[0] and not tangent[1]:
            m_inv = linalg.inverse(hessian(q), eps)
            a, b = l1.linear_coeffs(), l0.linear_coeffs()
            pole = [sum((m_inv[i][j] * b[j] for j in range(n + 1)), Fraction(0)) for i in range(n + 1)]
            value = sum((x * y for x, y in zip(a, pole)), Fraction(0))
            conjugate = linalg.rank([[value]], eps) == 0
            family = "F8-zero" if conjugate else "F8-nonzero"
        elif tangent[0] and tangent[1]:
            family = "F10"
        else:
            family = "F9"
    else:
        raise PreconditionError(f"unexpected quadric rank {r}")
    return ClassificationReport(n, r, rr, proportional, tangent, vertex_on, conjugate, FamilyTag(family, n))


# ---------------------------------------------------------------------------
# rank table


def known_rank_bounds(tag: FamilyTag) -> BoundReport:
    n = tag.n
    if n < 3:
        raise PreconditionError("the rank table covers n >= 3")
    f = tag.family
    exact = {
        "F1": 3 * n, "F2": 3 * n, "F3": 3 * n + 1,
        "F4": 4 * (n - 1), "F6": 4 * (n - 1), "F8-zero": 4 * (n - 1),
    }
    if f in exact:
        lo = hi = exact[f]
    else:
        lo, hi = 4 * (n - 1), 4 * (n - 1) + 2
        if n == 3 and f != "F5":
            lo = 9
    prk = exact[f] if f in ("F1", "F2", "F3") else 3 * (n - 1)
    notes = {"family-table": f"{f} at n={n}", "prk_lower": prk}
    if f in ("F1", "F2", "F3"):
        notes["prk_exact"] = prk
    if n == 3 and f == "F9":
        notes["caveat"] = "the published bound 9 rests on dim Ann_2 = 2, but the F9 normal form has dim Ann_2 = 4"
    return BoundReport(lo, hi, ["family-table"], notes)


def rank_table(n: int) -> list[dict]:
    rows = []
    for f in FAMILIES:
        b = known_rank_bounds(FamilyTag(f, n))
        row = {"family": f, "lower": b.lower, "upper": b.upper, "exact": b.exact,
               "prk_lower": b.notes["prk_lower"]}
        if "caveat" in b.notes:
            row["caveat"] = b.notes["caveat"]
        rows.append(row)
    return rows
