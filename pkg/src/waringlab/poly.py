"""Sparse multivariate polynomials in R = K[x0..xn] and the dual ring S = K[y0..yn].

A :class:`MultiPoly` maps exponent tuples to nonzero scalars.  Polynomials
are immutable values: every operation returns a new one.  Terms print in
graded lexicographic order with x0 > x1 > ... > xn.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from . import linalg
from .field import (
    QuadExt,
    embed,
    format_scalar,
    is_exact,
    is_zero,
    scalar_from_json,
    scalar_to_json,
    to_scalar,
)

PRIMAL = "R"
DUAL = "S"


class RingMismatchError(ValueError):
    pass


class PolyParseError(ValueError):
    pass


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree, in descending lex order."""
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def multinomial(exps) -> int:
    num = factorial(sum(exps))
    for e in exps:
        num //= factorial(e)
    return num


def _sort_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("nvars", "terms", "ring")

    def __init__(self, nvars: int, terms=None, ring: str = PRIMAL):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != nvars or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent vector {e} for {nvars} variables")
                c = to_scalar(c)
                if c != 0:
                    clean[e] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, ring: str = PRIMAL) -> MultiPoly:
        return cls(nvars, {}, ring)

    @classmethod
    def constant(cls, c, nvars: int, ring: str = PRIMAL) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: c}, ring)

    @classmethod
    def var(cls, i: int, nvars: int, ring: str = PRIMAL) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)}, ring)

    @classmethod
    def monomial(cls, exps, coeff=1, ring: str = PRIMAL) -> MultiPoly:
        return cls(len(exps), {tuple(exps): coeff}, ring)

    @classmethod
    def linear(cls, coeffs, ring: str = PRIMAL) -> MultiPoly:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms, ring)

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coeff(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def variables(self) -> list[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return sorted(used)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]), reverse=True)

    def linear_coeffs(self) -> list:
        """Coefficient list of a linear form."""
        if self.terms and self.degree() != 1 or not self.is_homogeneous():
            raise ValueError("not a linear form")
        out = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            out[e.index(1)] = c
        return out

    # arithmetic -------------------------------------------------------
    def _check(self, other: MultiPoly):
        if other.nvars != self.nvars or other.ring != self.ring:
            raise RingMismatchError(
                f"{self.ring}[{self.nvars}] vs {other.ring}[{other.nvars}]"
            )

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.nvars, self.ring)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.nvars, terms, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            other = to_scalar(other)
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()}, self.ring)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, terms, self.ring)

    def __rmul__(self, other):
        return self * other

    def scale(self, c) -> MultiPoly:
        return self * c

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            raise TypeError("polynomial division is not supported")
        return self * (1 / to_scalar(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.nvars, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (self.nvars, self.ring, self.terms) == (other.nvars, other.ring, other.terms)
        if not self.terms:
            return other == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.ring, frozenset(self.terms.items())))

    def is_close(self, other: MultiPoly, eps: float | None = None) -> bool:
        diff = self - other
        scale = max((abs(embed(c)) for c in self.terms.values()), default=1.0)
        return all(is_zero(c, eps, scale) for c in diff.terms.values())

    # transformations --------------------------------------------------
    def map_coeffs(self, f) -> MultiPoly:
        return MultiPoly(self.nvars, {e: f(c) for e, c in self.terms.items()}, self.ring)

    def to_complex(self) -> MultiPoly:
        return self.map_coeffs(embed)

    def with_ring(self, ring: str) -> MultiPoly:
        return MultiPoly(self.nvars, self.terms, ring)

    def derivative(self, i: int) -> MultiPoly:
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return MultiPoly(self.nvars, terms, self.ring)

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def embed_vars(self, nvars: int, positions) -> MultiPoly:
        """Rename variable i to ``positions[i]`` in a ring with ``nvars`` variables."""
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                e2[positions[i]] += k
            terms[tuple(e2)] = c
        return MultiPoly(nvars, terms, self.ring)

    def drop_vars(self, keep) -> MultiPoly:
        """Restrict to the variables in ``keep``; other exponents must be zero."""
        keep = list(keep)
        terms = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("polynomial depends on a dropped variable")
            terms[tuple(e[i] for i in keep)] = c
        return MultiPoly(len(keep), terms, self.ring)

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        name = "x" if self.ring == PRIMAL else "y"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{name}{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if is_exact(c) and not isinstance(c, QuadExt):
                c = Fraction(c)
                neg = c < 0
                mag = -c if neg else c
                if mono:
                    body = mono if mag == 1 else f"{mag}*{mono}"
                else:
                    body = str(mag)
                parts.append(("-" if neg else "+", body))
            else:
                cs = format_scalar(c)
                parts.append(("+", f"{cs}*{mono}" if mono else cs))
        out = ""
        for k, (sign, body) in enumerate(parts):
            if k == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.ring}, {self.nvars}, {str(self)!r})"

    # JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "nvars": self.nvars,
            "terms": [
                {"coeff": scalar_to_json(c), "exps": list(e)} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj) -> MultiPoly:
        terms = {tuple(t["exps"]): scalar_from_json(t["coeff"]) for t in obj["terms"]}
        return cls(int(obj["nvars"]), terms, obj.get("ring", PRIMAL))


# ---------------------------------------------------------------------------
# projective points and linear forms


class ProjectivePoint:
    """A point of P^n given by homogeneous coordinates, not all zero."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(to_scalar(c) for c in coords)
        if all(c == 0 for c in coords):
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def normalized(self, eps: float | None = None) -> ProjectivePoint:
        scale = max(abs(embed(c)) for c in self.coords)
        lead = next(c for c in self.coords if not is_zero(c, eps, scale))
        return ProjectivePoint(tuple(c / lead for c in self.coords))

    def same_as(self, other: ProjectivePoint, eps: float | None = None) -> bool:
        if len(other) != len(self):
            return False
        rows = [list(self.coords), list(other.coords)]
        return linalg.rank(rows, eps) == 1

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        n = self.normalized()
        if all(is_exact(c) for c in n.coords):
            return hash(n.coords)
        return hash(len(n.coords))

    def __repr__(self):
        return "(" + " : ".join(format_scalar(c) for c in self.coords) + ")"


def dual_point(ell) -> ProjectivePoint:
    """The point of P^n whose coordinates are the coefficients of a linear form."""
    if isinstance(ell, MultiPoly):
        coeffs = ell.linear_coeffs()
    else:
        coeffs = list(ell)
    return ProjectivePoint(coeffs)


def dual_form(p: ProjectivePoint, ring: str = PRIMAL) -> MultiPoly:
    return MultiPoly.linear(list(p.coords), ring)


def power_of_linear(coeffs, d: int, nvars: int | None = None) -> dict:
    """Coefficients of ``(sum c_i x_i)^d`` keyed by exponent vector."""
    n = nvars or len(coeffs)
    out = {}
    for e in monomials(n, d):
        val = Fraction(multinomial(e))
        for c, k in zip(coeffs, e):
            if k:
                val = val * c**k
        out[e] = val
    return out


# ---------------------------------------------------------------------------
# apolarity action, Hessians, substitutions


def apply_diff(delta: MultiPoly, F: MultiPoly) -> MultiPoly:
    """Let a dual polynomial act on a primal one by differentiation."""
    if delta.ring != DUAL or F.ring != PRIMAL:
        raise RingMismatchError("apply_diff expects delta in S and F in R")
    if delta.nvars != F.nvars:
        raise RingMismatchError("variable counts differ")
    terms: dict = {}
    for b, cb in delta.terms.items():
        for a, ca in F.terms.items():
            if any(x < y for x, y in zip(a, b)):
                continue
            mult = 1
            for x, y in zip(a, b):
                for k in range(y):
                    mult *= x - k
            e = tuple(x - y for x, y in zip(a, b))
            terms[e] = terms.get(e, 0) + cb * ca * mult
    return MultiPoly(F.nvars, terms, PRIMAL)


def hessian(q: MultiPoly) -> list[list]:
    if q.terms and (q.degree() != 2 or not q.is_homogeneous()):
        raise ValueError("hessian expects a quadratic form")
    n = q.nvars
    h = [[Fraction(0)] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            h[i][i] = h[i][i] + 2 * c
        else:
            h[i][j] = h[i][j] + c
            h[j][i] = h[j][i] + c
    return h


def quadric_from_hessian(m) -> MultiPoly:
    n = len(m)
    terms = {}
    for i in range(n):
        for j in range(i, n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            c = m[i][j] / 2 if i == j else m[i][j]
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return MultiPoly(n, terms)


def gl_substitute(p: MultiPoly, m) -> MultiPoly:
    """Return ``p(M x)``: variable x_i becomes sum_j M[i][j] x_j."""
    n = p.nvars
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError("matrix size does not match the number of variables")
    if linalg.rank(m) < n:
        raise ValueError("substitution matrix is singular")
    images = [MultiPoly.linear(list(row), p.ring) for row in m]
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = images[i] ** k
        return cache[key]

    result = MultiPoly.zero(n, p.ring)
    for e, c in p.terms.items():
        term = MultiPoly.constant(c, n, p.ring)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


def restrict_to_hyperplane(p: MultiPoly, ell, pivot: int | None = None) -> MultiPoly:
    """Restrict ``p`` to Var(ell) by solving ell = 0 for one variable.

    The eliminated variable is dropped, so the result lives in nvars-1
    variables.
    """
    coeffs = ell.linear_coeffs() if isinstance(ell, MultiPoly) else list(ell)
    n = p.nvars
    if len(coeffs) != n:
        raise ValueError("linear form has the wrong number of variables")
    if pivot is None:
        pivot = next((i for i, c in enumerate(coeffs) if c != 0), None)
        if pivot is None:
            raise ValueError("zero linear form")
    elif coeffs[pivot] == 0:
        raise ValueError("pivot variable does not occur in the linear form")
    lead = coeffs[pivot]
    rows = []
    for i in range(n):
        row = [Fraction(0)] * n
        if i == pivot:
            for j in range(n):
                if j != pivot:
                    row[j] = -coeffs[j] / lead
        else:
            row[i] = Fraction(1)
        rows.append(row)
    keep = [i for i in range(n) if i != pivot]
    images = [MultiPoly.linear(r, p.ring) for r in rows]
    result = MultiPoly.zero(n, p.ring)
    for e, c in p.terms.items():
        term = MultiPoly.constant(c, n, p.ring)
        for i, k in enumerate(e):
            if k:
                term = term * images[i] ** k
        result = result + term
    return result.drop_vars(keep)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])(\d+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, var, idx, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("var", (var, int(idx))))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Node:
    """Parse tree: ('num', v) | ('var', (name, i)) | (op, children)."""

    __slots__ = ("kind", "value")

    def __init__(self, kind, value):
        self.kind = kind
        self.value = value


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise PolyParseError(f"expected {op!r}, got {tok[1]!r}")

    def parse(self):
        node = self.expr()
        if self.i != len(self.toks):
            raise PolyParseError(f"trailing input at token {self.peek()[1]!r}")
        return node

    def expr(self):
        terms = [self.term()]
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            terms.append(_Node("neg", [t]) if op == "-" else t)
        return terms[0] if len(terms) == 1 else _Node("add", terms)

    def term(self):
        factors = [self.unary()]
        while self.peek() in (("op", "*"), ("op", "/")) or self._implicit():
            if self.peek() in (("op", "*"), ("op", "/")):
                op = self.take()[1]
            else:
                op = "*"
            f = self.unary()
            factors.append(_Node("inv", [f]) if op == "/" else f)
        return factors[0] if len(factors) == 1 else _Node("mul", factors)

    def _implicit(self):
        kind, val = self.peek()
        return kind in ("var", "num") or (kind == "op" and val == "(")

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _Node("neg", [self.unary()])
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolyParseError("exponent must be a non-negative integer")
            return _Node("pow", [base, val])
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return _Node("num", val)
        if kind == "var":
            return _Node("var", val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise PolyParseError(f"unexpected token {val!r}")


def _max_index(node) -> tuple[int, set]:
    if node.kind == "var":
        return node.value[1], {node.value[0]}
    if node.kind == "num":
        return -1, set()
    children = node.value[:1] if node.kind == "pow" else node.value
    best, names = -1, set()
    for ch in children:
        m, nm = _max_index(ch)
        best = max(best, m)
        names |= nm
    return best, names


def _eval(node, nvars, ring):
    k = node.kind
    if k == "num":
        return MultiPoly.constant(node.value, nvars, ring)
    if k == "var":
        return MultiPoly.var(node.value[1], nvars, ring)
    if k == "neg":
        return -_eval(node.value[0], nvars, ring)
    if k == "add":
        out = MultiPoly.zero(nvars, ring)
        for ch in node.value:
            out = out + _eval(ch, nvars, ring)
        return out
    if k == "mul":
        out = MultiPoly.constant(1, nvars, ring)
        for ch in node.value:
            if ch.kind == "inv":
                den = _eval(ch.value[0], nvars, ring)
                if den.degree() > 0 or den.is_zero():
                    raise PolyParseError("division is only allowed by nonzero constants")
                out = out / den.coeff((0,) * nvars)
            else:
                out = out * _eval(ch, nvars, ring)
        return out
    if k == "inv":
        den = _eval(node.value[0], nvars, ring)
        if den.degree() > 0 or den.is_zero():
            raise PolyParseError("division is only allowed by nonzero constants")
        return MultiPoly.constant(1 / den.coeff((0,) * nvars), nvars, ring)
    if k == "pow":
        return _eval(node.value[0], nvars, ring) ** node.value[1]
    raise PolyParseError(f"bad node {k}")


def _parse_tree(text: str, nvars: int | None):
    tree = _Parser(_tokenize(text)).parse()
    top, names = _max_index(tree)
    if len(names) > 1:
        raise PolyParseError("expression mixes x and y variables")
    ring = DUAL if names == {"y"} else PRIMAL
    if nvars is None:
        nvars = max(top + 1, 1)
    elif top >= nvars:
        raise PolyParseError(f"variable index {top} exceeds {nvars} variables")
    return tree, nvars, ring


def parse_poly(text: str, nvars: int | None = None) -> MultiPoly:
    """Parse an expression over x0..xn (primal) or y0..yn (dual)."""
    tree, nvars, ring = _parse_tree(text, nvars)
    return _eval(tree, nvars, ring)


def parse_factors(text: str, nvars: int | None = None) -> list[tuple[MultiPoly, int]]:
    """Split a top-level product into ``(factor, multiplicity)`` pairs.

    Constant factors are folded into the first non-constant factor.
    """
    tree, nvars, ring = _parse_tree(text, nvars)
    nodes = tree.value if tree.kind == "mul" else [tree]
    raw = []
    const = MultiPoly.constant(1, nvars, ring)
    for node in nodes:
        mult = 1
        if node.kind == "pow":
            node, mult = node.value
        p = _eval(node, nvars, ring)
        if p.degree() <= 0:
            const = const * (p**mult)
            continue
        raw.append((p, mult))
    if not raw:
        return [(const, 1)]
    c = const.coeff((0,) * nvars)
    if c != 1:
        p, m = raw[0]
        if m == 1:
            raw[0] = (p * c, 1)
        else:
            raw.insert(0, (const, 1))
    return raw
