"""Scalar domains: exact rationals, one quadratic extension Q(sqrt d), and
approximate complex numbers.

Rationals are plain :class:`fractions.Fraction` values.  Elements of a
quadratic field are :class:`QuadExt`.  Approximate values are Python
``complex``; their zero tests use a tolerance carried by the caller, never
by the value.
"""

from __future__ import annotations

import cmath
import math
import os
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

DEFAULT_TOL = 1e-9


class MixedDomainError(ValueError):
    """Operands live in incompatible scalar domains."""


def default_tolerance() -> float:
    env = os.environ.get("WARINGLAB_TOL")
    if env:
        return float(env)
    return DEFAULT_TOL


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(m, s)`` with ``n == m**2 * s`` and ``s`` squarefree (sign kept in ``s``)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    m, s = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        m *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1 if p == 2 else 2
        if p > 10**6:
            raise ValueError("integer too large to factor for a square root")
    s *= n
    return m, sign * s


class QuadExt:
    """An element ``a + b*sqrt(d)`` of the quadratic field Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d in (0, 1) or squarefree_decompose(d)[0] != 1:
            raise ValueError(f"d={d} must be squarefree and different from 0, 1")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, d: int) -> QuadExt:
        return cls(0, 1, d)

    # coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise MixedDomainError(f"Q(sqrt {self.d}) and Q(sqrt {other.d}) do not mix")
            return other.a, other.b
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def _make(self, a, b):
        if b == 0:
            return a
        out = object.__new__(QuadExt)
        object.__setattr__(out, "a", a)
        object.__setattr__(out, "b", b)
        object.__setattr__(out, "d", self.d)
        return out

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        return self._make(self.a + o[0], self.b + o[1])

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        return self._make(self.a - o[0], self.b - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        return self._make(o[0] - self.a, o[1] - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        a, b = o
        return self._make(self.a * a + self.d * self.b * b, self.a * b + self.b * a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.d)

    def inverse(self):
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._make(self.a / nrm, -self.b / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if o[0] == 0:
            raise ZeroDivisionError("division by zero")
        return self._make(self.a / o[0], self.b / o[0])

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return _mixed(self, other)
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Fraction(1)
        base = self
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result

    # comparisons ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __complex__(self):
        return complex(self.a) + complex(self.b) * _sqrt_branch(self.d)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.a == 0:
            head = ""
        else:
            head = f"{self.a}"
        b = self.b
        sign = "-" if b < 0 else ("+" if head else "")
        mag = abs(b)
        coef = "" if mag == 1 else f"{mag}*"
        return f"({head}{sign}{coef}sqrt({self.d}))"


def _mixed(x, y):
    raise MixedDomainError(f"cannot combine {type(x).__name__} with {type(y).__name__}")


def _sqrt_branch(d: int) -> complex:
    if d > 0:
        return complex(math.sqrt(d), 0.0)
    return complex(0.0, math.sqrt(-d))


# ---------------------------------------------------------------------------
# domain helpers


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, QuadExt))


def is_zero(x, eps: float | None = None, scale: float = 1.0) -> bool:
    if is_exact(x):
        return x == 0
    if eps is None:
        eps = default_tolerance()
    return abs(x) <= eps * max(scale, 1e-300)


def embed(x) -> complex:
    """Map an exact scalar into the complex numbers (principal branch of sqrt d)."""
    if isinstance(x, QuadExt):
        return complex(x)
    if isinstance(x, (int, Rational)):
        return complex(float(x), 0.0)
    return complex(x)


def to_scalar(x):
    """Normalize ints to Fraction; leave other scalar kinds untouched."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return complex(x)
    return x


def field_of(values) -> int | str:
    """Smallest supported domain holding all values: ``"Q"``, a radicand ``d``, or ``"C"``.

    Raises :class:`MixedDomainError` never; mixed radicands collapse to ``"C"``.
    """
    field: int | str = "Q"
    for v in values:
        if isinstance(v, QuadExt):
            if field == "Q":
                field = v.d
            elif field != v.d:
                return "C"
        elif not is_exact(v):
            return "C"
    return field


def field_name(field) -> str:
    if field == "Q":
        return "Q"
    if field == "C":
        return "C~"
    return f"Q(sqrt {field})"


def parse_field_name(name: str):
    if name == "Q":
        return "Q"
    if name in ("C~", "C"):
        return "C"
    inner = name.strip()
    if inner.startswith("Q(sqrt") and inner.endswith(")"):
        return int(inner[len("Q(sqrt"):-1])
    raise ValueError(f"unknown field {name!r}")


def sqrt_rational(x) -> Fraction | QuadExt:
    """Exact square root of a rational number inside Q or Q(sqrt d)."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    m, s = squarefree_decompose(num * den)
    coef = Fraction(m, den)
    if s == 1:
        return coef
    return QuadExt(0, coef, s)


def conj(x):
    if isinstance(x, QuadExt):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def abs_approx(x) -> float:
    return abs(embed(x))


# ---------------------------------------------------------------------------
# text / JSON forms


def scalar_to_json(x):
    if isinstance(x, QuadExt):
        return {"a": str(x.a), "b": str(x.b), "d": x.d}
    if isinstance(x, (int, Rational)):
        return str(Fraction(x))
    z = complex(x)
    return [repr(z.real), repr(z.imag)]


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadExt(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"])) if Fraction(obj["b"]) != 0 else Fraction(obj["a"])
    if isinstance(obj, list):
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, (int, str)):
        return Fraction(obj)
    raise ValueError(f"not a scalar: {obj!r}")


def format_scalar(x) -> str:
    if isinstance(x, QuadExt):
        return str(x)
    if isinstance(x, (int, Rational)):
        return str(Fraction(x))
    z = complex(x)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"({z.real:.12g}{z.imag:+.12g}j)"


def phase_root(z: complex, k: int) -> complex:
    """A k-th root of a complex number (principal branch)."""
    return cmath.exp(cmath.log(z) / k) if z != 0 else 0j
