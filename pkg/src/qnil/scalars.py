"""Exact scalars over the rationals and over cyclotomic fields Q(zeta_N).

A cyclotomic element is stored as its coefficient tuple modulo the N-th
cyclotomic polynomial, so ``zeta_N`` is simply the class of ``x``.  The raw
coefficient tuples are what the linear-algebra kernels pass around; the
:class:`Scalar` wrapper is the user-facing value type.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "ScalarField",
    "Scalar",
    "rational_field",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "q_generator",
    "q_integer",
    "q_factorial",
    "root_order",
    "nilpotency_order",
    "scalar_to_json",
    "scalar_from_json",
]

_Q0 = mpq(0)
_Q1 = mpq(1)


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    # den is monic with integer coefficients, low degree first
    num = list(num)
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j, dj in enumerate(den):
                num[i - dn + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("polynomial division is not exact")
    return quot


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_exact(poly, list(_cyclotomic(d)))
    return tuple(poly)


def cyclotomic_polynomial(n: int) -> list[int]:
    """Integer coefficients of Phi_n, constant term first.

    >>> cyclotomic_polynomial(6)
    [1, -1, 1]
    """
    if n < 1:
        raise ValueError(f"cyclotomic_polynomial needs n >= 1, got {n}")
    return list(_cyclotomic(n))


def _to_mpq(value) -> mpq:
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        raise TypeError("floating-point values are not exact scalars")
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class ScalarField:
    """The ground field: ``Q`` or ``Q(zeta_N)``.

    Instances are cached, so fields compare by identity in practice; equality
    is still defined on ``(mode, N)`` for safety.
    """

    RATIONAL = "rational"
    CYCLOTOMIC = "cyclotomic"

    __slots__ = ("mode", "N", "modulus", "degree", "_tail", "zero", "one")

    def __init__(self, mode: str, N: int | None = None):
        if mode == self.RATIONAL:
            self.N = None
            self.modulus = None
            self.degree = 1
            self._tail = ()
        elif mode == self.CYCLOTOMIC:
            if N is None or N < 2:
                raise ValueError("cyclotomic field needs N >= 2")
            self.N = N
            self.modulus = tuple(cyclotomic_polynomial(N))
            self.degree = len(self.modulus) - 1
            # x^deg = sum_i tail[i] x^i
            self._tail = tuple(mpq(-c) for c in self.modulus[:-1])
        else:
            raise ValueError(f"unknown field mode {mode!r}")
        self.mode = mode
        self.zero = (_Q0,) * self.degree
        self.one = (_Q1,) + (_Q0,) * (self.degree - 1)

    def __repr__(self):
        if self.mode == self.RATIONAL:
            return "ScalarField(Q)"
        return f"ScalarField(Q(zeta_{self.N}))"

    def __eq__(self, other):
        return isinstance(other, ScalarField) and (self.mode, self.N) == (other.mode, other.N)

    def __hash__(self):
        return hash((self.mode, self.N))

    def __reduce__(self):
        if self.mode == self.RATIONAL:
            return (rational_field, ())
        return (cyclotomic_field, (self.N,))

    @property
    def is_cyclotomic(self) -> bool:
        return self.mode == self.CYCLOTOMIC

    # -- raw coefficient-tuple arithmetic -------------------------------

    def coerce(self, value) -> tuple:
        """Raw coefficient tuple for an int, rational, string or Scalar."""
        if isinstance(value, Scalar):
            if value.field != self:
                if value.field.mode == self.RATIONAL:
                    return (value.coeffs[0],) + (_Q0,) * (self.degree - 1)
                raise ValueError(f"scalar from {value.field} used in {self}")
            return value.coeffs
        if isinstance(value, tuple) and len(value) == self.degree:
            return self.reduce(value)
        return (_to_mpq(value),) + (_Q0,) * (self.degree - 1)

    def reduce(self, coeffs) -> tuple:
        """Canonical tuple: coefficients reduced modulo Phi_N."""
        c = [_to_mpq(x) for x in coeffs]
        d = self.degree
        if len(c) < d:
            c += [_Q0] * (d - len(c))
        tail = self._tail
        for t in range(len(c) - 1, d - 1, -1):
            ct = c[t]
            if ct:
                for i, mi in enumerate(tail):
                    if mi:
                        c[t - d + i] += ct * mi
        return tuple(c[:d])

    def add(self, a, b):
        if self.degree == 1:
            return (a[0] + b[0],)
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.degree == 1:
            return (a[0] - b[0],)
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        prod = [_Q0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        tail = self._tail
        for t in range(2 * d - 2, d - 1, -1):
            ct = prod[t]
            if ct:
                for i, mi in enumerate(tail):
                    if mi:
                        prod[t - d + i] += ct * mi
        return tuple(prod[:d])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of the zero scalar")
        if self.degree == 1:
            return (1 / a[0],)
        # extended Euclid: find s with s*a = 1 mod Phi_N
        r0 = [mpq(c) for c in self.modulus]
        r1 = list(a)
        s0: list = [_Q0]
        s1: list = [_Q1]
        _trim(r1)
        # Phi_N is irreducible, so the remainders end at a nonzero constant
        while len(r1) > 1:
            quot, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1))
        c = r1[0]
        return self.reduce([x / c for x in s1])

    @staticmethod
    def is_zero(a) -> bool:
        return not any(a)

    def power(self, a, n: int):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    # -- Scalar construction -------------------------------------------

    def __call__(self, value) -> "Scalar":
        return Scalar(self, self.coerce(value))

    def wrap(self, raw) -> "Scalar":
        return Scalar(self, raw)


def _trim(p: list) -> list:
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _poly_mul(a: list, b: list) -> list:
    out = [_Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _Q0) - (b[i] if i < len(b) else _Q0) for i in range(n)]
    return _trim(out)


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    den = _trim(list(den))
    dd = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dd:
        return [_Q0], _trim(num)
    quot = [_Q0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] / lead
        if c:
            quot[i - dd] = c
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    rem = _trim(num[:dd] if dd else [_Q0])
    return _trim(quot), rem


@lru_cache(maxsize=None)
def rational_field() -> ScalarField:
    return ScalarField(ScalarField.RATIONAL)


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> ScalarField:
    return ScalarField(ScalarField.CYCLOTOMIC, N)


class Scalar:
    """Immutable exact element of a :class:`ScalarField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ScalarField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other):
        if isinstance(other, Scalar) and other.field != self.field:
            if self.field.mode == ScalarField.RATIONAL and other.field.is_cyclotomic:
                return other.field, other.field.coerce(self), other.coeffs
        try:
            return self.field, self.coeffs, self.field.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        f, a, b = t
        return Scalar(f, f.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        f, a, b = t
        return Scalar(f, f.sub(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        f, a, b = t
        return Scalar(f, f.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        f, a, b = t
        return Scalar(f, f.mul(a, f.inv(b)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.coeffs))

    def __pow__(self, n: int):
        return Scalar(self.field, self.field.power(self.coeffs, int(n)))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return t[1] == t[2]

    def __hash__(self):
        if self.field.degree == 1 or not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __repr__(self):
        if self.field.degree == 1:
            return f"Scalar({self.coeffs[0]})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}" if i > 1 else f"{c}*z")
        body = " + ".join(terms) if terms else "0"
        return f"Scalar({body} in Q(zeta_{self.field.N}))"


def q_generator(field: ScalarField, q=None) -> Scalar:
    """The canonical q of a field.

    In cyclotomic mode this is zeta_N (the class of ``x``); in rational mode
    the caller supplies ``q``, which may not be 0 or 1.
    """
    if field.is_cyclotomic:
        if q is not None:
            raise ValueError("q is fixed to zeta_N in cyclotomic mode")
        if field.degree == 1:
            # Phi_2 = x + 1, so x reduces to -1
            return field.wrap(field.reduce([0, 1]))
        return field.wrap((_Q0, _Q1) + (_Q0,) * (field.degree - 2))
    if q is None:
        raise ValueError("rational mode needs an explicit q")
    value = field(q)
    if value == 0 or value == 1:
        raise ValueError(f"q must avoid 0 and 1, got {q!r}")
    return value


def root_order(q: Scalar, bound: int = 64) -> int | None:
    """Smallest ``n >= 1`` with ``q^n = 1``, or ``None`` if there is none up to ``bound``."""
    f = q.field
    p = q.coeffs
    for n in range(1, bound + 1):
        if p == f.one:
            return n
        p = f.mul(p, q.coeffs)
    return None


def nilpotency_order(q: Scalar, N: int | None = None) -> int:
    """The ``N`` for which ``d^N = 0`` is expected: explicit, or the order of ``q``."""
    if N is not None:
        if N < 2:
            raise ValueError("N must be at least 2")
        return N
    order = root_order(q)
    if order is None or order < 2:
        raise ValueError(f"q = {q!r} is not a nontrivial root of unity; pass N explicitly")
    return order


def q_integer(n: int, q: Scalar) -> Scalar:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    f = q.field
    total = f.zero
    term = f.one
    for _ in range(n):
        total = f.add(total, term)
        term = f.mul(term, q.coeffs)
    return f.wrap(total)


def q_factorial(n: int, q: Scalar) -> Scalar:
    """[n!]_q = [2]_q [3]_q ... [n]_q, with the empty product equal to 1."""
    f = q.field
    result = f.one
    for j in range(2, n + 1):
        result = f.mul(result, q_integer(j, q).coeffs)
    return f.wrap(result)


def _rational_str(x) -> str:
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(s: Scalar):
    if s.field.mode == ScalarField.RATIONAL:
        return _rational_str(s.coeffs[0])
    return {"N": s.field.N, "coeffs": [_rational_str(c) for c in s.coeffs]}


def scalar_from_json(obj, field: ScalarField | None = None) -> Scalar:
    """Decode ``"p/q"``, an int, or ``{"N": .., "coeffs": [..]}``."""
    if isinstance(obj, dict):
        src = cyclotomic_field(int(obj["N"]))
        value = src.wrap(src.reduce(obj["coeffs"]))
        if field is not None and field != src:
            raise ValueError(f"scalar lives in {src}, expected {field}")
        return value
    if isinstance(obj, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(obj, (int, str)):
        target = field if field is not None else rational_field()
        return target(obj)
    if isinstance(obj, Fraction):
        target = field if field is not None else rational_field()
        return target(obj)
    raise TypeError(f"cannot decode scalar from {obj!r}")
