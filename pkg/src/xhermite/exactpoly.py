"""Exact univariate polynomials and rational functions over Q.

A polynomial is stored as a tuple of Python integers (ascending powers)
together with one positive common denominator, so that nearly all of the
heavy lifting (products, Wronskians, remainder sequences) happens on plain
integers.  Nothing in this module ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Iterable, Sequence

from .errors import ArgumentError

__all__ = [
    "DEG_ZERO",
    "ExactPoly",
    "RatFun",
    "X",
    "count_real_roots",
    "derivative",
    "poly_gcd",
    "ratfun_arith",
    "ratfun_derivative",
    "wronskian",
]

# Sizes up to this use cofactor expansion; larger Wronskians use Bareiss.
COFACTOR_MAX = 4


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial.

    Orders below every integer but refuses arithmetic, so that code which
    forgets about the zero polynomial fails loudly instead of computing
    with a fake degree.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEG_ZERO"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("DEG_ZERO")


DEG_ZERO = _MinusInfinity()


# ---------------------------------------------------------------------------
# integer coefficient-list kernels (ascending order, no trailing zeros)

def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _iadd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _isub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _strip(out)


def _imul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    return _strip(out)


def _iscale(a: Sequence[int], c: int) -> list[int]:
    if c == 0:
        return []
    return [c * v for v in a]


def _content(a: Sequence[int]) -> int:
    g = 0
    for v in a:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(a: Sequence[int]) -> list[int]:
    """Divide out the (positive) content; signs are preserved."""
    g = _content(a)
    if g <= 1:
        return list(a)
    return [v // g for v in a]


def _iderive(a: Sequence[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def _idivexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient a / b over Z[x]; b must divide a exactly."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact polynomial division")
        return []
    q = [0] * (len(r) - db)
    for s in range(len(r) - 1 - db, -1, -1):
        top = r[s + db]
        if top:
            qs, rem = divmod(top, lb)
            if rem:
                raise ArithmeticError("inexact polynomial division")
            q[s] = qs
            for i in range(db + 1):
                r[s + i] -= qs * b[i]
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _strip(q)


def _iprem_positive(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Remainder of a by b scaled by a positive integer.

    Each elimination step multiplies by |lc(b)| so the remainder is a
    positive multiple of the true one; this keeps Sturm signs intact.
    """
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    alb = abs(lb)
    sgn = 1 if lb > 0 else -1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        s = len(r) - 1 - db
        r = [c * alb for c in r]
        f = lr * sgn
        for i in range(db + 1):
            r[s + i] -= f * b[i]
        _strip(r)
        r = _primitive(r)
    return r


# ---------------------------------------------------------------------------

class ExactPoly:
    """Polynomial with rational coefficients, immutable.

    ``ExactPoly([c0, c1, ...])`` builds c0 + c1 x + ...; entries may be
    ints, Fractions or strings such as ``"3/4"``.
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [int(c * den) for c in fr]
        self._set(nums, den)

    def _set(self, nums: list[int], den: int) -> None:
        _strip(nums)
        if not nums:
            den = 1
        else:
            g = gcd(_content(nums), den)
            if g > 1:
                nums = [v // g for v in nums]
                den //= g
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, nums: Sequence[int], den: int = 1) -> "ExactPoly":
        obj = cls.__new__(cls)
        if den < 0:
            nums, den = [-v for v in nums], -den
        obj._set(list(nums), den)
        return obj

    @classmethod
    def constant(cls, c) -> "ExactPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "ExactPoly":
        return cls([0] * k + [c])

    @classmethod
    def from_strings(cls, coeffs: Sequence[str]) -> "ExactPoly":
        return cls(Fraction(s) for s in coeffs)

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._num)

    @property
    def degree(self):
        """Index of the top non-zero coefficient, or ``DEG_ZERO``."""
        return len(self._num) - 1 if self._num else DEG_ZERO

    @property
    def leading(self) -> Fraction:
        if not self._num:
            return Fraction(0)
        return Fraction(self._num[-1], self._den)

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return len(self._num) <= 1

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def to_strings(self) -> list[str]:
        """Exact ``"p/q"`` strings in ascending order."""
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "ExactPoly":
        if isinstance(other, ExactPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._den == other._den:
            return ExactPoly._raw(_iadd(self._num, other._num), self._den)
        return ExactPoly._raw(
            _iadd(_iscale(self._num, other._den), _iscale(other._num, self._den)),
            self._den * other._den,
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly._raw([-v for v in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ExactPoly._raw(_iscale(self._num, other), self._den)
        if isinstance(other, Fraction):
            return ExactPoly._raw(_iscale(self._num, other.numerator), self._den * other.denominator)
        if isinstance(other, ExactPoly):
            return ExactPoly._raw(_imul(self._num, other._num), self._den * other._den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a non-zero scalar only."""
        c = Fraction(other)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ArgumentError("negative power of a polynomial")
        out, base = ExactPoly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "ExactPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        b = other.coeffs
        db, lb = len(b) - 1, b[-1]
        if len(r) - 1 < db:
            return ExactPoly(), self
        q = [Fraction(0)] * (len(r) - db)
        for s in range(len(r) - 1 - db, -1, -1):
            top = r[s + db]
            if top:
                qs = top / lb
                q[s] = qs
                for i in range(db + 1):
                    r[s + i] -= qs * b[i]
        return ExactPoly(q), ExactPoly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "ExactPoly") -> "ExactPoly":
        """Quotient when ``other`` is known to divide ``self``."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        bp = _primitive(other._num)
        scale = Fraction(self._den * _content(other._num) if other._num else 1, other._den)
        try:
            q = _idivexact(self._num, bp)
        except ArithmeticError:
            raise ArgumentError("divisor does not divide the polynomial exactly") from None
        # self = (num/den), other = (c * bp / oden) => q_true = num/bp * oden / (den * c)
        return ExactPoly._raw(_iscale(q, scale.denominator), scale.numerator)

    def monic(self) -> "ExactPoly":
        if self.is_zero():
            return self
        return ExactPoly._raw(list(self._num), self._num[-1])

    def primitive_int(self) -> tuple[int, ...]:
        """Integer primitive part; positive multiple of ``self``."""
        return tuple(_primitive(self._num))

    def derivative(self) -> "ExactPoly":
        return ExactPoly._raw(_iderive(self._num), self._den)

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction, float for float input."""
        if isinstance(x, float):
            acc = 0.0
            for c in reversed(self._num):
                acc = acc * x + c
            return acc / self._den
        acc = Fraction(0) if not isinstance(x, int) else 0
        for c in reversed(self._num):
            acc = acc * x + c
        return Fraction(acc, 1) / self._den

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactPoly([other])
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __bool__(self):
        return bool(self._num)

    def __repr__(self):
        return f"ExactPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(self)


X = ExactPoly([0, 1])


def format_poly(p: ExactPoly, var: str = "x") -> str:
    """Descending-power text, e.g. ``8x^3 - 12x`` or ``(1/2)x^2 + 3``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if a == 1:
                body = mono
            elif a.denominator == 1:
                body = f"{a}{mono}"
            else:
                body = f"({a}){mono}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def derivative(p: ExactPoly) -> ExactPoly:
    return p.derivative()


def poly_gcd(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    u, v = list(_primitive(a._num)), list(_primitive(b._num))
    if len(u) < len(v):
        u, v = v, u
    while v:
        r = _iprem_positive(u, v)
        u, v = v, r
    if not u:
        return ExactPoly()
    return ExactPoly._raw(u, u[-1])


# ---------------------------------------------------------------------------
# Wronskians

def _cofactor_det(m: list[list[list[int]]]) -> list[int]:
    n = len(m)
    if n == 1:
        return list(m[0][0])
    if n == 2:
        return _isub(_imul(m[0][0], m[1][1]), _imul(m[0][1], m[1][0]))
    total: list[int] = []
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = _imul(m[0][j], _cofactor_det(minor))
        total = _iadd(total, term) if j % 2 == 0 else _isub(total, term)
    return total


def _bareiss_det(m: list[list[list[int]]]) -> list[int]:
    m = [list(row) for row in m]
    n = len(m)
    sign = 1
    prev: list[int] = [1]
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return []
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                t = _imul(row_i[j], pivot)
                if mik and row_k[j]:
                    t = _isub(t, _imul(mik, row_k[j]))
                row_i[j] = _idivexact(t, prev) if prev != [1] else t
        prev = pivot
    out = m[n - 1][n - 1]
    return out if sign > 0 else [-v for v in out]


def wronskian(ps: Sequence[ExactPoly]) -> ExactPoly:
    """Wronskian determinant det[p_j^{(i)}] of the given polynomials.

    Row i holds i-th derivatives, column j the j-th input.  Sizes up to
    ``COFACTOR_MAX`` are expanded by cofactors; larger ones go through
    fraction-free Bareiss elimination over Z[x].
    """
    ps = list(ps)
    if not ps:
        raise ArgumentError("wronskian needs at least one polynomial")
    n = len(ps)
    den = 1
    cols = []
    for p in ps:
        den *= p._den
        col = [list(p._num)]
        for _ in range(n - 1):
            col.append(_iderive(col[-1]))
        cols.append(col)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    det = _cofactor_det(m) if n <= COFACTOR_MAX else _bareiss_det(m)
    return ExactPoly._raw(det, den)


# ---------------------------------------------------------------------------
# real roots

def sturm_sequence(p: ExactPoly) -> list[tuple[int, ...]]:
    """Sturm chain p, p', -rem, ... as integer polynomials (positive rescalings)."""
    if p.is_zero():
        raise ArgumentError("Sturm sequence of the zero polynomial")
    seq = [list(_primitive(p._num))]
    d = _primitive(_iderive(seq[0]))
    if d:
        seq.append(d)
    while len(seq) > 1 and len(seq[-1]) > 1:
        r = _iprem_positive(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-v for v in r])
    return [tuple(s) for s in seq]


def _variations(signs: Iterable[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: ExactPoly) -> int:
    """Number of distinct real roots, by Sturm sign variations on (-inf, inf)."""
    if p.is_zero():
        raise ArgumentError("the zero polynomial has infinitely many roots")
    seq = sturm_sequence(p)
    at_pos = [1 if s[-1] > 0 else -1 for s in seq]
    at_neg = [v if (len(s) - 1) % 2 == 0 else -v for v, s in zip(at_pos, seq)]
    return _variations(at_neg) - _variations(at_pos)


# ---------------------------------------------------------------------------
# rational functions

class RatFun:
    """Reduced quotient num/den with monic denominator, immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        num = num if isinstance(num, ExactPoly) else ExactPoly([num])
        if den is None:
            den = ExactPoly([1])
        elif not isinstance(den, ExactPoly):
            den = ExactPoly([den])
        if den.is_zero():
            raise ArgumentError("rational function with zero denominator")
        if not _canonical:
            num, den = self._canonicalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _canonicalize(num: ExactPoly, den: ExactPoly):
        if num.is_zero():
            return num, ExactPoly([1])
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.leading
        if lc != 1:
            num = num / lc
            den = den / lc
        return num, den

    @classmethod
    def of(cls, value) -> "RatFun":
        if isinstance(value, RatFun):
            return value
        return cls(value)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> ExactPoly:
        if not self.is_polynomial():
            raise ArgumentError(f"{self} is not a polynomial")
        return self.num

    def __add__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFun(ExactPoly())
            return RatFun(self.num * other, self.den, _canonical=True)
        o = _as_ratfun(other)
        if o is NotImplemented:
            return o
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ArgumentError("division by the zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _as_ratfun(other) / self

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __eq__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_polynomial():
            return format_poly(self.num)
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"


def _as_ratfun(value):
    if isinstance(value, RatFun):
        return value
    if isinstance(value, (ExactPoly, int, Fraction)):
        return RatFun(value)
    return NotImplemented


def ratfun_arith(a: RatFun, b: RatFun, op: str) -> RatFun:
    """Field arithmetic by name: ``add``, ``sub``, ``mul`` or ``div``."""
    a, b = RatFun.of(a), RatFun.of(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ArgumentError(f"unknown operation {op!r}")


def ratfun_derivative(a: RatFun) -> RatFun:
    return RatFun.of(a).derivative()
