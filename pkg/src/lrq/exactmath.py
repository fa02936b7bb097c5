"""Exact arithmetic in cyclotomic fields Q(zeta_m) and matrices over them.

A :class:`CycNum` of conductor ``m`` is stored in the power basis
``1, z, ..., z^(phi(m)-1)`` of ``z = exp(2 pi i / m)``, reduced modulo the
``m``-th cyclotomic polynomial, as a tuple of integer numerators over one
positive common denominator.  The representation is canonical, so equality
within a conductor is tuple equality.

Rationals are plain :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from .errors import BadInput, ConductorTooLarge, DimensionMismatch, NotDivisible, NotInvertible

MAX_CONDUCTOR = 2520  # 2^3 * 3^2 * 5 * 7


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def check_conductor(m: int) -> int:
    if not isinstance(m, int) or m < 1:
        raise BadInput(f"conductor must be a positive integer, got {m!r}")
    if m > MAX_CONDUCTOR:
        raise ConductorTooLarge(f"conductor {m} exceeds {MAX_CONDUCTOR}")
    return m


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, k, rest = n, 2, n
    while k * k <= rest:
        if rest % k == 0:
            while rest % k == 0:
                rest //= k
            result -= result // k
        k += 1
    if rest > 1:
        result -= result // rest
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first (monic)."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _exact_div(poly, cyclotomic_poly(d))
    return tuple(poly)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        out[k - dd] = c
        if c:
            for i, x in enumerate(den):
                num[k - dd + i] -= c * x
    assert not any(num[:dd]), "cyclotomic division left a remainder"
    return out


@lru_cache(maxsize=None)
def _reducer(m: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    poly = cyclotomic_poly(m)
    phi = len(poly) - 1
    low = tuple((i, c) for i, c in enumerate(poly[:phi]) if c)
    return phi, low


def _reduce(m: int, acc: list[int]) -> tuple[int, ...]:
    """Reduce an integer polynomial modulo Phi_m (in place on ``acc``)."""
    phi, low = _reducer(m)
    for k in range(len(acc) - 1, phi - 1, -1):
        c = acc[k]
        if c:
            base = k - phi
            for i, x in low:
                acc[base + i] -= c * x
    if len(acc) < phi:
        acc = acc + [0] * (phi - len(acc))
    return tuple(acc[:phi])


@lru_cache(maxsize=None)
def _zeros(m: int) -> tuple[int, ...]:
    return (0,) * euler_phi(m)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """z^e mod Phi_m for e = 0 .. m-1."""
    phi = euler_phi(m)
    cur = [1] + [0] * (phi - 1)
    rows = []
    for _ in range(m):
        rows.append(_reduce(m, list(cur)))
        cur = [0] + list(rows[-1])
    return tuple(rows)


@lru_cache(maxsize=None)
def _basis_traces(m: int) -> tuple[int, ...]:
    """Tr_{Q(z_m)/Q}(z^i) for the power basis (Ramanujan sums)."""
    phi = euler_phi(m)
    out = []
    for i in range(phi):
        q = m // gcd(i, m)
        out.append(_moebius(q) * phi // euler_phi(q))
    return tuple(out)


def _moebius(n: int) -> int:
    sign, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            sign = -sign
        k += 1
    return -sign if n > 1 else sign


class CycNum:
    """An element of Q(zeta_m); immutable."""

    # _root caches k when the value is known to be exactly zeta_m^k
    __slots__ = ("conductor", "num", "den", "_nz", "_root")

    def __init__(self, conductor: int, num, den: int = 1):
        num = tuple(int(x) for x in num)
        if len(num) != euler_phi(conductor):
            raise BadInput(f"expected {euler_phi(conductor)} coefficients for conductor {conductor}")
        if den == 0:
            raise BadInput("zero denominator")
        other = CycNum._norm(conductor, num, int(den))
        self.conductor, self.num, self.den, self._nz, self._root = conductor, other.num, other.den, None, None

    # constructors

    @classmethod
    def _raw(cls, conductor: int, num: tuple[int, ...], den: int) -> "CycNum":
        obj = cls.__new__(cls)
        obj.conductor, obj.num, obj.den, obj._nz, obj._root = conductor, num, den, None, None
        return obj

    @classmethod
    def _norm(cls, conductor: int, num, den: int) -> "CycNum":
        """Normalize integer numerators over ``den`` to lowest terms."""
        if den < 0:
            num, den = [-x for x in num], -den
        g = gcd(den, *num)
        if g == den and not any(num):
            return cls._raw(conductor, tuple(num), 1)
        if g != 1:
            num = [x // g for x in num]
            den //= g
        return cls._raw(conductor, tuple(num), den)

    @classmethod
    def rational(cls, q, conductor: int = 1) -> "CycNum":
        if isinstance(q, int) and not isinstance(q, bool):
            if q == 1:
                return root_of_unity(conductor, 0)
            return cls._raw(conductor, (q,) + _zeros(conductor)[1:], 1)
        q = Fraction(q)
        return cls._norm(conductor, [q.numerator] + [0] * (euler_phi(conductor) - 1), q.denominator)

    @classmethod
    def coerce(cls, x, conductor: int = 1) -> "CycNum":
        if isinstance(x, CycNum):
            return x if x.conductor == conductor else promote(x, conductor)
        if isinstance(x, (int, Rational)):
            return cls.rational(x, conductor)
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")

    # views

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    @property
    def nonzero(self) -> list[tuple[int, int]]:
        if self._nz is None:
            self._nz = [(i, x) for i, x in enumerate(self.num) if x]
        return self._nz

    def is_zero(self) -> bool:
        return not _nz(self)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise BadInput(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(x * z**i for i, x in self.nonzero) / self.den

    def normalized_trace(self) -> Fraction:
        """Tr(x)/phi(m); independent of the conductor used to write x."""
        t = _basis_traces(self.conductor)
        s = sum(x * t[i] for i, x in self.nonzero)
        return Fraction(s, self.den * euler_phi(self.conductor))

    # arithmetic

    def _align(self, other) -> tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            return self, CycNum.coerce(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        m = check_conductor(_lcm(self.conductor, other.conductor))
        return promote(self, m), promote(other, m)

    def __add__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return CycNum._norm(a.conductor, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycNum._norm(a.conductor, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        m = self.conductor
        if self._root is not None and m % 2 == 0:
            return root_of_unity(m, self._root + m // 2)
        return CycNum._raw(m, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return CycNum._norm(a.conductor, [x - y for x, y in zip(a.num, b.num)], a.den)
        return CycNum._norm(a.conductor, [x * b.den - y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        m = a.conductor
        if a._root is not None and b._root is not None:
            return root_of_unity(m, a._root + b._root)
        phi = len(a.num)
        na, nb = a.nonzero, b.nonzero
        if not na or not nb:
            return CycNum._raw(m, _zeros(m), 1)
        acc = [0] * (2 * phi - 1)
        for i, x in na:
            for j, y in nb:
                acc[i + j] += x * y
        return CycNum._norm(m, _reduce(m, acc), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise NotInvertible("zero has no inverse")
        m = self.conductor
        if self._root is not None:
            return root_of_unity(m, -self._root)
        phi = len(self.num)
        if phi == 1:
            return CycNum.rational(Fraction(self.den, self.num[0]), m)
        s = _poly_inverse_mod([Fraction(x, self.den) for x in self.num], cyclotomic_poly(m))
        s = s + [Fraction(0)] * (phi - len(s))
        den = 1
        for c in s:
            den = _lcm(den, c.denominator)
        return CycNum(m, [int(c * den) for c in s], den)

    def __truediv__(self, other):
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other, self.conductor) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycNum) and other.conductor == self.conductor:
            return self.num == other.num and self.den == other.den
        try:
            a, b = self._align(other)
        except (TypeError, ConductorTooLarge):
            return NotImplemented
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash(self.normalized_trace())

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"CycNum({Fraction(self.num[0], self.den)})"
        terms = " + ".join(f"{Fraction(x, self.den)}*z{self.conductor}^{i}" for i, x in self.nonzero)
        return f"CycNum({terms})"

    __str__ = __repr__


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(x) for x in out])


def _poly_inverse_mod(a: list[Fraction], modulus) -> list[Fraction]:
    """Extended Euclid: s with s*a == 1 mod modulus over Q."""
    r0, r1 = [Fraction(x) for x in modulus], _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise NotInvertible("element shares a factor with the cyclotomic polynomial")
    c = r1[0]
    s = [x / c for x in s1]
    _, rem = _poly_divmod(s, [Fraction(x) for x in modulus])
    return rem


def root_of_unity(m: int, k: int = 1) -> CycNum:
    """zeta_m^k in conductor m."""
    check_conductor(m)
    k %= m
    x = CycNum._raw(m, _power_table(m)[k], 1)
    x._root = k
    return x


def promote(x: CycNum, m: int) -> CycNum:
    """Express ``x`` in Q(zeta_m); requires conductor(x) | m."""
    check_conductor(m)
    if m % x.conductor:
        raise NotDivisible(f"conductor {x.conductor} does not divide {m}")
    if m == x.conductor:
        return x
    step = m // x.conductor
    if x._root is not None:
        return root_of_unity(m, x._root * step)
    table = _power_table(m)
    phi = euler_phi(m)
    acc = [0] * phi
    for i, c in x.nonzero:
        row = table[(i * step) % m]
        for j, y in enumerate(row):
            if y:
                acc[j] += c * y
    return CycNum._norm(m, acc, x.den)


def demote(x: CycNum, m: int) -> CycNum:
    """Inverse of :func:`promote`: rewrite ``x`` with conductor ``m`` if it lies in Q(zeta_m)."""
    if x.conductor % m:
        raise NotDivisible(f"conductor {m} does not divide {x.conductor}")
    phi = euler_phi(m)
    basis = [promote(root_of_unity(m, i), x.conductor) for i in range(phi)]
    columns = [[Fraction(c) for c in b.num] for b in basis]
    rows = [[columns[j][i] for j in range(phi)] + [Fraction(x.num[i], x.den)] for i in range(len(x.num))]
    sol = solve_rational(rows)
    if sol is None:
        raise BadInput(f"{x} does not lie in Q(zeta_{m})")
    den = 1
    for c in sol:
        den = _lcm(den, c.denominator)
    return CycNum(m, [int(c * den) for c in sol], den)


def solve_rational(augmented: list[list[Fraction]]) -> list[Fraction] | None:
    """Unique solution of an augmented rational system, or None if inconsistent.

    Free variables are set to zero.
    """
    m = [list(r) for r in augmented]
    if not m:
        return []
    ncols = len(m[0]) - 1
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][-1]
    return sol


def root_of_unity_order(x: CycNum) -> int | None:
    """Multiplicative order of ``x`` if it is a root of unity, else None."""
    bound = _lcm(2, x.conductor)
    one = CycNum.rational(1, x.conductor)
    y = x
    for k in range(1, bound + 1):
        if y == one:
            return k
        y = y * x
    return None


# matrices


def _nz(x: CycNum) -> bool:
    """Cheap nonzero test."""
    return x._root is not None or any(x.num)


def _dot(m: int, pairs) -> CycNum:
    """Sum of products with a single reduction modulo Phi_m."""
    return _dot_live(m, [(a, b) for a, b in pairs if _nz(a) and _nz(b)])


def _dot_live(m: int, live) -> CycNum:
    """As :func:`_dot`, for pairs already known to be nonzero."""
    phi = euler_phi(m)
    if not live:
        return CycNum._raw(m, _zeros(m), 1)
    if len(live) == 1:
        return live[0][0] * live[0][1]
    D = 1
    for a, b in live:
        D = _lcm(D, a.den * b.den)
    acc = [0] * (2 * phi - 1)
    for a, b in live:
        f = D // (a.den * b.den)
        nb = b.nonzero
        for i, x in a.nonzero:
            xf = x * f
            for j, y in nb:
                acc[i + j] += xf * y
    return CycNum._norm(m, _reduce(m, acc), D)


class CycMatrix:
    """Dense matrix over Q(zeta_m); all entries share the conductor ``m``."""

    __slots__ = ("rows", "cols", "conductor", "entries", "_key")

    def __init__(self, rows: int, cols: int, entries, conductor: int | None = None):
        entries = list(entries)
        if rows < 1 or cols < 1 or len(entries) != rows * cols:
            raise DimensionMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        if conductor is None:
            conductor = 1
            for e in entries:
                if isinstance(e, CycNum):
                    conductor = _lcm(conductor, e.conductor)
        check_conductor(conductor)
        self.rows = rows
        self.cols = cols
        self.conductor = conductor
        self.entries = tuple(CycNum.coerce(e, conductor) for e in entries)
        self._key = None

    @classmethod
    def from_rows(cls, rows, conductor: int | None = None) -> "CycMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged or empty row list")
        return cls(len(rows), len(rows[0]), [e for r in rows for e in r], conductor)

    @classmethod
    @lru_cache(maxsize=256)
    def identity(cls, d: int, conductor: int = 1) -> "CycMatrix":
        return cls(d, d, [1 if i == j else 0 for i in range(d) for j in range(d)], conductor)

    @classmethod
    def diagonal(cls, diag, conductor: int | None = None) -> "CycMatrix":
        d = len(diag)
        return cls(d, d, [diag[i] if i == j else 0 for i in range(d) for j in range(d)], conductor)

    def __getitem__(self, ij) -> CycNum:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[CycNum, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def key(self) -> tuple:
        """Canonical hashable form; only meaningful among matrices of one conductor."""
        if self._key is None:
            self._key = (self.rows, self.cols, self.conductor,
                         tuple((e.num, e.den) for e in self.entries))
        return self._key

    def promote(self, m: int) -> "CycMatrix":
        if m == self.conductor:
            return self
        return CycMatrix(self.rows, self.cols, [promote(e, m) for e in self.entries], m)

    def _aligned(self, other: "CycMatrix") -> tuple["CycMatrix", "CycMatrix"]:
        if self.conductor == other.conductor:
            return self, other
        m = check_conductor(_lcm(self.conductor, other.conductor))
        return self.promote(m), other.promote(m)

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a, b = self._aligned(other)
        m = a.conductor
        n, k, c = a.rows, a.cols, b.cols
        ae, be = a.entries, b.entries
        za = [_nz(x) for x in ae]
        zb = [_nz(x) for x in be]
        out = []
        for i in range(n):
            r = i * k
            for j in range(c):
                out.append(_dot_live(m, [(ae[r + t], be[t * c + j]) for t in range(k)
                                         if za[r + t] and zb[t * c + j]]))
        return CycMatrix._make(n, c, m, out)

    @classmethod
    def _make(cls, rows, cols, conductor, entries) -> "CycMatrix":
        obj = cls.__new__(cls)
        obj.rows, obj.cols, obj.conductor = rows, cols, conductor
        obj.entries = tuple(entries)
        obj._key = None
        return obj

    def scale(self, s) -> "CycMatrix":
        s = s if isinstance(s, CycNum) else CycNum.coerce(s)
        m = check_conductor(_lcm(self.conductor, s.conductor))
        s = promote(s, m)
        return CycMatrix._make(self.rows, self.cols, m, [s * promote(e, m) for e in self.entries])

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        a, b = self._aligned(other)
        return CycMatrix._make(a.rows, a.cols, a.conductor, [x + y for x, y in zip(a.entries, b.entries)])

    def __neg__(self) -> "CycMatrix":
        return CycMatrix._make(self.rows, self.cols, self.conductor, [-x for x in self.entries])

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in subtraction")
        a, b = self._aligned(other)
        return CycMatrix._make(a.rows, a.cols, a.conductor, [x - y for x, y in zip(a.entries, b.entries)])

    def minus_identity(self) -> "CycMatrix":
        """self - I, touching only the diagonal."""
        if not self.is_square:
            raise DimensionMismatch("minus_identity needs a square matrix")
        d = self.rows
        out = list(self.entries)
        for i in range(d):
            e = out[i * d + i]
            num = list(e.num)
            num[0] -= e.den
            out[i * d + i] = CycNum._norm(e.conductor, num, e.den)
        return CycMatrix._make(d, d, self.conductor, out)

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        if self.conductor == other.conductor:
            return self.key == other.key
        return all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(hash(e) for e in self.entries)))

    def __repr__(self):
        rows = ["[" + ", ".join(str(self[i, j]) for j in range(self.cols)) + "]" for i in range(self.rows)]
        return f"CycMatrix({', '.join(rows)})"

    def transpose(self) -> "CycMatrix":
        return CycMatrix._make(self.cols, self.rows, self.conductor,
                               [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_identity(self) -> bool:
        if not self.is_square:
            return False
        for i in range(self.rows):
            for j in range(self.cols):
                e = self[i, j]
                if i == j:
                    if e.den != 1 or e.num[0] != 1 or any(e.num[1:]):
                        return False
                elif _nz(e):
                    return False
        return True

    def trace(self) -> CycNum:
        if not self.is_square:
            raise DimensionMismatch("trace of a non-square matrix")
        t = CycNum.rational(0, self.conductor)
        for i in range(self.rows):
            t = t + self[i, i]
        return t

    def det(self) -> CycNum:
        if not self.is_square:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        m = self.conductor
        a = self
        if n == 1:
            return a[0, 0]
        if n == 2:
            return _dot(m, [(a[0, 0], a[1, 1]), (-a[0, 1], a[1, 0])])
        if n == 3:
            return (a[0, 0] * _dot(m, [(a[1, 1], a[2, 2]), (-a[1, 2], a[2, 1])])
                    - a[0, 1] * _dot(m, [(a[1, 0], a[2, 2]), (-a[1, 2], a[2, 0])])
                    + a[0, 2] * _dot(m, [(a[1, 0], a[2, 1]), (-a[1, 1], a[2, 0])]))
        return _bareiss_det([list(self.row(i)) for i in range(n)], m)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "CycMatrix":
        """Gauss-Jordan inverse; raises NotInvertible for singular input."""
        if not self.is_square:
            raise DimensionMismatch("inverse of a non-square matrix")
        n, m = self.rows, self.conductor
        one, zero = CycNum.rational(1, m), CycNum.rational(0, m)
        aug = [list(self.row(i)) + [one if i == j else zero for j in range(n)] for i in range(n)]
        for c in range(n):
            p = next((i for i in range(c, n) if _nz(aug[i][c])), None)
            if p is None:
                raise NotInvertible("singular matrix")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for i in range(n):
                if i != c and _nz(aug[i][c]):
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return CycMatrix(n, n, [aug[i][n + j] for i in range(n) for j in range(n)], m)


def _bareiss_det(a: list[list[CycNum]], m: int) -> CycNum:
    n = len(a)
    sign = 1
    prev = CycNum.rational(1, m)
    for k in range(n - 1):
        if a[k][k].is_zero():
            p = next((i for i in range(k + 1, n) if _nz(a[i][k])), None)
            if p is None:
                return CycNum.rational(0, m)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        inv_prev = prev.inverse()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _dot(m, [(a[i][j], a[k][k]), (-a[i][k], a[k][j])]) * inv_prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def rank(M: CycMatrix) -> int:
    """Exact rank by fraction-free elimination (only zero tests, no inverses)."""
    rows = [list(M.row(i)) for i in range(M.rows)]
    m = M.conductor
    r = 0
    for c in range(M.cols):
        p = next((i for i in range(r, len(rows)) if _nz(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        pc = piv[c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if _nz(f):
                rows[i] = [_dot(m, [(pc, x), (-f, y)]) for x, y in zip(rows[i], piv)]
        r += 1
        if r == len(rows):
            break
    return r


# JSON wire format


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise BadInput(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise BadInput(f"not a rational: {s!r}")


def cycnum_to_json(x: CycNum) -> dict:
    return {"conductor": x.conductor,
            "terms": [[i, _frac_str(Fraction(c, x.den))] for i, c in x.nonzero]}


def cycnum_from_json(obj) -> CycNum:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return CycNum.rational(parse_rational(obj))
    try:
        m = obj["conductor"]
        terms = obj["terms"]
    except (TypeError, KeyError) as exc:
        raise BadInput(f"malformed cyclotomic number: {obj!r}") from exc
    if not isinstance(m, int) or isinstance(m, bool):
        raise BadInput(f"malformed conductor: {m!r}")
    check_conductor(m)
    phi = euler_phi(m)
    coeffs = [Fraction(0)] * phi
    try:
        for i, c in terms:
            if not isinstance(i, int) or not 0 <= i < phi:
                raise BadInput(f"power-basis index {i!r} out of range for conductor {m}")
            coeffs[i] += parse_rational(c)
    except (TypeError, ValueError) as exc:
        raise BadInput(f"malformed terms: {terms!r}") from exc
    den = 1
    for c in coeffs:
        den = _lcm(den, c.denominator)
    return CycNum(m, [int(c * den) for c in coeffs], den)


def matrix_to_json(M: CycMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "conductor": M.conductor,
            "entries": [[cycnum_to_json(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]}


def matrix_from_json(obj) -> CycMatrix:
    try:
        rows = obj["entries"]
        parsed = [[cycnum_from_json(e) for e in row] for row in rows]
    except (TypeError, KeyError) as exc:
        raise BadInput(f"malformed matrix: {obj!r}") from exc
    M = CycMatrix.from_rows(parsed, obj.get("conductor"))
    if obj.get("rows", M.rows) != M.rows or obj.get("cols", M.cols) != M.cols:
        raise DimensionMismatch("declared shape does not match entries")
    return M
