"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(n)-1) as an
integer numerator vector over one positive common denominator, always
reduced modulo the cyclotomic polynomial and always in lowest terms.  That
makes equality and zero tests plain tuple comparisons.

The deformation parameter q = exp(i pi / (L + 2)) is the canonical
generator zeta of the field of order n = 2(L + 2).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import ZeroDivisorError

__all__ = [
    "CycloField",
    "CycloNum",
    "cyclo_field",
    "cyclotomic_polynomial",
    "q_power",
    "ch_coeff",
    "sh_coeff",
    "to_complex",
]


def _int_poly_divexact(a, b):
    """Quotient of integer polynomials (ascending lists) when b is monic and divides a."""
    a = list(a)
    db = len(b) - 1
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    if any(a):
        raise ArithmeticError("non-exact integer polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Computed as (x^n - 1) divided by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic_polynomial requires n >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


# --- rational polynomial helpers (used only for inversion) -----------------

def _qp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qp_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv_lead = 1 / Fraction(b[-1])
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return _qp_trim(q), _qp_trim(a[:db])


def _qp_sub_mul(a, q, b):
    """a - q*b for rational polynomials."""
    out = [Fraction(0)] * max(len(a), len(q) + len(b) - 1 if q and b else 0)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(q):
        if c:
            for j, d in enumerate(b):
                out[i + j] -= c * d
    return _qp_trim(out)


class CycloField:
    """The field Q(zeta_n); obtain instances through :func:`cyclo_field`."""

    __slots__ = ("n", "modulus", "degree", "_zeta_pows", "_zero", "_one", "__weakref__")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("field order must be positive")
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        pows = []
        vec = [1] + [0] * (self.degree - 1)
        for _ in range(n):
            pows.append(tuple(vec))
            vec = self.reduce([0] + vec)
        self._zeta_pows = tuple(pows)
        self._zero = CycloNum._raw(self, (0,) * self.degree, 1)
        self._one = CycloNum._raw(self, (1,) + (0,) * (self.degree - 1), 1)

    def __repr__(self):
        return f"CycloField({self.n})"

    def __reduce__(self):
        return (cyclo_field, (self.n,))

    # integer vector reduction modulo Phi_n
    def reduce(self, vec):
        phi = self.degree
        if len(vec) <= phi:
            return list(vec) + [0] * (phi - len(vec))
        v = list(vec)
        mod = self.modulus
        for i in range(len(v) - 1, phi - 1, -1):
            c = v[i]
            if c:
                base = i - phi
                for j in range(phi):
                    if mod[j]:
                        v[base + j] -= c * mod[j]
        return v[:phi]

    @property
    def zero(self) -> "CycloNum":
        return self._zero

    @property
    def one(self) -> "CycloNum":
        return self._one

    @property
    def gen(self) -> "CycloNum":
        return q_power(self, 1)

    def __call__(self, value) -> "CycloNum":
        """Coerce an int, Fraction or CycloNum of this field."""
        if isinstance(value, CycloNum):
            if value.field is not self:
                raise ValueError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, Rational):
            f = Fraction(value)
            return CycloNum._make(self, [f.numerator] + [0] * (self.degree - 1), f.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def element(self, coeffs) -> "CycloNum":
        """Build sum(c_k zeta^k) from rationals; longer inputs are reduced mod Phi_n."""
        fr = [Fraction(c) for c in coeffs]
        if not fr:
            return self._zero
        den = math.lcm(*(c.denominator for c in fr))
        nums = [c.numerator * (den // c.denominator) for c in fr]
        return CycloNum._make(self, self.reduce(nums), den)

    def zeta_vector(self, k: int):
        return self._zeta_pows[k % self.n]


@lru_cache(maxsize=None)
def cyclo_field(n: int) -> CycloField:
    return CycloField(n)


class CycloNum:
    """Immutable element of Q(zeta_n)."""

    __slots__ = ("field", "num", "den")

    @classmethod
    def _raw(cls, field, num, den):
        self = object.__new__(cls)
        self.field = field
        self.num = num
        self.den = den
        return self

    @classmethod
    def _make(cls, field, num, den):
        if den < 0:
            num = [-x for x in num]
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            num = [x // g for x in num]
            den //= g
        return cls._raw(field, tuple(num), den)

    # --- views -----------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def height(self) -> int:
        return max(self.den, *(abs(x) for x in self.num))

    # --- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, Rational):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.n, self.num, self.den))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c})*z{self.field.n}^{k}")
        return "CycloNum(" + (" + ".join(terms) or "0") + ")"

    # --- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.field is not self.field:
                raise ValueError(f"mixing {self.field} and {other.field}")
            return other
        if isinstance(other, Rational):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycloNum._make(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        da, db = self.den, o.den
        return CycloNum._make(self.field, [a * db + b * da for a, b in zip(self.num, o.num)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw(self.field, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational):
            f = Fraction(other)
            return CycloNum._make(self.field, [x * f.numerator for x in self.num], self.den * f.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, o.num
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloNum._make(self.field, self.field.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def times_zeta(self, k: int) -> "CycloNum":
        """Multiply by zeta^k (cheap rotation)."""
        k %= self.field.n
        if k == 0:
            return self
        pows = self.field._zeta_pows
        phi = self.field.degree
        out = [0] * phi
        for t, x in enumerate(self.num):
            if x:
                vec = pows[(k + t) % self.field.n]
                for j in range(phi):
                    if vec[j]:
                        out[j] += x * vec[j]
        return CycloNum._raw(self.field, tuple(out), self.den)

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse via extended Euclid against Phi_n."""
        if self.is_zero():
            raise ZeroDivisorError("inverse of zero in " + repr(self.field))
        # r0 = Phi_n, r1 = a; track s with s*a = r (mod Phi_n)
        r0 = [Fraction(c) for c in self.field.modulus]
        r1 = _qp_trim([Fraction(c) for c in self.num])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            quo, rem = _qp_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qp_sub_mul(s0, quo, s1)
        c = r1[0] / self.den
        return self.field.element([x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, Rational):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisorError("division by zero")
            return CycloNum._make(self.field, [x * f.denominator for x in self.num], self.den * f.numerator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycloNum":
        """Complex conjugate, i.e. the automorphism zeta -> zeta^-1."""
        f = self.field
        out = [0] * f.degree
        for k, x in enumerate(self.num):
            if x:
                vec = f._zeta_pows[(-k) % f.n]
                for j in range(f.degree):
                    if vec[j]:
                        out[j] += x * vec[j]
        return CycloNum._raw(f, tuple(out), self.den)

    def embed(self, target: CycloField) -> "CycloNum":
        """Image under the canonical inclusion Q(zeta_n) -> Q(zeta_m), n | m."""
        if target.n % self.field.n:
            raise ValueError(f"{self.field} does not embed in {target}")
        r = target.n // self.field.n
        out = [0] * target.degree
        for k, x in enumerate(self.num):
            if x:
                vec = target._zeta_pows[(k * r) % target.n]
                for j in range(target.degree):
                    if vec[j]:
                        out[j] += x * vec[j]
        return CycloNum._make(target, out, self.den)

    def to_complex(self) -> complex:
        return to_complex(self)

    # --- JSON ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.field.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloNum":
        field = cyclo_field(int(data["n"]))
        coeffs = data["coeffs"]
        if len(coeffs) != field.degree:
            raise ValueError(f"expected {field.degree} coefficients, got {len(coeffs)}")
        return field.element(Fraction(c) for c in coeffs)


def q_power(field: CycloField, k: int) -> CycloNum:
    """zeta^k, with k taken modulo the field order."""
    return CycloNum._raw(field, field.zeta_vector(k), 1)


def ch_coeff(field: CycloField, a: int) -> CycloNum:
    """q^a + q^-a, i.e. 2 ch(a pi i / (L+2)) at q = zeta."""
    return q_power(field, a) + q_power(field, -a)


def sh_coeff(field: CycloField, a: int) -> CycloNum:
    """q^a - q^-a, i.e. 2 sh(a pi i / (L+2)) at q = zeta."""
    return q_power(field, a) - q_power(field, -a)


def to_complex(x: CycloNum) -> complex:
    """Evaluate at zeta = exp(2 pi i / n) in double precision."""
    n = x.field.n
    acc = 0j
    for k, c in enumerate(x.num):
        if c:
            acc += (c / x.den) * cmath.exp(2j * math.pi * k / n)
    return acc
