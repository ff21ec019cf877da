"""Dense univariate polynomials with cyclotomic coefficients.

A :class:`FieldPoly` is either a polynomial in ``z`` or in ``w = z**(1/2)``;
the flag only records how the exponents are to be read, the arithmetic is
identical.  Multiplication packs both the variable and the zeta direction
into one big integer (Kronecker substitution) and lets gmpy2 do the
convolution; everything else is schoolbook.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb
from numbers import Rational

import gmpy2

from .errors import NonZeroRemainder, ZeroDivisorError
from .field import CycloField, CycloNum, q_power

VARS = ("z", "w")


def _coerce_coeff(field, c):
    if isinstance(c, CycloNum):
        if c.field is not field:
            raise ValueError(f"coefficient from {c.field} in a polynomial over {field}")
        return c
    return field(c)


class FieldPoly:
    """Immutable polynomial; ``coeffs[j]`` multiplies ``var**j``."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: CycloField, coeffs=(), var: str = "z"):
        if var not in VARS:
            raise ValueError(f"var must be one of {VARS}")
        cs = [_coerce_coeff(field, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def _raw(cls, field, coeffs, var):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self = object.__new__(cls)
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var
        return self

    # --- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, field, var="z"):
        return cls._raw(field, (), var)

    @classmethod
    def one(cls, field, var="z"):
        return cls._raw(field, (field.one,), var)

    @classmethod
    def monomial(cls, field, degree, coeff=1, var="z"):
        c = _coerce_coeff(field, coeff)
        return cls._raw(field, (field.zero,) * degree + (c,), var)

    @classmethod
    def binomial_power(cls, field, e, k=0, var="z"):
        """(zeta^k * var - 1)**e."""
        base = cls._raw(field, [field((-1) ** (e - j) * comb(e, j)) for j in range(e + 1)], var)
        return base.scale_arg(k) if k else base

    # --- basic views ---------------------------------------------------------
    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j) -> CycloNum:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return self.field.zero

    @property
    def leading(self) -> CycloNum:
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def height(self) -> int:
        return max((c.height() for c in self.coeffs), default=0)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def rational_coeffs(self) -> list[Fraction]:
        return [c.rational() for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, FieldPoly):
            return self.field is other.field and self.var == other.var and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field.n, self.var, self.coeffs))

    def __repr__(self):
        return f"FieldPoly(n={self.field.n}, var={self.var}, degree={self.degree})"

    # --- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if self.field is not other.field:
            raise ValueError(f"polynomials over {self.field} and {other.field}")
        if self.var != other.var:
            raise ValueError(f"polynomials in {self.var} and {other.var}")

    def _lift(self, other):
        if isinstance(other, FieldPoly):
            self._check(other)
            return other
        if isinstance(other, (CycloNum, Rational)):
            return FieldPoly._raw(self.field, (_coerce_coeff(self.field, other),), self.var)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return FieldPoly._raw(self.field, out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return FieldPoly._raw(self.field, [-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (CycloNum, Rational)):
            c = _coerce_coeff(self.field, other)
            if c.is_zero():
                return FieldPoly.zero(self.field, self.var)
            return FieldPoly._raw(self.field, [x * c for x in self.coeffs], self.var)
        if not isinstance(other, FieldPoly):
            return NotImplemented
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return FieldPoly.zero(self.field, self.var)
        return FieldPoly._raw(self.field, _kronecker_mul(self.field, self.coeffs, other.coeffs), self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result, base = FieldPoly.one(self.field, self.var), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "FieldPoly":
        """Multiply by var**k (k >= 0)."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs or k == 0:
            return self
        return FieldPoly._raw(self.field, (self.field.zero,) * k + self.coeffs, self.var)

    def scale_arg(self, k: int) -> "FieldPoly":
        """P(zeta^k * var): coefficient j picks up zeta^(k*j)."""
        n = self.field.n
        if k % n == 0:
            return self
        return FieldPoly._raw(
            self.field, [c.times_zeta(k * j % n) for j, c in enumerate(self.coeffs)], self.var
        )

    def divmod(self, divisor: "FieldPoly"):
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisorError("polynomial division by zero")
        db = divisor.degree
        rem = list(self.coeffs)
        if len(rem) <= db:
            return FieldPoly.zero(self.field, self.var), self
        lead = divisor.leading
        inv = None if lead == 1 else lead.inverse()
        dcs = divisor.coeffs
        quot = [self.field.zero] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c.is_zero():
                continue
            if inv is not None:
                c = c * inv
            quot[i - db] = c
            base = i - db
            for j in range(db):
                if not dcs[j].is_zero():
                    rem[base + j] = rem[base + j] - c * dcs[j]
            rem[i] = self.field.zero
        return (FieldPoly._raw(self.field, quot, self.var),
                FieldPoly._raw(self.field, rem[:db], self.var))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def evaluate(self, x) -> CycloNum:
        x = _coerce_coeff(self.field, x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def monic(self) -> "FieldPoly":
        if self.is_zero() or self.leading == 1:
            return self
        return self * self.leading.inverse()

    def embed(self, target: CycloField) -> "FieldPoly":
        return FieldPoly._raw(target, [c.embed(target) for c in self.coeffs], self.var)

    def to_w(self, target: CycloField | None = None) -> "FieldPoly":
        """Rewrite a z-polynomial in w = z**(1/2) (exponents doubled)."""
        if self.var != "z":
            raise ValueError("to_w expects a polynomial in z")
        p = self if target is None else self.embed(target)
        out = []
        for c in p.coeffs:
            out.extend((c, p.field.zero))
        return FieldPoly._raw(p.field, out[:-1] if out else out, "w")

    # --- output ------------------------------------------------------------
    def to_json(self) -> dict:
        return {"var": self.var, "n": self.field.n, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "FieldPoly":
        from .field import cyclo_field

        field = cyclo_field(int(data["n"]))
        coeffs = [CycloNum.from_json(c) for c in data["coeffs"]]
        for c in coeffs:
            if c.field is not field:
                raise ValueError("coefficient field does not match polynomial field")
        return cls(field, coeffs, data.get("var", "z"))

    def to_latex(self, gen: str = "q") -> str:
        return to_latex(self, gen)


# --- free functions mirroring the method surface ---------------------------

def scale_arg(P: FieldPoly, k: int) -> FieldPoly:
    return P.scale_arg(k)


def evaluate(P: FieldPoly, x) -> CycloNum:
    return P.evaluate(x)


def exact_div(A: FieldPoly, B: FieldPoly) -> FieldPoly:
    """A / B, raising :class:`NonZeroRemainder` unless B divides A."""
    quot, rem = A.divmod(B)
    if not rem.is_zero():
        raise NonZeroRemainder(rem)
    return quot


def extended_gcd(A: FieldPoly, B: FieldPoly):
    """Return (G, S, T) with S*A + T*B = G and G monic."""
    A._check(B)
    if A.is_zero() and B.is_zero():
        raise ValueError("extended_gcd of two zero polynomials")
    field, var = A.field, A.var
    r0, r1 = A, B
    s0, s1 = FieldPoly.one(field, var), FieldPoly.zero(field, var)
    t0, t1 = FieldPoly.zero(field, var), FieldPoly.one(field, var)
    while not r1.is_zero():
        quo, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    inv = r0.leading.inverse()
    return r0 * inv, s0 * inv, t0 * inv


def to_latex(P: FieldPoly, gen: str = "q") -> str:
    """Human-readable LaTeX; ``gen`` names the field generator."""
    if P.is_zero():
        return "0"
    parts = []
    for j in range(P.degree, -1, -1):
        c = P.coeffs[j]
        if c.is_zero():
            continue
        mono = "" if j == 0 else (P.var if j == 1 else f"{P.var}^{{{j}}}")
        if c.is_rational():
            r = c.rational()
            sign = "-" if r < 0 else "+"
            r = abs(r)
            if r == 1 and mono:
                body = mono
            elif r.denominator == 1:
                body = f"{r.numerator}{mono}"
            else:
                body = f"\\frac{{{r.numerator}}}{{{r.denominator}}}{mono}"
        else:
            sign = "+"
            body = f"\\left({_cyclo_latex(c, gen)}\\right){mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _cyclo_latex(c: CycloNum, gen: str) -> str:
    terms = []
    for k, r in enumerate(c.coeffs):
        if not r:
            continue
        mono = "" if k == 0 else (gen if k == 1 else f"{gen}^{{{k}}}")
        mag = abs(r)
        if mag == 1 and mono:
            body = mono
        elif mag.denominator == 1:
            body = f"{mag.numerator}{mono}"
        else:
            body = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}{mono}"
        terms.append(("-" if r < 0 else "+", body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# --- Kronecker multiplication ----------------------------------------------

def _common_rows(coeffs):
    den = math.lcm(*(c.den for c in coeffs))
    rows = []
    biggest = 0
    for c in coeffs:
        f = den // c.den
        row = [x * f for x in c.num] if f != 1 else list(c.num)
        rows.append(row)
        for x in row:
            ax = -x if x < 0 else x
            if ax > biggest:
                biggest = ax
    return rows, den, biggest


def _pack(rows, nb, pad):
    """Signed packing: returns the integer sum(row[k] * 2^(8*nb*(i*S + k)))."""
    pos, neg = [], []
    zero = bytes(nb)
    for row in rows:
        for x in row:
            if x >= 0:
                pos.append(x.to_bytes(nb, "little"))
                neg.append(zero)
            else:
                pos.append(zero)
                neg.append((-x).to_bytes(nb, "little"))
        pos.append(pad)
        neg.append(pad)
    p = int.from_bytes(b"".join(pos), "little")
    m = int.from_bytes(b"".join(neg), "little")
    return gmpy2.mpz(p - m) if m else gmpy2.mpz(p)


def _kronecker_mul(field, a, b):
    phi = field.degree
    rows_a, den_a, max_a = _common_rows(a)
    rows_b, den_b, max_b = _common_rows(b)
    bound = min(len(a), len(b)) * phi * max_a * max_b
    nb = (bound.bit_length() + 2 + 7) // 8
    stride = 2 * phi - 1
    pad = bytes(nb * (phi - 1))
    va = _pack(rows_a, nb, pad)
    vb = _pack(rows_b, nb, pad)
    nrows = len(a) + len(b) - 1
    total = nrows * stride
    half = 1 << (8 * nb - 1)
    offset = int.from_bytes((bytes(nb - 1) + b"\x80") * total, "little")
    raw = int(va * vb) + offset
    data = raw.to_bytes(total * nb + 1, "little")
    den = den_a * den_b
    out = []
    frombytes = int.from_bytes
    for i in range(nrows):
        base = i * stride * nb
        vec = [frombytes(data[base + k * nb: base + (k + 1) * nb], "little") - half for k in range(stride)]
        out.append(CycloNum._make(field, field.reduce(vec), den))
    return out
