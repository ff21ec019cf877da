"""Q polynomials of the odd-L spin-L/2 XXZ chain at the combinatorial anisotropy.

Two independent routes produce the same monic polynomial
``Q(z) = prod_j (z - z_j)`` of degree ``p``:

* :func:`solve_q_linear` treats the elementary symmetric functions ``e_j`` of
  the roots as unknowns.  Expanding the TQ relation in powers of ``z`` gives
  one equation per power, each multiplied by a cyclotomic prefactor; rows
  whose prefactor vanishes drop out and the rest are binomial-coefficient
  equations over the rationals.
* :func:`closed_form_q` writes the numerator ``(z - 1)^M Q(z)`` as a short
  alternating sum of monomial pairs and divides by ``(z - 1)^M`` exactly.

:func:`verify_tq` checks a candidate against the twisted TQ relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    InconsistentSystem,
    InvalidParameters,
    InvariantViolation,
    UnderDetermined,
    ZeroDenominator,
)
from .field import CycloField, CycloNum, ch_coeff, cyclo_field, q_power
from .poly import FieldPoly, exact_div


@dataclass(frozen=True, order=True)
class ChainParams:
    """Spin numerator ``L`` (odd), ``M = 2N + 1`` sites, ``p`` Bethe roots."""

    L: int
    N: int
    p: int

    def __post_init__(self):
        L, N, p = self.L, self.N, self.p
        if not all(isinstance(v, int) for v in (L, N, p)):
            raise InvalidParameters("L, N and p must be integers")
        if L < 1 or L % 2 == 0:
            raise InvalidParameters(f"L must be a positive odd integer, got {L}")
        if N < 1:
            raise InvalidParameters(f"N must be positive, got {N}")
        if not N * L <= p <= (N + 1) * L:
            raise InvalidParameters(f"p={p} outside the sector range [{N * L}, {(N + 1) * L}]")

    @property
    def M(self) -> int:
        return 2 * self.N + 1

    @property
    def m(self) -> int:
        """Twice the total spin, ML - 2p."""
        return self.M * self.L - 2 * self.p

    @property
    def sz(self) -> Fraction:
        return Fraction(self.m, 2)

    @property
    def order(self) -> int:
        return 2 * (self.L + 2)

    @property
    def field(self) -> CycloField:
        return cyclo_field(self.order)

    @property
    def twist(self) -> int:
        """Exponent (L+1)m/2 of the q-twist between the two shifted terms."""
        return (self.L + 1) * self.m // 2

    @property
    def half_range(self) -> int:
        """Largest row index N(L+2) + (L+1)/2 used in the S^z = 1/2 presentation."""
        return self.N * (self.L + 2) + (self.L + 1) // 2

    def complement(self) -> "ChainParams":
        """The sector with the opposite total spin."""
        return ChainParams(self.L, self.N, self.M * self.L - self.p)

    @classmethod
    def sectors(cls, L: int, N: int) -> list["ChainParams"]:
        return [cls(L, N, p) for p in range(N * L, (N + 1) * L + 1)]

    @classmethod
    def sz_half(cls, L: int, N: int) -> "ChainParams":
        return cls(L, N, N + (2 * N + 1) * (L - 1) // 2)

    def as_dict(self) -> dict:
        return {"L": self.L, "N": self.N, "p": self.p}


@dataclass(frozen=True)
class Row:
    ell: int
    coeffs: tuple[int, ...]  # multiplies e_1 .. e_p
    constant: int  # the e_0 = 1 contribution

    def as_vector(self) -> tuple[int, ...]:
        """Integer vector (e_0, e_1, ..., e_p)."""
        return (self.constant,) + self.coeffs


@dataclass(frozen=True)
class LinearSystem:
    params: ChainParams
    rows: tuple[Row, ...]
    dropped: tuple[int, ...]

    @property
    def kept(self) -> tuple[int, ...]:
        return tuple(r.ell for r in self.rows)

    def half_range_rows(self) -> tuple[Row, ...]:
        return tuple(r for r in self.rows if r.ell <= self.params.half_range)


@dataclass
class QPolynomial:
    params: ChainParams
    poly: FieldPoly
    elementary: tuple[Fraction, ...]

    @classmethod
    def from_elementary(cls, params: ChainParams, elementary) -> "QPolynomial":
        e = tuple(Fraction(x) for x in elementary)
        p = len(e) - 1
        coeffs = [(-1) ** (p - k) * e[p - k] for k in range(p + 1)]
        return cls(params, FieldPoly(params.field, coeffs), e)

    @classmethod
    def from_poly(cls, params: ChainParams, poly: FieldPoly) -> "QPolynomial":
        if not poly.is_rational():
            raise InvariantViolation("Q has coefficients outside the rational subfield")
        c = poly.rational_coeffs()
        p = len(c) - 1
        e = tuple((-1) ** j * c[p - j] for j in range(p + 1))
        return cls(params, poly, e)

    @property
    def degree(self) -> int:
        return self.poly.degree

    def coefficients(self) -> list[Fraction]:
        """Rational coefficients, constant term first."""
        return self.poly.rational_coeffs()

    def check(self) -> "QPolynomial":
        """Raise :class:`InvariantViolation` unless monic, Q(0) = 1 and palindromic."""
        e, p = self.elementary, self.params.p
        if self.poly.degree != p or len(e) != p + 1:
            raise InvariantViolation(f"degree {self.poly.degree} != p = {p}")
        if not self.poly.is_rational():
            raise InvariantViolation("Q has coefficients outside the rational subfield")
        if e[0] != 1:
            raise InvariantViolation("Q is not monic")
        if (-1) ** p * e[p] != 1:
            raise InvariantViolation("Q(0) != 1")
        sign = (-1) ** p
        for j in range(p + 1):
            if e[p - j] != sign * e[j]:
                raise InvariantViolation(f"palindrome fails at j={j}")
        return self

    def __eq__(self, other):
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.params == other.params and self.elementary == other.elementary

    def to_json(self) -> dict:
        return {**self.params.as_dict(), "elementary": [str(x) for x in self.elementary]}

    @classmethod
    def from_json(cls, data: dict) -> "QPolynomial":
        params = ChainParams(int(data["L"]), int(data["N"]), int(data["p"]))
        return cls.from_elementary(params, [Fraction(x) for x in data["elementary"]])

    def to_latex(self) -> str:
        return self.poly.to_latex()


@dataclass(frozen=True)
class ClosedFormQ:
    params: ChainParams
    plus_terms: tuple[Fraction, ...]
    minus_terms: tuple[Fraction, ...]
    parity: str  # "even" | "odd", the parity of N

    def numerator(self) -> dict[int, Fraction]:
        """Exponent -> coefficient of (z - 1)^M Q(z)."""
        L, N, p = self.params.L, self.params.N, self.params.p
        offset = p + 1 - L * N
        top = p + 1 + 2 * N
        out: dict[int, Fraction] = {}

        def add(e, c):
            out[e] = out.get(e, Fraction(0)) + c

        for k, c in enumerate(self.plus_terms):
            add(top - (L + 2) * k, c)
            add((L + 2) * k, -c)
        for k, c in enumerate(self.minus_terms):
            add((L + 2) * (N - k), c)
            add(offset + (L + 2) * k, -c)
        return {e: c for e, c in out.items() if c}


def row_prefactor(params: ChainParams, ell: int) -> CycloNum:
    """Cyclotomic factor in front of the z^(M+p-ell) equation."""
    K, c = params.field, params.twist
    return ch_coeff(K, 2 * ell - c) - ch_coeff(K, c)


def build_linear_system(params: ChainParams) -> LinearSystem:
    M, p = params.M, params.p
    rows, dropped = [], []
    for ell in range(M + p + 1):
        if row_prefactor(params, ell).is_zero():
            dropped.append(ell)
            continue
        coeffs = tuple(comb(M, ell - j) if 0 <= ell - j <= M else 0 for j in range(1, p + 1))
        constant = comb(M, ell) if ell <= M else 0
        rows.append(Row(ell, coeffs, constant))
    return LinearSystem(params, tuple(rows), tuple(dropped))


def _bits(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def _gauss_jordan(matrix, nvars):
    """Reduce an augmented rational matrix in place; return the pivot columns.

    Among the candidate pivots in a column the one with the shortest
    numerator+denominator bit length is used.
    """
    pivots = []
    r = 0
    nrows = len(matrix)
    for col in range(nvars):
        best = None
        for i in range(r, nrows):
            v = matrix[i][col]
            if v and (best is None or _bits(v) < _bits(matrix[best][col])):
                best = i
        if best is None:
            continue
        matrix[r], matrix[best] = matrix[best], matrix[r]
        piv = matrix[r]
        inv = 1 / piv[col]
        for k in range(col, nvars + 1):
            piv[k] *= inv
        for i in range(nrows):
            if i != r and matrix[i][col]:
                f = matrix[i][col]
                row = matrix[i]
                for k in range(col, nvars + 1):
                    if piv[k]:
                        row[k] -= f * piv[k]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return pivots


def solve_q_linear(system: LinearSystem) -> QPolynomial:
    """Exact elimination over every kept row; the system is consistent by construction."""
    params = system.params
    p = params.p
    matrix = [[Fraction(c) for c in row.coeffs] + [Fraction(-row.constant)] for row in system.rows]
    pivots = _gauss_jordan(matrix, p)
    for row in matrix[len(pivots):]:
        if row[p]:
            raise InconsistentSystem(f"kept rows contradict each other for {params}")
    if len(pivots) < p:
        raise UnderDetermined(len(pivots), p)
    e = [Fraction(1)] + [Fraction(0)] * p
    for i, col in enumerate(pivots):
        e[col + 1] = matrix[i][p]
    return QPolynomial.from_elementary(params, e).check()


def closed_form_terms(params: ChainParams) -> ClosedFormQ:
    L, N, p = params.L, params.N, params.p
    offset = p + 1 - L * N
    step = L + 2
    if N % 2 == 0:
        n_plus, n_minus, parity = N // 2 + 1, N // 2, "even"
    else:
        n_plus, n_minus, parity = (N + 1) // 2, (N + 1) // 2, "odd"

    def coefficient(k, sign):
        value = Fraction((-1) ** k * comb(N, k))
        for j in range(N + 1):
            den = sign * offset + step * (j - k)
            if den == 0:
                raise ZeroDenominator(f"vanishing denominator at k={k}, j={j} for {params}")
            value *= Fraction(offset + step * j, den)
        return value

    plus = tuple(coefficient(k, 1) for k in range(n_plus))
    minus = tuple(coefficient(k, -1) for k in range(n_minus))
    return ClosedFormQ(params, plus, minus, parity)


def closed_form_q(params: ChainParams) -> tuple[ClosedFormQ, QPolynomial]:
    form = closed_form_terms(params)
    num = form.numerator()
    K = params.field
    coeffs = [Fraction(0)] * (max(num) + 1)
    for e, c in num.items():
        coeffs[e] = c
    numerator = FieldPoly(K, coeffs)
    quotient = exact_div(numerator, FieldPoly.binomial_power(K, params.M))
    return form, QPolynomial.from_poly(params, quotient).check()


def transfer_eigenvalue(params: ChainParams) -> CycloNum:
    """2 ch((L+1)(ML-2p) pi i / (2(L+2))) as an element of Q(q)."""
    return ch_coeff(params.field, params.twist)


def tq_residual(params: ChainParams, Q: FieldPoly) -> FieldPoly:
    """tau (z-1)^M Q(z) - q^c (zq^-2 - 1)^M Q(zq^-2) - q^-c (zq^2 - 1)^M Q(zq^2)."""
    K = params.field
    G = FieldPoly.binomial_power(K, params.M) * Q
    a = q_power(K, params.twist)
    a_inv = q_power(K, -params.twist)
    tau = transfer_eigenvalue(params)
    return G * tau - G.scale_arg(-2) * a - G.scale_arg(2) * a_inv


def verify_tq(Q: QPolynomial) -> FieldPoly:
    """Residual of the TQ relation; the zero polynomial when Q solves it."""
    return tq_residual(Q.params, Q.poly)
