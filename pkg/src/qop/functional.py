"""Right/wrong-side pairs, quantum Wronskians and the P = FQ + C decomposition.

For a solved ``Q`` in sector ``p`` the complementary sector ``p' = ML - p``
carries the same transfer eigenvalue; its solution ``P`` is paired with
``Q``.  Every relation between the two is checked as an exact polynomial
identity and reported with its residual.

Twist convention: ``a = q**c`` with ``c = (L+1)(ML-2p)/2`` taken from the
sector of ``Q``, and ``C = q**-c - q**c``.

The rescaled objects ``Qt = z**eQ Q`` and ``Pt = z**eP P`` live in the
variable ``w = z**(1/2)`` over the field of order ``4(L+2)`` whose generator
is ``q**(1/2)``; a shift ``z -> q**k z`` is then ``scale_arg(k)`` on a
w-polynomial.  When an exponent is negative both are multiplied by a
common ``w**shift`` with ``shift`` a multiple of ``2(L+2)``: every t_s then
picks up the same factor ``z**shift``, which is invariant under all
q-shifts, so each identity below stays homogeneous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FSolveSingular, IdentityViolation, NonZeroRemainder, NotCoprime
from .field import CycloField, CycloNum, ch_coeff, cyclo_field, q_power, sh_coeff
from .poly import FieldPoly, exact_div, extended_gcd
from .qsolver import (
    ChainParams,
    QPolynomial,
    closed_form_q,
    build_linear_system,
    solve_q_linear,
    transfer_eigenvalue,
    tq_residual,
)


@dataclass
class IdentityResult:
    name: str
    params: ChainParams
    residual: FieldPoly

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    @property
    def status(self) -> str:
        return "zero" if self.holds else "nonzero"

    def to_json(self) -> dict:
        return {
            "identity_name": self.name,
            "params": self.params.as_dict(),
            "status": self.status,
            "residual_degree": None if self.holds else self.residual.degree,
            "max_coeff_height": self.residual.height(),
        }

    def raise_if_violated(self) -> "IdentityResult":
        if not self.holds:
            raise IdentityViolation(self.name, self.residual)
        return self


@dataclass
class QPPair:
    params: ChainParams
    Q: QPolynomial
    P: QPolynomial

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def field(self) -> CycloField:
        return self.params.field


def solve(params: ChainParams, method: str = "linear") -> QPolynomial:
    if method == "linear":
        return solve_q_linear(build_linear_system(params))
    if method == "closed":
        return closed_form_q(params)[1]
    raise ValueError(f"unknown method {method!r}")


def _tw(params):
    K = params.field
    return K, q_power(K, params.twist), q_power(K, -params.twist)


def tq_swapped_residual(pair: QPPair) -> FieldPoly:
    """The wrong-side TQ relation, with the twist of Q's sector inverted."""
    params = pair.params
    K, a, a_inv = _tw(params)
    G = FieldPoly.binomial_power(K, params.M) * pair.P.poly
    tau = transfer_eigenvalue(params)
    return G * tau - G.scale_arg(-2) * a_inv - G.scale_arg(2) * a


def wrong_side_p(Q: QPolynomial, method: str = "linear") -> QPPair:
    """Pair Q with the solution P of the complementary sector."""
    params = Q.params
    P = solve(params.complement(), method)
    pair = QPPair(params, Q, P)
    if transfer_eigenvalue(params) != transfer_eigenvalue(P.params):
        raise IdentityViolation("equal_transfer_eigenvalue", FieldPoly.one(params.field))
    IdentityResult("tq_wrong_side", params, tq_swapped_residual(pair)).raise_if_violated()
    return pair


def product_factor(K: CycloField, M: int, shifts) -> FieldPoly:
    """prod over k in shifts of (z q^k - 1)^M."""
    out = FieldPoly.one(K)
    for k in shifts:
        out = out * FieldPoly.binomial_power(K, M, k)
    return out


def wronskian_constant(params: ChainParams) -> CycloNum:
    """2 sh((L+1)(2p-ML) pi i / (2(L+2))) = q^-c - q^c."""
    return sh_coeff(params.field, -params.twist)


def first_fundamental_residual(pair: QPPair) -> FieldPoly:
    params = pair.params
    K, a, a_inv = _tw(params)
    L, M = params.L, params.M
    Q, P = pair.Q.poly, pair.P.poly
    lhs = P.scale_arg(1) * Q.scale_arg(-1) * a - Q.scale_arg(1) * P.scale_arg(-1) * a_inv
    rhs = product_factor(K, M, [2 * j + 1 for j in range(1, L + 1)]) * wronskian_constant(params)
    return lhs - rhs


def second_fundamental_residual(pair: QPPair) -> FieldPoly:
    params = pair.params
    K, a, a_inv = _tw(params)
    L, M = params.L, params.M
    Q, P = pair.Q.poly, pair.P.poly
    lhs = P.scale_arg(2) * Q.scale_arg(-2) * (a * a) - Q.scale_arg(2) * P.scale_arg(-2) * (a_inv * a_inv)
    const = sh_coeff(K, -2 * params.twist)
    rhs = FieldPoly.binomial_power(K, M) * product_factor(K, M, [2 * j for j in range(2, L + 1)]) * const
    return lhs - rhs


def psi1_closed_form(params: ChainParams) -> FieldPoly:
    return product_factor(params.field, params.M, [2 * j for j in range(2, params.L + 1)]) * wronskian_constant(params)


def psi2_closed_form(params: ChainParams) -> FieldPoly:
    return product_factor(params.field, params.M, [2 * j - 1 for j in range(3, params.L + 1)]) * wronskian_constant(params)


def check_fundamental(pair: QPPair) -> list[IdentityResult]:
    """All first/second fundamental relations and the Psi chain, without raising."""
    params = pair.params
    K, a, a_inv = _tw(params)
    L, M = params.L, params.M
    Q, P = pair.Q.poly, pair.P.poly
    results = [
        IdentityResult("tq_right_side", params, tq_residual(params, Q)),
        IdentityResult("tq_wrong_side", params, tq_swapped_residual(pair)),
        IdentityResult("first_fundamental", params, first_fundamental_residual(pair)),
    ]

    num1 = P.scale_arg(2) * Q * a - Q.scale_arg(2) * P * a_inv
    num2 = Q.scale_arg(-2) * P * a - P.scale_arg(-2) * Q * a_inv
    psi1 = None
    try:
        psi1 = exact_div(num1, FieldPoly.binomial_power(K, M, -2))
        results.append(IdentityResult("psi1_division", params, FieldPoly.zero(K)))
    except NonZeroRemainder as exc:
        results.append(IdentityResult("psi1_division", params, exc.remainder))
    if psi1 is not None:
        results.append(IdentityResult("psi1_second_form", params,
                                      num2 - FieldPoly.binomial_power(K, M, 2) * psi1))
        results.append(IdentityResult("psi1_closed_form", params, psi1 - psi1_closed_form(params)))
        if L >= 3:
            try:
                psi2 = exact_div(psi1.scale_arg(-1), FieldPoly.binomial_power(K, M, 3))
                results.append(IdentityResult("psi2_division", params, FieldPoly.zero(K)))
                results.append(IdentityResult(
                    "psi2_second_form", params,
                    psi1.scale_arg(1) - FieldPoly.binomial_power(K, M, -3) * psi2))
            except NonZeroRemainder as exc:
                results.append(IdentityResult("psi2_division", params, exc.remainder))
    results.append(IdentityResult("second_fundamental", params, second_fundamental_residual(pair)))
    return results


def verify_fundamental(pair: QPPair) -> list[IdentityResult]:
    """Like :func:`check_fundamental` but raises on the first failing identity."""
    results = check_fundamental(pair)
    for r in results:
        r.raise_if_violated()
    return results


# --- rescaled objects and the Wronskian family ------------------------------

@dataclass(frozen=True)
class Tilde:
    qt: FieldPoly
    pt: FieldPoly
    q_exponent: Fraction  # z-exponent of the Q rescaling
    p_exponent: Fraction
    shift: int  # common extra power of w

    @property
    def field(self) -> CycloField:
        return self.qt.field


def tilde_exponents(params: ChainParams) -> tuple[Fraction, Fraction]:
    L, ML, p = params.L, params.M * params.L, params.p
    return Fraction((L + 1) * (2 * p - ML + 1), 4), Fraction((L + 1) * (ML + 1 - 2 * p), 4)


def w_field(params: ChainParams) -> CycloField:
    return cyclo_field(2 * params.order)


def make_tilde(pair: QPPair) -> Tilde:
    params = pair.params
    eq, ep = tilde_exponents(params)
    wq, wp = int(2 * eq), int(2 * ep)  # always integers: L + 1 is even
    step = params.order
    lowest = min(wq, wp)
    shift = 0 if lowest >= 0 else step * (-(lowest // step))
    WK = w_field(params)
    qt = pair.Q.poly.to_w(WK).shift(wq + shift)
    pt = pair.P.poly.to_w(WK).shift(wp + shift)
    return Tilde(qt, pt, eq, ep, shift)


def as_half_integer(s) -> Fraction:
    s = Fraction(s)
    if (2 * s).denominator != 1:
        raise ValueError(f"{s} is not a half-integer")
    return s


def delta(qt: FieldPoly, pt: FieldPoly, a: int, b: int) -> FieldPoly:
    """Pt(z q^a) Qt(z q^b) - Qt(z q^a) Pt(z q^b)."""
    return pt.scale_arg(a) * qt.scale_arg(b) - qt.scale_arg(a) * pt.scale_arg(b)


def raw_plucker_residual(qt: FieldPoly, pt: FieldPoly, a: int, b: int, c: int, d: int) -> FieldPoly:
    return (delta(qt, pt, a, b) * delta(qt, pt, c, d)
            - delta(qt, pt, a, c) * delta(qt, pt, b, d)
            + delta(qt, pt, a, d) * delta(qt, pt, b, c))


@dataclass
class WronskianFamily:
    pair: QPPair
    tilde: Tilde
    C: CycloNum
    psi1: FieldPoly
    psi2: FieldPoly | None
    _t: dict = field(default_factory=dict, repr=False)
    _shifted: dict = field(default_factory=dict, repr=False)

    @property
    def params(self) -> ChainParams:
        return self.pair.params

    @property
    def tilde_exponents(self) -> tuple[Fraction, Fraction]:
        return self.tilde.q_exponent, self.tilde.p_exponent

    @property
    def t(self) -> dict:
        """The t_s computed so far, keyed by half-integer s."""
        return dict(self._t)

    def t_s(self, s) -> FieldPoly:
        s = as_half_integer(s)
        if s not in self._t:
            k = int(2 * s + 1)
            qt, pt = self.tilde.qt, self.tilde.pt
            self._t[s] = pt.scale_arg(k) * qt.scale_arg(-k) - pt.scale_arg(-k) * qt.scale_arg(k)
        return self._t[s]

    def t_at(self, s, k: int) -> FieldPoly:
        """t_s(z q^k)."""
        s = as_half_integer(s)
        key = (s, k)
        if key not in self._shifted:
            self._shifted[key] = self.t_s(s).scale_arg(k)
        return self._shifted[key]

    def closed_t0(self) -> FieldPoly:
        params = self.params
        prod = product_factor(params.field, params.M, [2 * j + 1 for j in range(1, params.L + 1)])
        return self._lift(prod * wronskian_constant(params))

    def closed_t_half(self) -> FieldPoly:
        params = self.params
        K = params.field
        prod = FieldPoly.binomial_power(K, params.M) * product_factor(K, params.M, [2 * j for j in range(2, params.L + 1)])
        return self._lift(prod * sh_coeff(K, -2 * params.twist))

    def _lift(self, zpoly: FieldPoly) -> FieldPoly:
        """Map z^((L+1)/2) * zpoly into the stored w-normalisation."""
        return zpoly.to_w(self.tilde.field).shift(self.params.L + 1 + 2 * self.tilde.shift)


def wronskian_family(pair: QPPair) -> WronskianFamily:
    params = pair.params
    K, a, a_inv = _tw(params)
    Q, P = pair.Q.poly, pair.P.poly
    num1 = P.scale_arg(2) * Q * a - Q.scale_arg(2) * P * a_inv
    psi1 = exact_div(num1, FieldPoly.binomial_power(K, params.M, -2))
    psi2 = None
    if params.L >= 3:
        psi2 = exact_div(psi1.scale_arg(-1), FieldPoly.binomial_power(K, params.M, 3))
    return WronskianFamily(pair, make_tilde(pair), wronskian_constant(params), psi1, psi2)


def wronskian_t(family: WronskianFamily, s) -> FieldPoly:
    return family.t_s(s)


def plucker_check(family: WronskianFamily, s1, s2, s3) -> FieldPoly:
    """Residual of the three-term hierarchy obtained from the Plucker relation."""
    s1, s2, s3 = (as_half_integer(s) for s in (s1, s2, s3))
    h = Fraction(1, 2)

    def e(x):
        return int(x)

    t = family.t_at
    return (t(s1, e(-(2 * s1 + 1))) * t(s3 - s2 - h, e(-2 * (s2 + s3 + 1)))
            - t(s2, e(-(2 * s2 + 1))) * t(s3 - s1 - h, e(-2 * (s1 + s3 + 1)))
            + t(s3, e(-(2 * s3 + 1))) * t(s2 - s1 - h, e(-2 * (s1 + s2 + 1))))


def fusion_check(family: WronskianFamily, s) -> FieldPoly:
    """Residual of the fusion recursion (Plucker at (s, -1, 0) with t_0, t_1/2 inserted).

    tau (z-1)^M t_s(z q^-(2s+1))
        = q^((L+1)/2) (z q^-2 - 1)^M t_{s-1/2}(z q^-2(s+1))
        + q^-((L+1)/2) (z q^2 - 1)^M t_{s+1/2}(z q^-2s)
    """
    s = as_half_integer(s)
    params = family.params
    K, WK = params.field, family.tilde.field
    M, L = params.M, params.L
    h = Fraction(1, 2)
    tau = transfer_eigenvalue(params).embed(WK)
    lhs = FieldPoly.binomial_power(K, M).to_w(WK) * family.t_at(s, int(-(2 * s + 1))) * tau
    right = (FieldPoly.binomial_power(K, M, -2).to_w(WK) * family.t_at(s - h, int(-2 * (s + 1)))
             * q_power(WK, L + 1))
    left = (FieldPoly.binomial_power(K, M, 2).to_w(WK) * family.t_at(s + h, int(-2 * s))
            * q_power(WK, -(L + 1)))
    return lhs - right - left


def check_family(family: WronskianFamily) -> list[IdentityResult]:
    params = family.params
    results = [
        IdentityResult("t_minus_half_vanishes", params, family.t_s(Fraction(-1, 2))),
        IdentityResult("t0_closed_form", params, family.t_s(0) - family.closed_t0()),
        IdentityResult("t_half_closed_form", params, family.t_s(Fraction(1, 2)) - family.closed_t_half()),
    ]
    for s in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        results.append(IdentityResult(f"antisymmetry[s={s}]", params, family.t_s(-s - 1) + family.t_s(s)))
    return results


# --- P = F Q + C ---------------------------------------------------------------

@dataclass(frozen=True)
class PQDecomposition:
    F: FieldPoly
    C: FieldPoly
    A: FieldPoly
    B: FieldPoly
    R: FieldPoly


def pq_decompose(pair: QPPair) -> PQDecomposition:
    """Partial fractions of C prod (z q^(2j+1) - 1)^M / (Q(zq) Q(z/q)) and the F solve."""
    params = pair.params
    K, a, a_inv = _tw(params)
    Q, P = pair.Q.poly, pair.P.poly
    Q1, Q2 = Q.scale_arg(1), Q.scale_arg(-1)
    G, S, T = extended_gcd(Q1, Q2)
    if G.degree != 0:
        raise NotCoprime(f"Q(zq) and Q(z/q) share a factor of degree {G.degree}")
    numerator = product_factor(K, params.M, [2 * j + 1 for j in range(1, params.L + 1)]) * wronskian_constant(params)
    R, rem = numerator.divmod(Q1 * Q2)
    # rem = X Q2 + Y Q1 with X = A(zq) and Y = -B(z/q)
    X = (rem * T) % Q1
    Y = exact_div(rem - X * Q2, Q1)
    A = X.scale_arg(-1)
    B = -Y.scale_arg(1)
    C = A * a_inv
    IdentityResult("ab_relation", params, B - C * a_inv).raise_if_violated()
    IdentityResult("vanishing_pole_term", params, A * a_inv - B * a).raise_if_violated()

    f_coeffs = []
    for k, r in enumerate(R.coeffs):
        d = sh_coeff(K, params.twist + k)
        if d.is_zero():
            raise FSolveSingular(f"coefficient map for F is singular at degree {k}")
        f_coeffs.append(r / d)
    F = FieldPoly(K, f_coeffs)
    IdentityResult("r_from_f", params, R - (F.scale_arg(1) * a - F.scale_arg(-1) * a_inv)).raise_if_violated()
    IdentityResult("p_equals_fq_plus_c", params, P - F * Q - C).raise_if_violated()
    return PQDecomposition(F, C, A, B, R)


def check_decomposition(pair: QPPair) -> list[IdentityResult]:
    params = pair.params
    try:
        dec = pq_decompose(pair)
    except IdentityViolation as exc:
        return [IdentityResult(exc.name, params, exc.residual)]
    zero = FieldPoly.zero(params.field)
    ok = dec.R.degree == params.m or (params.m < 0 and dec.R.is_zero())
    degree_residual = zero if ok else FieldPoly.one(params.field)
    return [
        IdentityResult("p_equals_fq_plus_c", params, pair.P.poly - dec.F * pair.Q.poly - dec.C),
        IdentityResult("r_degree", params, degree_residual),
    ]
