from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qop.errors import InconsistentSystem, InvalidParameters, InvariantViolation, UnderDetermined
from qop.field import ch_coeff, cyclo_field
from qop.qsolver import (
    ChainParams,
    LinearSystem,
    QPolynomial,
    Row,
    build_linear_system,
    closed_form_q,
    closed_form_terms,
    row_prefactor,
    solve_q_linear,
    transfer_eigenvalue,
    tq_residual,
    verify_tq,
)

SWEEP = [P for L in (1, 3, 5) for N in (1, 2, 3, 4) for P in ChainParams.sectors(L, N)]
REFERENCE_L3N3 = [1, 7, Fraction(609, 26), Fraction(1351, 26), Fraction(1064, 13), Fraction(1229, 13),
                  Fraction(1064, 13), Fraction(1351, 26), Fraction(609, 26), 7, 1]


@pytest.fixture(scope="module")
def solved():
    return {P: solve_q_linear(build_linear_system(P)) for P in SWEEP}


@pytest.mark.parametrize("args", [(2, 1, 2), (0, 1, 0), (3, 0, 0), (3, 1, 2), (3, 1, 7), (-1, 1, 1)])
def test_invalid_params(args):
    with pytest.raises(InvalidParameters):
        ChainParams(*args)


def test_derived_quantities():
    P = ChainParams(3, 3, 10)
    assert (P.M, P.m, P.sz, P.order) == (7, 1, Fraction(1, 2), 10)
    assert P.field is cyclo_field(10)
    assert P.complement() == ChainParams(3, 3, 11)
    assert ChainParams.sz_half(3, 3) == P
    assert [s.p for s in ChainParams.sectors(3, 1)] == [3, 4, 5, 6]


def test_rows_small():
    system = build_linear_system(ChainParams(3, 1, 4))
    assert system.kept == (1, 3, 4, 6)
    assert [r.as_vector() for r in system.rows] == [
        (3, 1, 0, 0, 0), (1, 3, 3, 1, 0), (0, 1, 3, 3, 1), (0, 0, 0, 1, 3)]
    system = build_linear_system(ChainParams(1, 1, 1))
    assert system.kept == (2,)
    assert system.rows[0].as_vector() == (3, 3)


def test_rows_l3n3():
    system = build_linear_system(ChainParams(3, 3, 10))
    assert system.kept == (1, 3, 4, 6, 8, 9, 11, 13, 14, 16)
    assert [r.as_vector() for r in system.half_range_rows()][:2] == [
        (7, 1) + (0,) * 9, (35, 21, 7, 1) + (0,) * 7]


@pytest.mark.parametrize("P", SWEEP, ids=str)
def test_system_structure(P):
    system = build_linear_system(P)
    assert len(system.rows) == P.p
    for r in system.rows:
        assert not row_prefactor(P, r.ell).is_zero()
        assert all(c >= 0 for c in r.as_vector())
    for ell in system.dropped:
        assert row_prefactor(P, ell).is_zero()
    if P.m == 1:
        expected = {(P.L + 2) * k for k in range(P.N + 1)} | {(P.L + 2) * k + (P.L + 1) // 2 for k in range(P.N + 1)}
        in_half = {ell for ell in system.dropped if ell <= P.half_range}
        assert in_half == {e for e in expected if e <= P.half_range}


def test_solve_examples():
    Q = solve_q_linear(build_linear_system(ChainParams(3, 3, 10)))
    assert Q.coefficients()[::-1] == REFERENCE_L3N3
    Q = solve_q_linear(build_linear_system(ChainParams(3, 1, 4)))
    assert Q.coefficients() == [1, 3, Fraction(11, 3), 3, 1]
    Q = solve_q_linear(build_linear_system(ChainParams(1, 1, 1)))
    assert Q.elementary == (1, -1)
    assert Q.coefficients() == [1, 1]


def test_closed_form_numerator_small():
    cf, Q = closed_form_q(ChainParams(3, 1, 4))
    assert cf.numerator() == {7: 1, 0: -1, 5: Fraction(-7, 3), 2: Fraction(7, 3)}
    assert Q.coefficients() == [1, 3, Fraction(11, 3), 3, 1]
    assert cf.parity == "odd"
    assert closed_form_terms(ChainParams(3, 2, 7)).parity == "even"


@pytest.mark.parametrize("P", SWEEP, ids=str)
def test_cross_method_and_structure(P, solved):
    Q = solved[P]
    assert closed_form_q(P)[1] == Q
    assert verify_tq(Q).is_zero()
    Q.check()
    poly = Q.poly
    assert poly(0) == 1
    assert poly(-1).is_zero() == (P.L % 2 == 1 and P.p % 2 == 1)
    e = Q.elementary
    assert all(e[P.p - j] == (-1) ** P.p * e[j] for j in range(P.p + 1))


def test_transfer_eigenvalue():
    for N in (1, 2, 3):
        P = ChainParams(3, N, 3 * N + 1)
        tau = transfer_eigenvalue(P)
        assert tau == ch_coeff(P.field, 2)
        assert abs(tau.to_complex() - 0.6180339887498949) < 1e-12
        P = ChainParams(3, N, 3 * N)
        tau = transfer_eigenvalue(P)
        assert tau == ch_coeff(P.field, 6) == ch_coeff(P.field, 4) == -ch_coeff(P.field, 1)
        assert abs(tau.to_complex() + 1.618033988749895) < 1e-12
    assert ch_coeff(cyclo_field(10), 0) == 2


def test_perturbed_q_fails_tq():
    P = ChainParams(3, 1, 4)
    Q = solve_q_linear(build_linear_system(P))
    e = list(Q.elementary)
    e[1] += 1
    bad = QPolynomial.from_elementary(P, e)
    assert not verify_tq(bad).is_zero()
    assert not tq_residual(P, bad.poly).is_zero()


def test_check_rejects_broken_q():
    P = ChainParams(3, 1, 4)
    with pytest.raises(InvariantViolation):
        QPolynomial.from_elementary(P, [1, 1, 0, 0, 1]).check()


def test_inconsistent_and_underdetermined():
    P = ChainParams(1, 1, 1)
    with pytest.raises(InconsistentSystem):
        solve_q_linear(LinearSystem(P, (Row(2, (3,), 3), Row(3, (1,), 0)), ()))
    P = ChainParams(3, 1, 4)
    rows = build_linear_system(P).rows[:3]
    with pytest.raises(UnderDetermined):
        solve_q_linear(LinearSystem(P, rows, ()))


@given(st.sampled_from(SWEEP))
def test_q_json_roundtrip(P):
    Q = closed_form_q(P)[1]
    assert QPolynomial.from_json(Q.to_json()) == Q
