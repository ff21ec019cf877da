import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qop.errors import IdentityViolation
from qop.field import q_power
from qop.functional import (
    IdentityResult,
    QPPair,
    check_decomposition,
    check_family,
    check_fundamental,
    delta,
    fusion_check,
    make_tilde,
    plucker_check,
    pq_decompose,
    psi1_closed_form,
    psi2_closed_form,
    raw_plucker_residual,
    solve,
    tilde_exponents,
    tq_swapped_residual,
    verify_fundamental,
    w_field,
    wrong_side_p,
    wronskian_family,
)
from qop.poly import FieldPoly
from qop.qsolver import ChainParams, transfer_eigenvalue
from conftest import field_polys

SWEEP = [P for L in (1, 3, 5) for N in (1, 2) for P in ChainParams.sectors(L, N)]
HALF = [Fraction(k, 2) for k in range(-2, 4)]

_pairs = {}


def pair_for(P):
    if P not in _pairs:
        _pairs[P] = wrong_side_p(solve(P))
    return _pairs[P]


def families(P):
    return wronskian_family(pair_for(P))


def test_wrong_side_examples():
    pair = pair_for(ChainParams(3, 1, 4))
    assert pair.P.params.p == 5 and pair.P.degree == 5
    assert pair.P.poly(-1).is_zero()
    assert tq_swapped_residual(pair).is_zero()
    assert ChainParams(1, 1, 1).complement().p == 2


@pytest.mark.parametrize("P", SWEEP, ids=str)
def test_fundamental_relations(P):
    pair = pair_for(P)
    assert transfer_eigenvalue(P) == transfer_eigenvalue(pair.P.params)
    results = verify_fundamental(pair)
    names = {r.name for r in results}
    assert {"first_fundamental", "second_fundamental", "psi1_closed_form"} <= names
    assert ("psi2_division" in names) == (P.L >= 3)


@pytest.mark.parametrize("P", SWEEP, ids=str)
def test_wronskian_family(P):
    fam = families(P)
    for r in check_family(fam):
        assert r.holds, r.name
    assert fam.psi1 == psi1_closed_form(P)
    assert fam.psi1.degree == P.M * (P.L - 1)
    if P.L >= 3:
        assert fam.psi2 == psi2_closed_form(P)
        assert fam.psi2.degree == P.M * (P.L - 2)
    else:
        assert fam.psi2 is None
    for s in HALF:
        assert (fam.t_s(-s - 1) + fam.t_s(s)).is_zero()
    for s in (0, Fraction(1, 2), 1, Fraction(3, 2)):
        assert fusion_check(fam, s).is_zero()


def test_all_identities_l3n3():
    P = ChainParams(3, 3, 10)
    pair = pair_for(P)
    assert all(r.holds for r in check_fundamental(pair))
    fam = wronskian_family(pair)
    assert all(r.holds for r in check_family(fam))
    assert all(r.holds for r in check_decomposition(pair))


def test_tilde_exponents():
    assert tilde_exponents(ChainParams(3, 3, 10))[0] == 0
    assert tilde_exponents(ChainParams(3, 3, 11))[0] == 2
    pair = pair_for(ChainParams(3, 1, 4))
    tilde = make_tilde(pair)
    assert tilde.field is w_field(pair.params)
    for N in (1, 2, 3):
        for P in ChainParams.sectors(5, N):
            eq, ep = tilde_exponents(P)
            assert eq.denominator == 1 and ep.denominator == 1
            assert eq + ep == Fraction(P.L + 1, 2)


def test_tilde_identity_exponent_is_plain_q():
    P = ChainParams(3, 3, 10)
    pair = wrong_side_p(solve(P))
    tilde = make_tilde(pair)
    assert tilde.shift == 0
    assert tilde.qt == pair.Q.poly.to_w(tilde.field)


def test_negative_exponent_shift():
    for P in SWEEP:
        tilde = make_tilde(pair_for(P))
        assert tilde.shift % P.order == 0
        assert tilde.shift >= 0
        assert min(2 * tilde.q_exponent, 2 * tilde.p_exponent) + tilde.shift >= 0


def test_plucker_examples():
    fam = families(ChainParams(3, 1, 4))
    assert plucker_check(fam, 0, -1, 0).is_zero()
    assert plucker_check(fam, Fraction(1, 2), 0, 1).is_zero()
    assert plucker_check(fam, 1, 0, 2).is_zero()
    assert fusion_check(fam, 0).is_zero()
    assert fusion_check(fam, Fraction(1, 2)).is_zero()
    assert fusion_check(fam, 1).is_zero()


def test_plucker_grid_small():
    fam = families(ChainParams(3, 1, 5))
    for s in itertools.product(HALF, repeat=3):
        assert plucker_check(fam, *s).is_zero(), s


def test_pair_with_itself_detected():
    P = ChainParams(3, 1, 4)
    Q = solve(P)
    fake = QPPair(P, Q, Q)
    results = {r.name: r for r in check_fundamental(fake)}
    assert not results["first_fundamental"].holds
    assert not results["tq_wrong_side"].holds
    tilde = make_tilde(fake)
    assert delta(tilde.qt, tilde.qt, 1, -1).is_zero()
    with pytest.raises(IdentityViolation):
        verify_fundamental(fake)


def test_decomposition_l3n1():
    P = ChainParams(3, 1, 4)
    pair = pair_for(P)
    dec = pq_decompose(pair)
    assert dec.R.degree == P.m == 1
    assert (pair.P.poly - dec.F * pair.Q.poly - dec.C).is_zero()
    a = q_power(P.field, P.twist)
    assert dec.A == dec.C * a
    assert dec.B == dec.C * a.inverse()
    assert dec.A.degree < P.p and dec.B.degree < P.p


@pytest.mark.parametrize("P", SWEEP, ids=str)
def test_decomposition_sweep(P):
    results = check_decomposition(pair_for(P))
    assert all(r.holds for r in results), [r.name for r in results if not r.holds]


def test_identity_result_json():
    P = ChainParams(3, 1, 4)
    K = P.field
    ok = IdentityResult("x", P, FieldPoly.zero(K)).to_json()
    assert ok == {"identity_name": "x", "params": {"L": 3, "N": 1, "p": 4}, "status": "zero",
                  "residual_degree": None, "max_coeff_height": 0}
    bad = IdentityResult("y", P, FieldPoly(K, [0, 0, 5])).to_json()
    assert bad["status"] == "nonzero" and bad["residual_degree"] == 2 and bad["max_coeff_height"] >= 5
    with pytest.raises(IdentityViolation):
        IdentityResult("y", P, FieldPoly(K, [1])).raise_if_violated()


shifts = st.integers(-12, 12)


@settings(max_examples=25)
@given(field_polys(20, max_degree=5, var="w"), field_polys(20, max_degree=5, var="w"), shifts, shifts)
def test_delta_antisymmetric(qt, pt, a, b):
    assert (delta(qt, pt, a, b) + delta(qt, pt, b, a)).is_zero()
    assert delta(qt, pt, a, a).is_zero()


@settings(max_examples=15)
@given(field_polys(20, max_degree=4, var="w"), field_polys(20, max_degree=4, var="w"),
       shifts, shifts, shifts, shifts)
def test_raw_plucker_any_pair(qt, pt, a, b, c, d):
    assert raw_plucker_residual(qt, pt, a, b, c, d).is_zero()


@settings(max_examples=15)
@given(st.sampled_from([ChainParams(3, 1, 4), ChainParams(5, 1, 7)]), shifts, shifts, shifts, shifts)
def test_raw_plucker_solved_pair(P, a, b, c, d):
    tilde = make_tilde(pair_for(P))
    assert raw_plucker_residual(tilde.qt, tilde.pt, a, b, c, d).is_zero()
