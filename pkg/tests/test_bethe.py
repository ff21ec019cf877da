import csv
import io
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qop.bethe import BetheRoots, InterpolationInstance, bae_residual, bae_residuals, find_roots, interpolation_identity
from qop.errors import DuplicateNodes, NonConvergence
from qop.functional import solve
from qop.qsolver import ChainParams, QPolynomial

SMALL = [P for L in (1, 3) for N in (1, 2, 3) for P in ChainParams.sectors(L, N)]


def test_linear_case():
    r = find_roots(solve(ChainParams(1, 1, 1)))
    assert len(r) == 1
    assert abs(r.zroots[0] + 1) < 1e-14
    assert abs(r.uroots[0] - 1j * math.pi / 2) < 1e-12
    assert bae_residual(r) < 1e-12


def test_quartic():
    r = find_roots(solve(ChainParams(3, 1, 4)))
    assert len(r) == 4
    assert abs(r.product_modulus() - 1) < 1e-9
    assert r.is_inversion_closed()
    assert bae_residual(r) < 1e-9


def test_l3n3_backward_error():
    Q = solve(ChainParams(3, 3, 10))
    r = find_roots(Q)
    assert len(r) == 10
    values = [abs(np.polyval([float(c) for c in Q.coefficients()[::-1]], z)) for z in r.zroots]
    assert max(values) < 1e-10
    assert float(r.backward_errors.max()) < 1e-10


@pytest.mark.parametrize("P", SMALL, ids=str)
def test_bae_sweep(P):
    r = find_roots(solve(P))
    assert len(r) == P.p
    assert bae_residual(r) < 1e-9
    assert abs(r.product_modulus() - 1) < 1e-9
    assert r.is_inversion_closed()
    rebuilt = np.poly(r.zroots)[::-1].real
    exact = np.array([float(c) for c in solve(P).coefficients()])
    assert np.max(np.abs(rebuilt - exact) / np.maximum(1, np.abs(exact))) < 1e-8


def test_corrupted_root_detected():
    r = find_roots(solve(ChainParams(3, 1, 4)))
    z = r.zroots.copy()
    z[0] *= 1.01
    bad = replace(r, zroots=z, uroots=0.5 * np.log(z))
    assert bae_residual(bad) > 1e-3


def test_nonconvergence_reported():
    with pytest.raises(NonConvergence) as exc:
        find_roots(solve(ChainParams(3, 3, 10)), max_iter=1)
    assert exc.value.iterations == 1


def test_table_exports():
    r = find_roots(solve(ChainParams(3, 1, 4)))
    data = r.to_json()
    assert (data["L"], data["N"], data["p"]) == (3, 1, 4)
    assert len(data["roots"]) == 4
    rows = list(csv.DictReader(io.StringIO(r.to_csv())))
    assert [complex(float(x["re"]), float(x["im"])) for x in rows] == list(r.zroots)
    assert all(float(x["bae_residual"]) < 1e-9 for x in rows)


def test_interpolation_examples():
    assert interpolation_identity(InterpolationInstance((1, 2), 0)) == 0
    assert interpolation_identity(InterpolationInstance((1, 2, 3), 1)) == 0
    assert interpolation_identity(InterpolationInstance((1, 2), 1)) == 1
    with pytest.raises(DuplicateNodes):
        InterpolationInstance((1, 1, 2), 0)


distinct_nodes = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20),
                          min_size=2, max_size=8, unique=True)


@given(distinct_nodes)
def test_interpolation_identity_property(xs):
    K = len(xs)
    for ell in range(K - 1):
        assert interpolation_identity(InterpolationInstance(tuple(xs), ell)) == 0
    assert interpolation_identity(InterpolationInstance(tuple(xs), K - 1)) == 1
