"""Numerical Bethe roots and the interpolation identity.

Roots of the exact Q polynomial are found in double precision with the
Aberth-Ehrlich simultaneous iteration and then certified against the exact
rational coefficients: the backward error of every root is computed with
exact complex-rational Horner evaluation, so the certificate itself carries
no rounding.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DuplicateNodes, NonConvergence, PoleProximity
from .qsolver import ChainParams, QPolynomial

POLE_TOL = 1e-8


@dataclass(frozen=True)
class BetheRoots:
    params: ChainParams
    zroots: np.ndarray
    uroots: np.ndarray
    backward_errors: np.ndarray

    def __len__(self):
        return len(self.zroots)

    def product_modulus(self) -> float:
        return float(np.prod(np.abs(self.zroots)))

    def is_inversion_closed(self, tol: float = 1e-7) -> bool:
        """True when the multiset of roots is stable under z -> 1/conj(z)."""
        z = self.zroots
        image = 1.0 / np.conj(z)
        used = np.zeros(len(z), dtype=bool)
        for w in image:
            d = np.abs(z - w) / max(1.0, abs(w))
            d[used] = np.inf
            k = int(np.argmin(d))
            if d[k] > tol:
                return False
            used[k] = True
        return True

    def table(self, with_bae: bool = True) -> list[dict]:
        bae = bae_residuals(self) if with_bae else [None] * len(self)
        return [
            {"re": float(z.real), "im": float(z.imag), "backward_error": float(be),
             "bae_residual": None if r is None else float(r)}
            for z, be, r in zip(self.zroots, self.backward_errors, bae)
        ]

    def to_json(self) -> dict:
        return {**self.params.as_dict(), "roots": self.table()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["re", "im", "backward_error", "bae_residual"])
        writer.writeheader()
        writer.writerows(self.table())
        return buf.getvalue()


def _exact_backward_error(coeffs: list[Fraction], z: complex) -> float:
    """|Q(z)| / sum_k |c_k| |z|^k with Q(z) evaluated exactly at the float z."""
    x, y = Fraction(z.real), Fraction(z.imag)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        re, im = re * x - im * y + c, re * y + im * x
    value = math.hypot(float(re), float(im))
    r = abs(z)
    scale = sum(abs(float(c)) * r**k for k, c in enumerate(coeffs))
    return value / scale


def aberth(coeffs: np.ndarray, max_iter: int = 500, tol: float = 1e-15) -> tuple[np.ndarray, int]:
    """Simultaneous roots of sum(coeffs[k] z^k); coefficients constant term first.

    Starts from points just off the unit circle; returns (roots, iterations).
    """
    c = np.asarray(coeffs, dtype=complex)
    deg = len(c) - 1
    desc = c[::-1] / c[-1]
    ddesc = np.polyder(desc)
    k = np.arange(deg)
    z = (1.0 + 0.05 * np.cos(3.0 * k)) * np.exp(1j * (2 * np.pi * (k + 0.25) / deg + 0.4))
    for it in range(1, max_iter + 1):
        f = np.polyval(desc, z)
        df = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = f / df
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            return z, it
    return z, max_iter


def find_roots(Q: QPolynomial, max_iter: int = 500, tol: float = 1e-10) -> BetheRoots:
    """All roots of Q with certified relative backward error below ``tol``."""
    coeffs = Q.coefficients()
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("Q has no roots")
    z, iterations = aberth(np.array([float(c) for c in coeffs]), max_iter=max_iter)
    errors = np.array([_exact_backward_error(coeffs, complex(w)) for w in z])
    worst = float(errors.max())
    if not np.all(np.isfinite(z)) or worst >= tol:
        raise NonConvergence(worst, iterations)
    u = 0.5 * np.log(z)
    return BetheRoots(Q.params, z, u, errors)


def _eta(L: int) -> complex:
    return -1j * (L + 1) * math.pi / (L + 2)


def bae_residuals(roots: BetheRoots) -> np.ndarray:
    """|LHS_j / RHS_j - 1| of the Bethe equations at every root."""
    L, M = roots.params.L, roots.params.M
    eta = _eta(L)
    s = L / 2
    u = roots.uroots
    out = np.empty(len(u))
    for j, uj in enumerate(u):
        den = np.sinh(uj - s * eta)
        if abs(den) < POLE_TOL:
            raise PoleProximity(j, "(sh(u - s eta) vanishes)")
        lhs = (np.sinh(uj + s * eta) / den) ** M
        rhs = 1.0 + 0j
        for k, uk in enumerate(u):
            if k == j:
                continue
            d = np.sinh(uj - uk - eta)
            if abs(d) < POLE_TOL:
                raise PoleProximity(j, f"(pair with root {k})")
            rhs *= np.sinh(uj - uk + eta) / d
        out[j] = abs(lhs / rhs - 1.0)
    return out


def bae_residual(roots: BetheRoots) -> float:
    return float(np.max(bae_residuals(roots)))


@dataclass(frozen=True)
class InterpolationInstance:
    xs: tuple[Fraction, ...]
    ell: int

    def __post_init__(self):
        xs = tuple(Fraction(x) for x in self.xs)
        object.__setattr__(self, "xs", xs)
        if len(set(xs)) != len(xs):
            raise DuplicateNodes("interpolation nodes must be pairwise distinct")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")


def interpolation_identity(inst: InterpolationInstance) -> Fraction:
    """sum_k x_k^ell / prod_{j != k} (x_k - x_j), exactly."""
    total = Fraction(0)
    for k, xk in enumerate(inst.xs):
        den = Fraction(1)
        for j, xj in enumerate(inst.xs):
            if j != k:
                den *= xk - xj
        total += xk**inst.ell / den
    return total
