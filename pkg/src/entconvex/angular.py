"""Coupled two-particle angular momentum states and their reduced densities.

Clebsch-Gordan coefficients are computed by the Racah closed form in exact
big-rational arithmetic (a sign together with the rational square of the
value), so the reduced density matrices of coupled states come out exact
at the superposition endpoints.  Condon-Shortley phases throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .spectra import HermitianMatrix

MAX_ELL = 12


@dataclass(frozen=True)
class AngularConfig:
    """Quantum numbers of a coupled pair of angular momenta."""

    l1: int
    l2: int
    L: int
    M: int

    def __post_init__(self):
        if self.l1 < 0 or self.l2 < 0:
            raise ValueError("l1, l2 must be non-negative")
        if not abs(self.l1 - self.l2) <= self.L <= self.l1 + self.l2:
            raise ValueError(f"triangle violation: |{self.l1}-{self.l2}| <= {self.L} <= {self.l1 + self.l2}")
        if abs(self.M) > self.L:
            raise ValueError(f"|M|={abs(self.M)} exceeds L={self.L}")


@dataclass(frozen=True)
class ExactCoefficient:
    """sign * sqrt(square) with an exact rational square."""

    sign: int
    square: Fraction

    def __post_init__(self):
        if self.square < 0:
            raise ValueError("square must be non-negative")

    @property
    def value(self) -> float:
        return self.sign * math.sqrt(self.square)

    def product_with(self, other: "ExactCoefficient") -> Fraction:
        """Exact value of self * other, valid when the product is rational.

        The product of two square roots is rational only when the squares
        share the same square-free part; callers use this for products of
        a coefficient with itself (or with an equal-square partner).
        """
        if self.square != other.square:
            raise ValueError("product is irrational for differing squares")
        return self.sign * other.sign * self.square


ZERO = ExactCoefficient(0, Fraction(0))


@lru_cache(maxsize=None)
def clebsch_gordan(l1: int, m1: int, l2: int, m2: int, L: int, M: int) -> ExactCoefficient:
    """Exact Clebsch-Gordan coefficient C(l1,m1; l2,m2; L,M).

    Racah's closed form, evaluated over rationals.  Returns the exact zero
    coefficient when m1 + m2 != M or a magnetic number is out of range;
    raises on a triangle violation.
    """
    if not abs(l1 - l2) <= L <= l1 + l2:
        raise ValueError(f"triangle violation for ({l1}, {l2}, {L})")
    if m1 + m2 != M or abs(m1) > l1 or abs(m2) > l2 or abs(M) > L:
        return ZERO

    f = math.factorial
    pref = Fraction(
        (2 * L + 1) * f(L + l1 - l2) * f(L - l1 + l2) * f(l1 + l2 - L),
        f(l1 + l2 + L + 1),
    ) * Fraction(
        f(L + M) * f(L - M) * f(l1 - m1) * f(l1 + m1) * f(l2 - m2) * f(l2 + m2), 1
    )

    kmin = max(0, l2 - L - m1, l1 + m2 - L)
    kmax = min(l1 + l2 - L, l1 - m1, l2 + m2)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        denom = (
            f(k)
            * f(l1 + l2 - L - k)
            * f(l1 - m1 - k)
            * f(l2 + m2 - k)
            * f(L - l2 + m1 + k)
            * f(L - l1 - m2 + k)
        )
        total += Fraction((-1) ** k, denom)
    if total == 0:
        return ZERO
    sign = 1 if total > 0 else -1
    return ExactCoefficient(sign, pref * total * total)


def cg(l1: int, m1: int, l2: int, m2: int, L: int, M: int) -> float:
    """Floating point Clebsch-Gordan coefficient."""
    return clebsch_gordan(l1, m1, l2, m2, L, M).value


def coupled_reduced_density_exact(
    l: int, L: int, M: int, alpha: int, Mprime: int | None = None
) -> list[list[Fraction]]:
    """Exact rational reduced density matrix at an endpoint alpha in {0, 1}.

    At the endpoints only squared coefficients appear, so every entry is
    rational.  Basis order is the canonical m-basis m = l, l-1, ..., -l.
    """
    if alpha not in (0, 1):
        raise ValueError("exact assembly only at alpha in {0, 1}")
    if l > MAX_ELL:
        raise ValueError(f"supported range is l <= {MAX_ELL}")
    Mp = -M if Mprime is None else Mprime
    Meff = M if alpha == 1 else Mp
    AngularConfig(l, l, L, Meff)
    dim = 2 * l + 1
    rho = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        mi = l - i
        c = clebsch_gordan(l, mi, l, Meff - mi, L, Meff)
        rho[i][i] = c.square
    return rho


def coupled_reduced_density(
    l: int,
    L: int,
    M: int,
    alpha: float,
    Mprime: int | None = None,
    l2: int | None = None,
) -> HermitianMatrix:
    """Reduced density of sqrt(alpha) Y^{L,M} + sqrt(1-alpha) Y^{L,M'}.

    Entries follow the coupled-state partial trace: for basis labels
    ``i, j`` (magnetic numbers of particle 1) the alpha and 1-alpha parts
    are diagonal squares of coefficients while the cross terms couple
    ``i`` with ``j = i - (M - M')``.  ``l2`` defaults to ``l``; unequal
    values are accepted but only the equal case is exercised against
    reference data.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if l > MAX_ELL:
        raise ValueError(f"supported range is l <= {MAX_ELL}")
    lb = l if l2 is None else l2
    Mp = -M if Mprime is None else Mprime
    AngularConfig(l, lb, L, M)
    AngularConfig(l, lb, L, Mp)

    dim = 2 * l + 1
    rho = np.zeros((dim, dim), dtype=complex)
    ms = [l - i for i in range(dim)]
    root = math.sqrt(alpha * (1.0 - alpha))
    for i, mi in enumerate(ms):
        for j, mj in enumerate(ms):
            acc = 0.0
            for m2 in range(-lb, lb + 1):
                ci_m = cg(l, mi, lb, m2, L, M)
                cj_m = cg(l, mj, lb, m2, L, M)
                ci_p = cg(l, mi, lb, m2, L, Mp)
                cj_p = cg(l, mj, lb, m2, L, Mp)
                acc += alpha * ci_m * cj_m + (1.0 - alpha) * ci_p * cj_p
                acc += root * (ci_m * cj_p + ci_p * cj_m)
            rho[i, j] = acc
    rho /= np.real(np.trace(rho))  # the two states need not be orthogonal
    return HermitianMatrix(rho, basis_label=f"m-basis l={l}", is_density=True)


def coupled_energy_check(l: int, L: int, M: int) -> int:
    """Eigenvalue of L_total^2 - L_z^2 on the coupled state: L(L+1) - M^2."""
    AngularConfig(l, l, L, M)
    return L * (L + 1) - M * M
