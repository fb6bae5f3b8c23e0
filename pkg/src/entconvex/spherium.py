"""Two electrons on a sphere: the quasi-exact L=2 level at R^2 = 6.

The wave function is an antisymmetrized coupled pair of spherical harmonics
times the correlation factor (1 + r12/4), which solves the interacting
problem exactly at energy E = 1/4 when the sphere radius satisfies R^2 = 6.
Everything is expanded over products of one-particle spherical harmonics:
the interelectronic distance is converted with the Perkins expansion, whose
radial coefficients are kept as exact rationals, and products of harmonics
on one sphere are recoupled with Clebsch-Gordan algebra.  Reduced density
matrices then come out as Gram matrices of the coefficient array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import sph_harm_y

from .angular import cg, clebsch_gordan
from .spectra import HermitianMatrix

SPHERE_RADIUS_SQ = 6.0
ENERGY = 0.25
TOTAL_L = 2
COUPLED_L1, COUPLED_L2 = 1, 2
CORRELATION_SCALE = 4.0  # Phi = 1 + r12/4

DEFAULT_LMAX = 20
NORM_TAIL_TOL = 1e-6


def perkins_coefficient(k: int, l: int, t: int) -> Fraction:
    """Radial coefficient C_{klt} of the interelectronic-distance expansion.

    Exact rational closed form; returns 0 outside the admissible t range.
    """
    if k < -1:
        raise ValueError("expansion defined for k >= -1")
    if l < 0 or t < 0:
        raise ValueError("l and t must be non-negative")
    tmax = (k // 2 - l) if k % 2 == 0 else (k + 1) // 2
    if t > tmax:
        return Fraction(0)
    base = Fraction(math.comb(k + 2, 2 * t + 1), k + 2)
    if l == 0:
        return base
    upper = min(l - 1, (k + 1) // 2)
    for a in range(upper + 1):
        base *= Fraction(2 * t - k + 2 * a, 2 * t + 1 + 2 * l - 2 * a)
    return base


@lru_cache(maxsize=None)
def perkins_weight(k: int, l: int) -> Fraction:
    """sum_t C_{klt}: the on-sphere radial factor (r< = r> = R gives R^k)."""
    tmax = (k // 2 - l) if k % 2 == 0 else (k + 1) // 2
    if tmax < 0:
        return Fraction(0)
    return sum((perkins_coefficient(k, l, t) for t in range(tmax + 1)), Fraction(0))


@lru_cache(maxsize=None)
def sph_product(l1: int, m1: int, l2: int, m2: int) -> tuple[tuple[int, float], ...]:
    """Coupling of a product of spherical harmonics on one sphere.

    Y_{l1 m1} Y_{l2 m2} = sum_L c_L Y_{L, m1+m2}; returns the nonzero
    (L, c_L) pairs.  Parity restricts L to l1 + l2 (mod 2).
    """
    out = []
    for L in range(abs(l1 - l2), l1 + l2 + 1):
        if (l1 + l2 + L) % 2 != 0:
            continue
        c0 = cg(l1, 0, l2, 0, L, 0)
        if c0 == 0.0:
            continue
        c = cg(l1, m1, l2, m2, L, m1 + m2)
        if c == 0.0:
            continue
        pref = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (4.0 * math.pi * (2 * L + 1)))
        out.append((L, pref * c * c0))
    return tuple(out)


def _index(l: int, m: int) -> int:
    return l * l + l + m


def basis_size(lcut: int) -> int:
    return (lcut + 1) * (lcut + 1)


def coupled_pair_array(M: int, lcut: int) -> np.ndarray:
    """Antisymmetrized coupled harmonic pair as a coefficient array.

    Entry [(l1,m1), (l2,m2)] multiplies Y_{l1 m1}(Omega_1) Y_{l2 m2}(Omega_2).
    """
    if abs(M) > TOTAL_L:
        raise ValueError(f"|M| must not exceed {TOTAL_L}")
    dim = basis_size(lcut)
    arr = np.zeros((dim, dim), dtype=complex)
    for m1 in range(-COUPLED_L1, COUPLED_L1 + 1):
        m2 = M - m1
        if abs(m2) > COUPLED_L2:
            continue
        c = cg(COUPLED_L1, m1, COUPLED_L2, m2, TOTAL_L, M)
        if c == 0.0:
            continue
        arr[_index(COUPLED_L1, m1), _index(COUPLED_L2, m2)] += c
        arr[_index(COUPLED_L2, m2), _index(COUPLED_L1, m1)] -= c
    return arr


def multiply_r12(arr: np.ndarray, lcut: int, lmax: int = DEFAULT_LMAX) -> np.ndarray:
    """Coefficient array of r12 * (input array) on the sphere surface.

    Uses the distance expansion truncated at angular order ``lmax`` (the
    k = 1 series is infinite); the caller is responsible for choosing
    ``lcut`` large enough to hold the products.
    """
    dim = basis_size(lcut)
    if arr.shape != (dim, dim):
        raise ValueError("array does not match the basis cut")
    radius = math.sqrt(SPHERE_RADIUS_SQ)
    out = np.zeros_like(arr)
    rows, cols = np.nonzero(arr)
    for r, c in zip(rows, cols):
        l1 = int(math.isqrt(r))
        m1 = r - l1 * l1 - l1
        l2 = int(math.isqrt(c))
        m2 = c - l2 * l2 - l2
        val = arr[r, c]
        for l in range(lmax + 1):
            w = 4.0 * math.pi * radius * float(perkins_weight(1, l))
            if w == 0.0:
                continue
            for m in range(-l, l + 1):
                sign = (-1) ** m
                left = sph_product(l1, m1, l, -m)
                right = sph_product(l2, m2, l, m)
                if not left or not right:
                    continue
                for La, ca in left:
                    if La > lcut:
                        continue
                    ia = _index(La, m1 - m)
                    for Lb, cb in right:
                        if Lb > lcut:
                            continue
                        out[ia, _index(Lb, m2 + m)] += val * w * sign * ca * cb
    return out


@dataclass(frozen=True)
class SpheriumState:
    """One member of the L=2 multiplet, expanded over harmonic products."""

    M: int
    lmax: int = DEFAULT_LMAX

    def __post_init__(self):
        if abs(self.M) > TOTAL_L:
            raise ValueError(f"|M| must not exceed {TOTAL_L}")
        if self.lmax < 4:
            raise ValueError("lmax too small to hold the coupled pair products")

    @property
    def lcut(self) -> int:
        return self.lmax + COUPLED_L2

    def coefficients(self) -> np.ndarray:
        """Unit-norm coefficient array of the full correlated wave function."""
        return _state_coefficients(self.M, self.lmax)


@lru_cache(maxsize=32)
def _state_coefficients(M: int, lmax: int) -> np.ndarray:
    lcut = lmax + COUPLED_L2
    pair = coupled_pair_array(M, lcut)
    amp = pair + multiply_r12(pair, lcut, lmax) / CORRELATION_SCALE
    norm = np.linalg.norm(amp)
    # the angular tail of the distance series must be converged in norm
    pair_lo = coupled_pair_array(M, lcut)
    amp_lo = pair_lo + multiply_r12(pair_lo, lcut, max(lmax - 4, 4)) / CORRELATION_SCALE
    tail = abs(np.linalg.norm(amp_lo) - norm) / norm
    if tail > NORM_TAIL_TOL:
        raise ValueError(f"norm tail {tail:.3e} beyond {NORM_TAIL_TOL}; raise lmax")
    amp = amp / norm
    amp.setflags(write=False)
    return amp


def spherium_reduced_density(
    state0: SpheriumState,
    state1: SpheriumState,
    alpha: float,
    ) -> HermitianMatrix:
    """One-electron reduced density of sqrt(alpha)|state0> + sqrt(1-alpha)|state1>."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if state0.lmax != state1.lmax:
        raise ValueError("states must share the expansion cut")
    amp = math.sqrt(alpha) * state0.coefficients() + math.sqrt(1.0 - alpha) * state1.coefficients()
    nrm = np.linalg.norm(amp)
    if nrm < 1e-12:
        raise ValueError("superposition vanishes")
    amp = amp / nrm
    rho = amp @ amp.conj().T
    rho /= np.real(np.trace(rho))
    return HermitianMatrix(rho, basis_label=f"sph-harm lcut={state0.lcut}", is_density=True)


def angular_momentum_diagonal(lcut: int) -> np.ndarray:
    """One-particle L_z on the (l, m) harmonic basis (diagonal, eigenvalue m)."""
    diag = np.empty(basis_size(lcut))
    for l in range(lcut + 1):
        for m in range(-l, l + 1):
            diag[_index(l, m)] = m
    return np.diag(diag)


def spherium_criterion(
    M: int,
    Mprime: int | None = None,
    log_base: float = 2.0,
    lmax: int = DEFAULT_LMAX,
    use_sectors: bool = True,
    **kwargs,
):
    """Criterion report for the |L,M> / |L,M'> superposition pair.

    ``use_sectors=True`` (default) keeps the not-shared-entropy projectors
    inside one-particle L_z sectors, the convention of a symmetry-adapted
    basis computation; pass False for the unrestricted minimization.
    """
    from .criterion import evaluate_criterion

    s0 = SpheriumState(M, lmax)
    s1 = SpheriumState(-M if Mprime is None else Mprime, lmax)
    rho0 = spherium_reduced_density(s0, s1, 1.0)
    rho1 = spherium_reduced_density(s0, s1, 0.0)
    sector = angular_momentum_diagonal(s0.lcut) if use_sectors else None
    return evaluate_criterion(
        rho0, rho1, log_base=log_base, sector_operator=sector, **kwargs
    )


# ---------------------------------------------------------------------------
# analytic checks


def radial_residual(r12: np.ndarray | float) -> float:
    """Residual of the reduced radial equation on the correlation factor.

    Phi'' + (4/r - 3 r / (2 R^2)) Phi' - Phi/r + E Phi with Phi = 1 + r/4
    must vanish identically at E = 1/4, R^2 = 6.
    """
    r = np.atleast_1d(np.asarray(r12, dtype=float))
    if np.any(r <= 0.0):
        raise ValueError("r12 must be positive")
    phi = 1.0 + r / CORRELATION_SCALE
    dphi = 1.0 / CORRELATION_SCALE
    res = (4.0 / r - 1.5 * r / SPHERE_RADIUS_SQ) * dphi - phi / r + ENERGY * phi
    return float(np.max(np.abs(res)))


def _sph(l: int, m: int, theta, phi):
    return sph_harm_y(l, m, theta, phi)


def wave_function(M: int, theta1, phi1, theta2, phi2) -> complex:
    """Direct (un-normalized, un-truncated) wave function value."""
    def coupled(ta, pa, tb, pb):
        total = 0.0 + 0.0j
        for m1 in range(-COUPLED_L1, COUPLED_L1 + 1):
            m2 = M - m1
            if abs(m2) > COUPLED_L2:
                continue
            c = cg(COUPLED_L1, m1, COUPLED_L2, m2, TOTAL_L, M)
            if c:
                total += c * _sph(COUPLED_L1, m1, ta, pa) * _sph(COUPLED_L2, m2, tb, pb)
        return total

    cosg = math.cos(theta1) * math.cos(theta2) + math.sin(theta1) * math.sin(theta2) * math.cos(phi1 - phi2)
    r12 = math.sqrt(max(2.0 * SPHERE_RADIUS_SQ * (1.0 - cosg), 0.0))
    pair = coupled(theta1, phi1, theta2, phi2) - coupled(theta2, phi2, theta1, phi1)
    return pair * (1.0 + r12 / CORRELATION_SCALE)


def expansion_value(arr: np.ndarray, lcut: int, theta1, phi1, theta2, phi2) -> complex:
    """Evaluate a coefficient array at a pair of directions."""
    vec1 = np.empty(basis_size(lcut), dtype=complex)
    vec2 = np.empty(basis_size(lcut), dtype=complex)
    for l in range(lcut + 1):
        for m in range(-l, l + 1):
            vec1[_index(l, m)] = _sph(l, m, theta1, phi1)
            vec2[_index(l, m)] = _sph(l, m, theta2, phi2)
    return complex(vec1 @ arr @ vec2)
