"""Two harmonically coupled 2D oscillators: exact states and trace-out.

Eigenstates are products of centered- and relative-coordinate modes with
frequencies 1 and sqrt(4*lambda + 1).  The bipartite coefficient tensor
expands the state over products of one-particle one-coordinate Hermite
functions ``f^1_k``; with the separated arguments scaled by 1/sqrt(2) the
lambda = 0 expansion terminates exactly, and the interacting case is
integrated by Gauss-Hermite quadrature (the integrands are polynomials
times Gaussians, so the quadrature itself is exact at sufficient order).

Coefficient tensors are cached on disk; see ``tensor_cache_dir``.
"""

from __future__ import annotations

import hashlib
import math
import os
import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.special import roots_hermite

from .spectra import CoefficientTensor, HermitianMatrix

CACHE_ENV_VAR = "ENTCONVEX_CACHE_DIR"
CACHE_FORMAT_VERSION = 1
NORM_DEFICIT_TOL = 1e-6


def omega_relative(lam: float) -> float:
    """Relative-coordinate frequency sqrt(4*lambda + 1)."""
    if lam < 0:
        raise ValueError("coupling must be >= 0")
    return math.sqrt(4.0 * lam + 1.0)


@dataclass(frozen=True)
class OscState:
    """Quantum numbers (n, m) of the centered and (l, p) of the relative mode."""

    n: int
    m: int
    l: int
    p: int
    lam: float = 0.0

    def __post_init__(self):
        if self.n < 0 or self.l < 0:
            raise ValueError("radial quantum numbers must be non-negative")

    @property
    def energy(self) -> float:
        wr = omega_relative(self.lam)
        return (2 * self.n + abs(self.m) + 1) * 1.0 + (2 * self.l + abs(self.p) + 1) * wr

    @property
    def lz(self) -> int:
        return self.m + self.p

    def label(self) -> str:
        return f"{self.n},{self.m},{self.l},{self.p}"


@dataclass(frozen=True)
class OscBasisSpec:
    """Hermite-basis size per coordinate and quadrature order."""

    n_per_coordinate: int = 16
    quadrature_order: int = 48

    def __post_init__(self):
        if self.n_per_coordinate < 1 or self.quadrature_order < 1:
            raise ValueError("basis and quadrature sizes must be positive")

    def check_state(self, state: OscState):
        need = 2 * state.n + abs(state.m) + 2 * state.l + abs(state.p) + 2
        if self.n_per_coordinate < need:
            raise ValueError(
                f"basis size {self.n_per_coordinate} below exactness bound {need}"
            )


def kappa_coefficients(n: int, m: int) -> dict[tuple[int, int], complex]:
    """Cylindrical-to-Cartesian mode expansion coefficients.

    kappa(n, m, j, k) multiplies the Cartesian state with quantum numbers
    (2n + |m| - j - k, j + k); the i^(sgn(m)(k-j)) phase makes the map
    unitary.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    am = abs(m)
    sg = 1 if m >= 0 else -1
    pref = 1.0 / math.sqrt(math.factorial(n) * math.factorial(n + am) * 2.0 ** (2 * n + am))
    out: dict[tuple[int, int], complex] = {}
    for j in range(n + 1):
        for k in range(n + am + 1):
            mag = (
                pref
                * math.comb(n, j)
                * math.comb(n + am, k)
                * math.sqrt(math.factorial(2 * n + am - j - k) * math.factorial(j + k))
            )
            out[(j, k)] = mag * (1j) ** (sg * (k - j))
    return out


def _hermite_functions(nmax: int, u: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions psi_0..psi_nmax on the grid ``u``."""
    out = np.empty((nmax + 1, u.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * u**2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for k in range(1, nmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * u * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_mode(n: int, omega: float, x) -> np.ndarray | float:
    """Oscillator mode f_n^omega(x) ~ exp(-omega x^2/4) H_n(sqrt(omega/2) x).

    Orthonormal under the plain dx measure.
    """
    if n < 0 or omega <= 0:
        raise ValueError("need n >= 0 and omega > 0")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = (omega / 2.0) ** 0.25 * _hermite_functions(n, math.sqrt(omega / 2.0) * xs)[n]
    return vals if np.ndim(x) else float(vals[0])


@lru_cache(maxsize=32)
def _overlap_tensor(n_basis: int, a_max: int, c_max: int, omega_r: float, order: int):
    """O[i1, i2, a, c] = <f_i1(x1) f_i2(x2) | f_a^1(u) f_c^wr(v)>.

    u = (x1 + x2)/sqrt(2), v = (x1 - x2)/sqrt(2).  The combined Gaussian
    weight is exp(-u^2/2) exp(-(1+wr) v^2/4), so scaled Gauss-Hermite
    nodes integrate the polynomial part exactly.
    """
    t, wt = roots_hermite(order)
    su = math.sqrt(2.0)
    sv = 2.0 / math.sqrt(1.0 + omega_r)
    u = su * t
    v = sv * t
    # weights with the e^{t^2} compensation folded in (functions carry
    # their own Gaussians)
    wu = wt * np.exp(t**2) * su
    wv = wt * np.exp(t**2) * sv

    uu, vv = np.meshgrid(u, v, indexing="ij")
    x1 = (uu + vv) / math.sqrt(2.0)
    x2 = (uu - vv) / math.sqrt(2.0)
    nmax = n_basis - 1
    f1 = (0.5) ** 0.25 * _hermite_functions(nmax, (x1 / math.sqrt(2.0)).ravel())
    f2 = (0.5) ** 0.25 * _hermite_functions(nmax, (x2 / math.sqrt(2.0)).ravel())
    f1 = f1.reshape(nmax + 1, order, order)
    f2 = f2.reshape(nmax + 1, order, order)
    fa = (0.5) ** 0.25 * _hermite_functions(a_max, u / math.sqrt(2.0))
    fc = (omega_r / 2.0) ** 0.25 * _hermite_functions(c_max, math.sqrt(omega_r / 2.0) * v)

    out = np.einsum(
        "ipq,jpq,ap,cq,p,q->ijac", f1, f2, fa, fc, wu, wv, optimize=True
    )
    out.setflags(write=False)
    return out


def coefficient_tensor(state: OscState, basis: OscBasisSpec | None = None) -> CoefficientTensor:
    """Bipartite amplitudes of one eigenstate over the f^1 product basis.

    Side A groups particle 1's (x, y) Hermite indices, side B particle
    2's.  Raises when the truncated expansion loses more than 1e-6 of the
    norm (basis too small).  Results are memoized in memory on top of the
    disk cache (an alpha sweep calls this once per grid point).
    """
    return _coefficient_tensor_cached(state, basis or OscBasisSpec())


@lru_cache(maxsize=64)
def _coefficient_tensor_cached(state: OscState, basis: OscBasisSpec) -> CoefficientTensor:
    basis.check_state(state)
    cached = _cache_load(state, basis)
    if cached is not None:
        return CoefficientTensor(cached)

    nb = basis.n_per_coordinate
    wr = omega_relative(state.lam)
    a_max = 2 * state.n + abs(state.m)
    c_max = 2 * state.l + abs(state.p)
    ox = _overlap_tensor(nb, a_max, c_max, wr, basis.quadrature_order)

    kap_r = kappa_coefficients(state.n, state.m)
    kap_rel = kappa_coefficients(state.l, state.p)
    c4 = np.zeros((nb, nb, nb, nb), dtype=complex)
    for (j, k), kr in kap_r.items():
        a = 2 * state.n + abs(state.m) - j - k
        b = j + k
        for (r, s), kv in kap_rel.items():
            cc = 2 * state.l + abs(state.p) - r - s
            d = r + s
            coef = kr * kv
            # c4[i1, j1, i2, j2] += coef * Ox[i1, i2, a, cc] * Oy[j1, j2, b, d]
            c4 += coef * np.einsum("ik,jl->ijkl", ox[:, :, a, cc], ox[:, :, b, d])

    amp = c4.reshape(nb * nb, nb * nb)
    norm = np.linalg.norm(amp)
    if norm**2 < 1.0 - NORM_DEFICIT_TOL:
        raise ValueError(
            f"norm deficit {1.0 - norm**2:.3e} beyond {NORM_DEFICIT_TOL}; enlarge the basis"
        )
    amp = amp / norm
    _cache_store(state, basis, amp)
    return CoefficientTensor(amp)


def oscillator_reduced_density(
    state0: OscState,
    state1: OscState,
    alpha: float,
    basis: OscBasisSpec | None = None,
) -> HermitianMatrix:
    """Reduced density of sqrt(alpha)|state0> + sqrt(1-alpha)|state1>."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if state0.lam != state1.lam:
        raise ValueError("states must share the coupling strength")
    if abs(state0.energy - state1.energy) > 1e-9:
        warnings.warn(
            f"superposed states are not degenerate: E0={state0.energy}, E1={state1.energy}",
            stacklevel=2,
        )
    c0 = coefficient_tensor(state0, basis).amplitudes
    c1 = coefficient_tensor(state1, basis).amplitudes
    amp = math.sqrt(alpha) * c0 + math.sqrt(1.0 - alpha) * c1
    amp = amp / np.linalg.norm(amp)
    rho = amp @ amp.conj().T
    rho /= np.real(np.trace(rho))
    return HermitianMatrix(rho, basis_label="hermite-f1-product", is_density=True)


# ---------------------------------------------------------------------------
# operator matrices in the f^1 basis (for energy / angular momentum checks)

@lru_cache(maxsize=8)
def _ladder_matrices(nb: int):
    idx = np.arange(1, nb)
    x = np.zeros((nb, nb))
    x[idx - 1, idx] = np.sqrt(idx)
    x[idx, idx - 1] = np.sqrt(idx)
    p = np.zeros((nb, nb), dtype=complex)
    p[idx - 1, idx] = -0.5j * np.sqrt(idx)
    p[idx, idx - 1] = 0.5j * np.sqrt(idx)
    return x, p


def _apply_1d(op: np.ndarray, c4: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(op, c4, axes=([1], [axis])), 0, axis)


def energy_expectation(state: OscState, basis: OscBasisSpec | None = None) -> float:
    """Variational energy of the expanded state.

    The Hamiltonian is written in the separated-argument coordinates (in
    which the expansion is performed); it is unitarily equivalent to the
    particle-coordinate one, so its spectrum is the exact ladder
    2n + |m| + 1 + (2l + |p| + 1) sqrt(4 lambda + 1).
    """
    basis = basis or OscBasisSpec()
    nb = basis.n_per_coordinate
    c4 = coefficient_tensor(state, basis).amplitudes.reshape(nb, nb, nb, nb)
    x, p = _ladder_matrices(nb)
    wr = omega_relative(state.lam)
    x2 = x @ x
    p2 = (p @ p).real
    diag = p2 + ((1.0 + wr**2) / 8.0) * x2
    total = 0.0
    for axis in range(4):
        total += np.real(np.vdot(c4, _apply_1d(diag, c4, axis)))
    # cross terms (x1 x2 and y1 y2) from the frequency mismatch
    xc = _apply_1d(x, c4, 0)
    xc = _apply_1d(x, xc, 2)
    total += ((1.0 - wr**2) / 4.0) * np.real(np.vdot(c4, xc))
    yc = _apply_1d(x, c4, 1)
    yc = _apply_1d(x, yc, 3)
    total += ((1.0 - wr**2) / 4.0) * np.real(np.vdot(c4, yc))
    return float(total)


def lz_residual(state: OscState, basis: OscBasisSpec | None = None) -> float:
    """|| (L_z - (m + p)) |psi> || in the truncated basis."""
    basis = basis or OscBasisSpec()
    nb = basis.n_per_coordinate
    c4 = coefficient_tensor(state, basis).amplitudes.reshape(nb, nb, nb, nb)
    x, p = _ladder_matrices(nb)
    acc = np.zeros_like(c4)
    # L_z = sum_particles x p_y - y p_x;  axes: (x1, y1, x2, y2)
    for ax_x, ax_y in ((0, 1), (2, 3)):
        t = _apply_1d(x, c4, ax_x)
        acc += _apply_1d(p, t, ax_y)
        t = _apply_1d(x, c4, ax_y)
        acc -= _apply_1d(p, t, ax_x)
    acc -= state.lz * c4
    return float(np.linalg.norm(acc))


def angular_momentum_matrix(basis: OscBasisSpec | None = None) -> np.ndarray:
    """One-particle L_z = x p_y - y p_x on the (x, y) Hermite product basis.

    This is the conserved quantity of the reduced problem: both endpoint
    reduced densities commute with it, so it labels their eigenvectors by
    angular momentum sectors.  Used to restrict the not-shared-entropy
    projector freedom to symmetry-respecting choices (the convention of a
    symmetry-adapted variational treatment).
    """
    basis = basis or OscBasisSpec()
    nb = basis.n_per_coordinate
    x, p = _ladder_matrices(nb)
    lz = np.kron(x, p) - np.kron(p, x)
    return 0.5 * (lz + lz.conj().T)


def oscillator_criterion(
    state0: OscState,
    state1: OscState,
    basis: OscBasisSpec | None = None,
    log_base: float = 2.0,
    use_sectors: bool = True,
    **kwargs,
):
    """Criterion report for a degenerate oscillator pair.

    By default the not-shared entropy respects the one-particle L_z sectors
    (``use_sectors=True``); pass False for the unrestricted minimization.
    """
    from .criterion import evaluate_criterion

    basis = basis or OscBasisSpec()
    rho0 = oscillator_reduced_density(state0, state1, 1.0, basis)
    rho1 = oscillator_reduced_density(state0, state1, 0.0, basis)
    sector = angular_momentum_matrix(basis) if use_sectors else None
    return evaluate_criterion(
        rho0, rho1, log_base=log_base, sector_operator=sector, **kwargs
    )


# ---------------------------------------------------------------------------
# analytic lambda = 0 construction (Gamma-function route)

@lru_cache(maxsize=None)
def _gauss_moment(k: int) -> float:
    """Integral of x^k exp(-x^2/2) over the real line."""
    if k % 2:
        return 0.0
    return math.sqrt(2.0) * 2.0 ** (k / 2) * math.gamma((k + 1) / 2.0)


@lru_cache(maxsize=None)
def _herm_coef(n: int, q: int) -> float:
    return math.factorial(n) * (-1) ** q / (math.factorial(q) * math.factorial(n - 2 * q))


@lru_cache(maxsize=None)
def _binom_moment_sum(a: int, b: int, c1: int, c2: int) -> float:
    total = 0.0
    for s in range(a + 1):
        for t in range(b + 1):
            total += (
                math.comb(a, s)
                * math.comb(b, t)
                * (-1) ** (b - t)
                * _gauss_moment(s + t + c1)
                * _gauss_moment(a - s + b - t + c2)
            )
    return total


@lru_cache(maxsize=None)
def overlap_analytic(a: int, c: int, i1: int, i2: int) -> float:
    """Closed-form lambda = 0 overlap, the Gamma-route twin of the quadrature.

    Expands every Hermite polynomial into monomials and integrates the
    Gaussian moments term by term.  Independent of the quadrature path.
    """
    if (a + c + i1 + i2) % 2:
        return 0.0
    norm = 1.0
    for n in (a, c, i1, i2):
        norm *= (2.0 * math.pi) ** -0.25 / math.sqrt(2.0**n * math.factorial(n))
    total = 0.0
    for qa in range(a // 2 + 1):
        aa = a - 2 * qa
        for qc in range(c // 2 + 1):
            bb = c - 2 * qc
            for q1 in range(i1 // 2 + 1):
                c1 = i1 - 2 * q1
                for q2 in range(i2 // 2 + 1):
                    c2 = i2 - 2 * q2
                    coef = (
                        _herm_coef(a, qa)
                        * _herm_coef(c, qc)
                        * _herm_coef(i1, q1)
                        * _herm_coef(i2, q2)
                        * 2.0 ** ((c1 + c2) / 2.0)
                    )
                    total += coef * _binom_moment_sum(aa, bb, c1, c2)
    return norm * total


def coefficient_tensor_analytic(state: OscState, basis: OscBasisSpec | None = None) -> CoefficientTensor:
    """lambda = 0 tensor from the analytic overlaps; oracle for the quadrature."""
    if state.lam != 0.0:
        raise ValueError("analytic construction only at lambda = 0")
    basis = basis or OscBasisSpec()
    basis.check_state(state)
    nb = basis.n_per_coordinate
    a_max = 2 * state.n + abs(state.m)
    c_max = 2 * state.l + abs(state.p)
    ox = np.zeros((nb, nb, a_max + 1, c_max + 1))
    for a in range(a_max + 1):
        for c in range(c_max + 1):
            for i1 in range(nb):
                i2 = a + c - i1  # quanta conservation at lambda = 0
                if 0 <= i2 < nb:
                    ox[i1, i2, a, c] = overlap_analytic(a, c, i1, i2)
    kap_r = kappa_coefficients(state.n, state.m)
    kap_rel = kappa_coefficients(state.l, state.p)
    c4 = np.zeros((nb, nb, nb, nb), dtype=complex)
    for (j, k), kr in kap_r.items():
        a = 2 * state.n + abs(state.m) - j - k
        b = j + k
        for (r, s), kv in kap_rel.items():
            cc = 2 * state.l + abs(state.p) - r - s
            d = r + s
            c4 += (kr * kv) * np.einsum("ik,jl->ijkl", ox[:, :, a, cc], ox[:, :, b, d])
    amp = c4.reshape(nb * nb, nb * nb)
    return CoefficientTensor(amp / np.linalg.norm(amp))


# ---------------------------------------------------------------------------
# on-disk tensor cache

def tensor_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "entconvex"


def _cache_key(state: OscState, basis: OscBasisSpec) -> str:
    raw = (
        f"v{CACHE_FORMAT_VERSION}|{state.n}|{state.m}|{state.l}|{state.p}"
        f"|{state.lam!r}|{basis.n_per_coordinate}|{basis.quadrature_order}"
    )
    return hashlib.sha256(raw.encode()).hexdigest()[:24]


def _cache_path(state: OscState, basis: OscBasisSpec) -> Path:
    return tensor_cache_dir() / f"tensor_{_cache_key(state, basis)}.npz"


def _cache_load(state: OscState, basis: OscBasisSpec):
    path = _cache_path(state, basis)
    if not path.exists():
        return None
    try:
        with np.load(path, allow_pickle=False) as data:
            if int(data["version"]) != CACHE_FORMAT_VERSION:
                return None
            return data["amplitudes"]
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(state: OscState, basis: OscBasisSpec, amp: np.ndarray):
    path = _cache_path(state, basis)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez_compressed(
            path,
            version=np.array(CACHE_FORMAT_VERSION),
            key=np.array(_cache_key(state, basis)),
            label=np.array(f"{state.label()} lam={state.lam} N={basis.n_per_coordinate} Q={basis.quadrature_order}"),
            amplitudes=amp,
        )
    except OSError:
        pass  # cache is best effort


def cache_entries() -> list[tuple[str, str]]:
    """(filename, human label) for every cached tensor, sorted."""
    root = tensor_cache_dir()
    out = []
    if root.exists():
        for path in sorted(root.glob("tensor_*.npz")):
            try:
                with np.load(path, allow_pickle=False) as data:
                    out.append((path.name, str(data["label"])))
            except (OSError, ValueError, KeyError):
                out.append((path.name, "<unreadable>"))
    return out


def cache_clear() -> int:
    root = tensor_cache_dir()
    n = 0
    if root.exists():
        for path in root.glob("tensor_*.npz"):
            path.unlink(missing_ok=True)
            n += 1
    return n
