"""Entropy-vs-alpha curves, chord convexity labels, criterion agreement.

The superposition convention throughout is sqrt(alpha)|psi0> +
sqrt(1-alpha)|psi1>, so alpha = 1 selects the first state of a pair and
alpha = 0 the second.  Convexity is decided literally against the chord
between the endpoint entropies, not via second differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .criterion import CriterionReport, evaluate_criterion
from .spectra import HermitianMatrix, eigendecompose, von_neumann_entropy

DEFAULT_GRID_SIZE = 41
EXACT_CHORD_TOL = 1e-7  # closed-form models (angular)
QUADRATURE_CHORD_TOL = 1e-5  # quadrature / truncated-expansion models


@dataclass(frozen=True)
class PairSpec:
    """A degenerate pair packaged as an alpha -> reduced density builder."""

    builder: Callable[[float], HermitianMatrix]
    label: str
    exact: bool = False
    sector_operator: np.ndarray | None = field(default=None, compare=False)

    @property
    def chord_tol(self) -> float:
        return EXACT_CHORD_TOL if self.exact else QUADRATURE_CHORD_TOL


@dataclass(frozen=True)
class EntropyCurve:
    alphas: tuple[float, ...]
    entropies: tuple[float, ...]
    s0: float  # entropy at alpha = 1 (first state)
    s1: float  # entropy at alpha = 0 (second state)
    log_base: float

    def __post_init__(self):
        if len(self.alphas) != len(self.entropies):
            raise ValueError("grid/entropy length mismatch")
        if any(not np.isfinite(s) or s < -1e-12 for s in self.entropies):
            raise ValueError("entropies must be finite and non-negative")
        if abs(self.entropies[0] - self.s1) > 1e-8 or abs(self.entropies[-1] - self.s0) > 1e-8:
            raise ValueError("endpoint entropies inconsistent with curve")

    def chord(self) -> np.ndarray:
        a = np.asarray(self.alphas)
        return a * self.s0 + (1.0 - a) * self.s1


@dataclass(frozen=True)
class ConvexityLabel:
    label: str  # convex | concave | linear | indefinite
    max_deviation: float  # largest |S - chord| over the grid

    def __post_init__(self):
        if self.label not in {"convex", "concave", "linear", "indefinite"}:
            raise ValueError(f"unknown label {self.label!r}")


def entropy_curve(
    pair: PairSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
    log_base: float = 2.0,
) -> EntropyCurve:
    """Uniform alpha grid of von Neumann entropies for a pair."""
    if grid_size < 5:
        raise ValueError("grid size must be at least 5")
    alphas = np.linspace(0.0, 1.0, grid_size)
    ents = []
    for a in alphas:
        spec = eigendecompose(pair.builder(float(a)))
        ents.append(von_neumann_entropy(spec, log_base))
    return EntropyCurve(
        alphas=tuple(float(a) for a in alphas),
        entropies=tuple(ents),
        s0=ents[-1],
        s1=ents[0],
        log_base=log_base,
    )


def classify_convexity(curve: EntropyCurve, tol: float = QUADRATURE_CHORD_TOL) -> ConvexityLabel:
    """Chord comparison over the grid.

    convex: at least one point below the chord by more than tol, none
    above; concave symmetric; linear: neither side exceeds tol;
    indefinite: both sides do.
    """
    dev = np.asarray(curve.entropies) - curve.chord()
    below = bool(np.min(dev) < -tol)
    above = bool(np.max(dev) > tol)
    peak = float(np.max(np.abs(dev)))
    if below and above:
        return ConvexityLabel("indefinite", peak)
    if below:
        return ConvexityLabel("convex", peak)
    if above:
        return ConvexityLabel("concave", peak)
    return ConvexityLabel("linear", peak)


@dataclass(frozen=True)
class AgreementRecord:
    pair_label: str
    report: CriterionReport
    observed: ConvexityLabel
    agree: bool | None  # None when Q_c = 0 asserts nothing

    @property
    def asserted(self) -> bool:
        return self.agree is not None


def criterion_vs_observation(
    pair: PairSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
    log_base: float = 2.0,
    chord_tol: float | None = None,
    **criterion_kwargs,
) -> AgreementRecord:
    """Evaluate the criterion on a pair and check it against the curve."""
    report = evaluate_criterion(
        pair.builder(1.0),
        pair.builder(0.0),
        log_base=log_base,
        sector_operator=pair.sector_operator,
        **criterion_kwargs,
    )
    curve = entropy_curve(pair, grid_size, log_base)
    observed = classify_convexity(curve, pair.chord_tol if chord_tol is None else chord_tol)
    if report.qc == 0:
        agree = None
    else:
        agree = observed.label == ("convex" if report.qc > 0 else "concave")
    return AgreementRecord(pair.label, report, observed, agree)


# ---------------------------------------------------------------------------
# pair factories, one per model


def angular_pair(l: int, L: int, M: int, Mprime: int | None = None) -> PairSpec:
    from .angular import coupled_reduced_density

    Mp = -M if Mprime is None else Mprime
    return PairSpec(
        builder=lambda a: coupled_reduced_density(l, L, M, a, Mprime=Mp),
        label=f"angular l={l} L={L} M={M}/{Mp}",
        exact=True,
    )


def oscillator_pair(state0, state1, basis=None, use_sectors: bool = True) -> PairSpec:
    from .oscillator import angular_momentum_matrix, oscillator_reduced_density

    sector = angular_momentum_matrix(basis) if use_sectors else None
    return PairSpec(
        builder=lambda a: oscillator_reduced_density(state0, state1, a, basis),
        label=f"oscillator {state0.label()}/{state1.label()}",
        sector_operator=sector,
    )


def spherium_pair(
    M: int,
    Mprime: int | None = None,
    lmax: int | None = None,
    use_sectors: bool = True,
) -> PairSpec:
    from .spherium import (
        DEFAULT_LMAX,
        SpheriumState,
        angular_momentum_diagonal,
        spherium_reduced_density,
    )

    lm = DEFAULT_LMAX if lmax is None else lmax
    s0 = SpheriumState(M, lm)
    s1 = SpheriumState(-M if Mprime is None else Mprime, lm)
    sector = angular_momentum_diagonal(s0.lcut) if use_sectors else None
    return PairSpec(
        builder=lambda a: spherium_reduced_density(s0, s1, a),
        label=f"spherium M={s0.M}/{s1.M}",
        sector_operator=sector,
    )


def lg_pair(mode0, mode1, n_basis: int | None = None, order: int | None = None) -> PairSpec:
    from .lgmodes import DEFAULT_BASIS_SIZE, DEFAULT_QUADRATURE_ORDER, lg_reduced_density

    nb = DEFAULT_BASIS_SIZE if n_basis is None else n_basis
    od = DEFAULT_QUADRATURE_ORDER if order is None else order
    return PairSpec(
        builder=lambda a: lg_reduced_density(mode0, mode1, a, nb, od),
        label=f"lg {mode0.label()}/{mode1.label()}",
    )
