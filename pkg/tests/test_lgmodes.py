"""Laguerre-Gaussian transverse modes and the x|y reduced density."""

import numpy as np
import pytest

from entconvex.lgmodes import (
    LGMode,
    lg_criterion,
    lg_evaluate,
    lg_reduced_density,
    mode_norm_capture,
)
from entconvex.spectra import eigendecompose, von_neumann_entropy


class TestEvaluate:
    def test_ground_mode_is_gaussian(self):
        m = LGMode(0, 0)
        v = lg_evaluate(m, np.array([0.0, 0.5, 1.0]), np.zeros(3))
        assert np.all(np.abs(v.imag) < 1e-15)
        np.testing.assert_allclose(v.real, np.exp(-np.array([0.0, 0.25, 1.0])), atol=1e-14)
        # rotational symmetry of the modulus
        assert abs(lg_evaluate(m, 0.3, 0.4)) == pytest.approx(abs(lg_evaluate(m, 0.5, 0.0)), abs=1e-14)

    def test_mirror_is_conjugate(self):
        x, y = 0.7, -0.4
        a = lg_evaluate(LGMode(2, 3), x, y)
        b = lg_evaluate(LGMode(2, -3), x, y)
        assert b == pytest.approx(np.conj(a), abs=1e-14)
        # equivalently a y-reflection
        c = lg_evaluate(LGMode(2, 3), x, -y)
        assert c == pytest.approx(np.conj(a), abs=1e-14)

    def test_vortex_zero_at_origin(self):
        assert abs(lg_evaluate(LGMode(1, 1), 0.0, 0.0)) == 0.0

    def test_negative_radial_index_rejected(self):
        with pytest.raises(ValueError):
            LGMode(-1, 0)


class TestReducedDensity:
    def test_basis_captures_mode(self):
        for mode in (LGMode(1, 1), LGMode(3, 3), LGMode(2, -2)):
            assert mode_norm_capture(mode) == pytest.approx(1.0, abs=1e-10)

    def test_density_properties(self):
        rho = lg_reduced_density(LGMode(1, 1), LGMode(1, -1), 0.3)
        assert rho.trace() == pytest.approx(1.0, abs=1e-10)

    def test_same_mode_alpha_independent(self):
        m = LGMode(2, 1)
        s = [
            von_neumann_entropy(eigendecompose(lg_reduced_density(m, m, a)))
            for a in (0.0, 0.4, 1.0)
        ]
        assert max(s) - min(s) < 1e-10

    def test_trace_swap_isospectral(self):
        # tracing x instead of y maps (l, m) to (l, -m) up to a phase, so
        # the two partial traces of one mode share a spectrum
        m0, m1 = LGMode(2, 1), LGMode(2, -1)
        a = lg_reduced_density(m0, m0, 1.0)
        b = lg_reduced_density(m1, m1, 1.0)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(a.entries), np.linalg.eigvalsh(b.entries), atol=1e-8
        )

    def test_entropy_stable_under_basis_growth(self):
        vals = [
            von_neumann_entropy(
                eigendecompose(lg_reduced_density(LGMode(3, 3), LGMode(3, -3), 0.5, n_basis=nb))
            )
            for nb in (32, 36)
        ]
        assert vals[0] == pytest.approx(vals[1], abs=1e-4)

    def test_bad_alpha_rejected(self):
        with pytest.raises(ValueError):
            lg_reduced_density(LGMode(0, 0), LGMode(1, 1), 1.2)


class TestCriterion:
    def test_mirror_pair_not_shared_vanishes(self):
        rep = lg_criterion(LGMode(1, 1), LGMode(1, -1))
        assert rep.s_ns == pytest.approx(0.0, abs=1e-10)
        assert rep.qc == 1
        assert rep.s0 == pytest.approx(rep.s1, abs=1e-10)
