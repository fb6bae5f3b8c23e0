import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entconvex.spectra import (
    CoefficientTensor,
    HermitianMatrix,
    NonHermitianError,
    NotDensityMatrixError,
    eigendecompose,
    reduce_pure_state,
    relative_entropy,
    von_neumann_entropy,
)


def _density(mat):
    return HermitianMatrix(np.asarray(mat, dtype=complex), is_density=True)


def _random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return _density(rho / np.real(np.trace(rho)))


class TestHermitianMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(NotDensityMatrixError):
            _density(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotDensityMatrixError):
            _density([[1.5, 0.0], [0.0, -0.5]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_entries_read_only(self):
        m = _density(np.eye(3) / 3.0)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 9.0


class TestEigendecompose:
    def test_descending_order_and_reconstruction(self):
        rng = np.random.default_rng(3)
        rho = _random_density(rng, 6)
        spec = eigendecompose(rho)
        assert np.all(np.diff(spec.eigenvalues) <= 1e-14)
        np.testing.assert_allclose(spec.reconstruct(), rho.entries, atol=1e-12)

    def test_blocks_group_degenerate_eigenvalues(self):
        spec = eigendecompose(_density(np.diag([0.4, 0.4, 0.2])))
        assert [len(b) for b in spec.blocks] == [2, 1]

    def test_support_excludes_kernel(self):
        spec = eigendecompose(_density(np.diag([0.5, 0.5, 0.0])))
        assert spec.support == (0, 1)

    def test_projector_is_idempotent(self):
        rng = np.random.default_rng(11)
        spec = eigendecompose(_random_density(rng, 5))
        p = spec.projector(spec.blocks[0])
        np.testing.assert_allclose(p @ p, p, atol=1e-12)


class TestVonNeumannEntropy:
    def test_pure_state_zero(self):
        spec = eigendecompose(_density(np.diag([1.0, 0.0, 0.0])))
        assert von_neumann_entropy(spec) == 0.0

    def test_maximally_mixed(self):
        spec = eigendecompose(_density(np.eye(4) / 4.0))
        assert von_neumann_entropy(spec, 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_base_conversion(self):
        spec = eigendecompose(_density(np.diag([0.7, 0.3])))
        s2 = von_neumann_entropy(spec, 2.0)
        se = von_neumann_entropy(spec, math.e)
        assert s2 * math.log(2.0) == pytest.approx(se, abs=1e-12)

    def test_binary_entropy_value(self):
        p = 0.25
        spec = eigendecompose(_density(np.diag([p, 1.0 - p])))
        expected = -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
        assert von_neumann_entropy(spec, 2.0) == pytest.approx(expected, abs=1e-12)

    @given(st.lists(st.floats(1e-3, 1.0), min_size=2, max_size=8))
    @settings(max_examples=50, deadline=None)
    def test_unitary_invariance(self, raw):
        w = np.array(raw) / sum(raw)
        rng = np.random.default_rng(int(sum(raw) * 1e6) % 2**31)
        q, _ = np.linalg.qr(
            rng.standard_normal((len(w), len(w))) + 1j * rng.standard_normal((len(w), len(w)))
        )
        rho = _density((q * w) @ q.conj().T)
        s_rot = von_neumann_entropy(eigendecompose(rho))
        s_diag = von_neumann_entropy(eigendecompose(_density(np.diag(w))))
        assert s_rot == pytest.approx(s_diag, abs=1e-9)


class TestRelativeEntropy:
    def test_identical_states_zero(self):
        rng = np.random.default_rng(5)
        spec = eigendecompose(_random_density(rng, 4))
        assert relative_entropy(spec, spec) == pytest.approx(0.0, abs=1e-10)

    def test_classical_kullback_leibler(self):
        p = np.array([0.6, 0.4])
        q = np.array([0.3, 0.7])
        got = relative_entropy(
            eigendecompose(_density(np.diag(p))), eigendecompose(_density(np.diag(q))), 2.0
        )
        expected = float(np.sum(p * np.log2(p / q)))
        assert got == pytest.approx(expected, abs=1e-12)

    def test_infinite_on_kernel_overlap(self):
        rho = eigendecompose(_density(np.diag([1.0, 0.0])))
        sigma = eigendecompose(_density(np.diag([0.0, 1.0])))
        assert relative_entropy(rho, sigma) == math.inf

    def test_nonnegative(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            a = eigendecompose(_random_density(rng, 3))
            b = eigendecompose(_random_density(rng, 3))
            assert relative_entropy(a, b) >= -1e-10


class TestReducePureState:
    def test_bell_state_halves(self):
        c = CoefficientTensor(np.eye(2) / math.sqrt(2.0))
        rho = reduce_pure_state(c)
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2.0, atol=1e-14)

    def test_schmidt_entropies_match_sides(self):
        rng = np.random.default_rng(13)
        g = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        c = CoefficientTensor(g).normalized()
        sa = von_neumann_entropy(eigendecompose(reduce_pure_state(c, "a")))
        sb = von_neumann_entropy(eigendecompose(reduce_pure_state(c, "b")))
        assert sa == pytest.approx(sb, abs=1e-10)

    def test_entropy_from_singular_values(self):
        rng = np.random.default_rng(17)
        g = rng.standard_normal((4, 4))
        c = CoefficientTensor(g).normalized()
        w = np.linalg.svd(c.amplitudes, compute_uv=False) ** 2
        expected = -float(np.sum(w * np.log2(w)))
        got = von_neumann_entropy(eigendecompose(reduce_pure_state(c)))
        assert got == pytest.approx(expected, abs=1e-10)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            reduce_pure_state(CoefficientTensor(np.eye(2)))
