import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from passive_dilation.dilation import NotDilatableError, random_dilatable_channel
from passive_dilation.gaussian import (
    GaussianChannel,
    GaussianState,
    additive_channel,
    compose,
    random_state,
    unitary_channel,
    validate_channel,
    validate_state,
)
from passive_dilation.normal_form import (
    NormalForm,
    compute_normal_form,
    reconstruct,
    reconstruction_residual,
)
from passive_dilation.symplectic import (
    OrthogonalSymplectic,
    is_orthogonal_symplectic,
    random_orthogonal_symplectic,
)

I2 = np.eye(2)


def sandwich(core, G, F):
    """``G^T ∘ core ∘ F^T`` for passive ``G`` and ``F``."""
    return compose(unitary_channel(G.T), compose(core, unitary_channel(F.T)))


class TestExamples:
    def test_identity(self):
        nf = compute_normal_form(GaussianChannel.identity(3))
        np.testing.assert_allclose(nf.lam, np.ones(3), atol=1e-12)
        assert reconstruction_residual(GaussianChannel.identity(3), nf) < 1e-12

    def test_half_loss(self):
        c = GaussianChannel(np.sqrt(0.5) * I2, 0.5 * I2)
        nf = compute_normal_form(c)
        np.testing.assert_allclose(nf.lam, [0.5], atol=1e-15)
        np.testing.assert_allclose(nf.gamma_E, I2, atol=1e-14)
        assert reconstruction_residual(c, nf) < 1e-15

    def test_rotated_single_mode(self):
        R = random_orthogonal_symplectic(1, 4).matrix
        c = sandwich(additive_channel([0.3], 2 * I2), R, R.T)
        nf = compute_normal_form(c)
        np.testing.assert_allclose(nf.lam, [0.3], atol=1e-12)
        assert reconstruction_residual(c, nf) <= 1e-8

    def test_not_dilatable(self):
        with pytest.raises(NotDilatableError):
            compute_normal_form(GaussianChannel(I2, I2))


class TestReconstruct:
    def test_unit_transmissivities_give_identity(self):
        G = random_orthogonal_symplectic(2, 1)
        nf = NormalForm(G, OrthogonalSymplectic(G.matrix.T, 2), np.ones(2),
                        random_state(2, squeezed=True, seed=2).gamma)
        c = reconstruct(nf)
        np.testing.assert_allclose(c.X, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(c.Y, np.zeros((4, 4)), atol=1e-12)

    def test_zero_transmissivities(self):
        gamma = random_state(2, squeezed=True, seed=3).gamma
        eye = OrthogonalSymplectic(np.eye(4), 2)
        c = reconstruct(NormalForm(eye, eye, np.zeros(2), gamma))
        np.testing.assert_array_equal(c.X, np.zeros((4, 4)))
        np.testing.assert_allclose(c.Y, gamma, atol=1e-15)

    def test_inconsistent_sizes(self):
        eye = OrthogonalSymplectic(np.eye(4), 2)
        with pytest.raises(ValueError):
            reconstruct(NormalForm(eye, eye, np.ones(1), I2))


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3), l=st.integers(1, 3))
    def test_round_trip_and_factor_validity(self, seed, n, l):
        c, _ = random_dilatable_channel(n, l, seed=seed)
        nf = compute_normal_form(c)
        assert reconstruction_residual(c, nf) <= 1e-8
        assert is_orthogonal_symplectic(nf.G).ok and is_orthogonal_symplectic(nf.F).ok
        assert np.all((0 <= nf.lam) & (nf.lam <= 1))
        assert np.all(np.diff(nf.lam) <= 0)
        assert validate_state(GaussianState.from_covariance(nf.gamma_E))
        assert validate_channel(nf.core())

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
    def test_transmissivities_are_gauge_invariant(self, seed, n):
        rng = np.random.default_rng(seed)
        c, _ = random_dilatable_channel(n, int(rng.integers(1, 4)), seed=rng)
        V = random_orthogonal_symplectic(n, rng).matrix
        W = random_orthogonal_symplectic(n, rng).matrix
        rotated = compose(unitary_channel(V), compose(c, unitary_channel(W)))
        lam = np.sort(compute_normal_form(c).lam)
        np.testing.assert_allclose(np.sort(compute_normal_form(rotated).lam), lam, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3),
           lam=st.floats(0.0, 1.0), passive=st.booleans())
    def test_equal_transmissivities_recovered(self, seed, n, lam, passive):
        rng = np.random.default_rng(seed)
        gamma_E = random_state(n, squeezed=not passive, seed=rng).gamma
        G = random_orthogonal_symplectic(n, rng).matrix
        F = random_orthogonal_symplectic(n, rng).matrix
        c = sandwich(additive_channel([lam] * n, gamma_E), G, F)
        nf = compute_normal_form(c)
        np.testing.assert_allclose(nf.lam, np.full(n, lam), atol=1e-9)
        assert reconstruction_residual(c, nf) <= 1e-8

    def test_planted_heterogeneous(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            n = int(rng.integers(1, 4))
            lam = rng.random(n)
            G = random_orthogonal_symplectic(n, rng).matrix
            F = random_orthogonal_symplectic(n, rng).matrix
            c = sandwich(additive_channel(lam, random_state(n, True, rng).gamma), G, F)
            nf = compute_normal_form(c)
            np.testing.assert_allclose(nf.lam, np.sort(lam)[::-1], atol=1e-9)
