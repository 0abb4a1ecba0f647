import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from passive_dilation.dilation import random_dilatable_channel
from passive_dilation.gaussian import (
    GaussianChannel,
    GaussianState,
    additive_channel,
    apply,
    beamsplitter,
    compose,
    is_passive_state,
    random_state,
    unitary_channel,
    validate_channel,
    validate_state,
)
from passive_dilation.symplectic import (
    ModeOrdering,
    is_orthogonal_symplectic,
    random_orthogonal_symplectic,
    standard_form,
)

I2 = np.eye(2)
R = np.sqrt(0.5)
SQUEEZED = np.diag([4.0, 0.25])


def state(gamma):
    return GaussianState.from_covariance(np.asarray(gamma, dtype=float))


def random_channel(rng, n):
    """Dilatable channel sandwiched between random squeezers, so not passive."""
    c, _ = random_dilatable_channel(n, int(rng.integers(1, 4)), seed=rng)
    r = rng.uniform(-0.5, 0.5, n)
    z = np.exp(np.concatenate([r, -r]))
    return compose(unitary_channel(np.diag(z)), c)


class TestValidation:
    def test_states(self):
        assert validate_state(state(I2))
        res = validate_state(state(SQUEEZED))
        assert res.ok and abs(res.residuals["min_eigenvalue"]) < 1e-15
        res = validate_state(state(0.9 * I2))
        assert not res.ok
        assert res.residuals["min_eigenvalue"] == pytest.approx(-0.1)

    def test_channels(self):
        assert validate_channel(GaussianChannel.identity(1))
        assert validate_channel(GaussianChannel(R * I2, 0.5 * I2))
        res = validate_channel(GaussianChannel(2 * I2, np.zeros((2, 2))))
        assert not res.ok
        # Y - i sigma + i X sigma X^T = 3 i sigma, spectrum {-3, 3}
        assert res.residuals["min_eigenvalue"] == pytest.approx(-3.0)

    def test_asymmetric_noise_invalid(self):
        assert not validate_channel(GaussianChannel(np.zeros((2, 2)), np.array([[1.0, 0.5], [0.0, 1.0]])))

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            GaussianState(np.zeros(3), I2)
        with pytest.raises(ValueError):
            GaussianChannel(np.eye(2), np.eye(4))
        with pytest.raises(ValueError):
            GaussianChannel(np.eye(3), np.eye(3))


class TestApplyCompose:
    def test_identity_leaves_state(self):
        s = random_state(2, squeezed=True, seed=5)
        out = apply(GaussianChannel.identity(2), s)
        np.testing.assert_array_equal(out.gamma, s.gamma)
        np.testing.assert_array_equal(out.d, s.d)

    def test_additive_on_vacuum(self):
        out = apply(additive_channel([0.5], I2), state(I2))
        np.testing.assert_allclose(out.gamma, I2, atol=1e-15)

    def test_phase_rotation(self):
        out = apply(unitary_channel(standard_form(1)), state(SQUEEZED))
        np.testing.assert_array_equal(out.gamma, np.diag([0.25, 4.0]))

    def test_displacement_transforms(self):
        s = GaussianState(np.array([1.0, 2.0]), I2)
        np.testing.assert_allclose(apply(GaussianChannel(R * I2, 0.5 * I2), s).d, [R, 2 * R])

    def test_mismatch(self):
        with pytest.raises(ValueError):
            apply(GaussianChannel.identity(2), state(I2))
        with pytest.raises(ValueError):
            compose(GaussianChannel.identity(2), GaussianChannel.identity(1))

    def test_compose_identity(self):
        c = random_channel(np.random.default_rng(0), 2)
        for d in (compose(GaussianChannel.identity(2), c), compose(c, GaussianChannel.identity(2))):
            np.testing.assert_allclose(d.X, c.X, atol=1e-15)
            np.testing.assert_allclose(d.Y, c.Y, atol=1e-15)

    def test_compose_additive_twice(self):
        a = additive_channel([0.5], I2)
        c = compose(a, a)
        np.testing.assert_allclose(c.X, 0.5 * I2, atol=1e-15)
        np.testing.assert_allclose(c.Y, 0.75 * I2, atol=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
    def test_unitaries_compose_to_product(self, seed, n):
        rng = np.random.default_rng(seed)
        S1 = random_orthogonal_symplectic(n, rng).matrix
        r = rng.uniform(-1, 1, n)
        z = np.exp(np.concatenate([r, -r]))
        S2 = random_orthogonal_symplectic(n, rng).matrix @ np.diag(z)
        c = compose(unitary_channel(S2), unitary_channel(S1))
        np.testing.assert_allclose(c.X, S2 @ S1, atol=1e-10)
        np.testing.assert_array_equal(c.Y, np.zeros_like(c.Y))

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
    def test_apply_preserves_validity(self, seed, n):
        rng = np.random.default_rng(seed)
        c = random_channel(rng, n)
        assert validate_channel(c)
        out = apply(c, random_state(n, squeezed=True, seed=rng))
        assert validate_state(out)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
    def test_compose_preserves_validity(self, seed, n):
        rng = np.random.default_rng(seed)
        assert validate_channel(compose(random_channel(rng, n), random_channel(rng, n)))


class TestUnitaryChannel:
    def test_examples(self):
        c = unitary_channel(np.eye(2))
        np.testing.assert_array_equal(c.X, I2)
        c = unitary_channel(standard_form(2))
        assert validate_channel(c)
        np.testing.assert_array_equal(c.Y, np.zeros((4, 4)))

    def test_squeezer_accepted(self):
        c = unitary_channel(np.diag([2.0, 0.5]))
        assert validate_channel(c)

    def test_non_symplectic_rejected(self):
        with pytest.raises(ValueError, match="symplectic"):
            unitary_channel(np.diag([2.0, 2.0]))


class TestBeamsplitter:
    def test_full_transmission(self):
        S = beamsplitter(1.0).matrix
        np.testing.assert_array_equal(S, np.block([[I2, 0 * I2], [0 * I2, -I2]]))

    def test_zero_transmission(self):
        S = beamsplitter(0.0).matrix
        np.testing.assert_array_equal(S, np.block([[0 * I2, I2], [I2, 0 * I2]]))

    def test_half(self):
        S = beamsplitter(0.5).matrix
        np.testing.assert_allclose(np.abs(S[S != 0]), R, atol=1e-15)
        assert is_orthogonal_symplectic(S, ordering=ModeOrdering.INTERLEAVED).ok

    def test_out_of_range(self):
        for lam in (-0.1, 1.1):
            with pytest.raises(ValueError):
                beamsplitter(lam)

    def test_random_transmissivities(self):
        for lam in np.random.default_rng(3).random(100):
            assert is_orthogonal_symplectic(beamsplitter(lam, ModeOrdering.BLOCKED)).ok
            S = beamsplitter(lam).matrix
            assert is_orthogonal_symplectic(S, ordering=ModeOrdering.INTERLEAVED).ok


class TestAdditiveChannel:
    def test_full_transmission_is_identity(self):
        for gamma_E in (I2, SQUEEZED, 3 * I2):
            c = additive_channel([1.0], gamma_E)
            np.testing.assert_array_equal(c.X, I2)
            np.testing.assert_array_equal(c.Y, np.zeros((2, 2)))

    def test_half(self):
        c = additive_channel([0.5], I2)
        np.testing.assert_allclose(c.X, R * I2, atol=1e-15)
        np.testing.assert_allclose(c.Y, 0.5 * I2, atol=1e-15)

    def test_replacer(self):
        c = additive_channel([0.0], SQUEEZED)
        np.testing.assert_array_equal(c.X, np.zeros((2, 2)))
        np.testing.assert_array_equal(c.Y, SQUEEZED)

    def test_heterogeneous_modes(self):
        gamma_E = random_state(2, squeezed=True, seed=1).gamma
        lam = np.array([0.2, 0.7])
        c = additive_channel(lam, gamma_E)
        t = np.sqrt([0.2, 0.7, 0.2, 0.7])
        r = np.sqrt([0.8, 0.3, 0.8, 0.3])
        np.testing.assert_allclose(c.X, np.diag(t))
        np.testing.assert_allclose(c.Y, np.diag(r) @ gamma_E @ np.diag(r), atol=1e-15)
        assert validate_channel(c)
        sigma = standard_form(2)
        np.testing.assert_array_equal(c.X @ sigma, sigma @ c.X)

    def test_equal_transmissivities_scale_environment(self):
        gamma_E = random_state(3, seed=2).gamma
        c = additive_channel([0.4] * 3, gamma_E)
        np.testing.assert_allclose(c.Y, 0.6 * gamma_E, atol=1e-14)

    def test_errors(self):
        with pytest.raises(ValueError):
            additive_channel([0.5], 0.5 * I2)
        with pytest.raises(ValueError):
            additive_channel([1.5], I2)
        with pytest.raises(ValueError):
            additive_channel([0.5, 0.5], I2)

    def test_all_unit_transmission_random_environment(self):
        rng = np.random.default_rng(9)
        for n in (1, 2, 3):
            c = additive_channel(np.ones(n), random_state(n, squeezed=True, seed=rng).gamma)
            np.testing.assert_array_equal(c.X, np.eye(2 * n))
            np.testing.assert_array_equal(c.Y, np.zeros((2 * n, 2 * n)))


class TestPassiveState:
    def test_examples(self):
        assert is_passive_state(3 * I2)
        assert not is_passive_state(SQUEEZED)
        Bm = np.array([[0.0, 0.5], [-0.5, 0.0]])
        gamma = np.block([[2 * I2, Bm], [-Bm, 2 * I2]])
        assert validate_state(state(gamma))
        assert is_passive_state(gamma)

    def test_invalid_rejected(self):
        with pytest.raises(ValueError):
            is_passive_state(0.5 * I2)


class TestRandomState:
    def test_passive_and_valid(self):
        for seed in range(30):
            for n in (1, 2, 3):
                s = random_state(n, seed=seed)
                assert validate_state(s) and is_passive_state(s.gamma)
                assert validate_state(random_state(n, squeezed=True, seed=seed))

    def test_squeezed_usually_not_passive(self):
        assert not all(is_passive_state(random_state(2, squeezed=True, seed=s).gamma) for s in range(10))

    def test_determinism(self):
        a, b = random_state(3, True, 42), random_state(3, True, 42)
        np.testing.assert_array_equal(a.gamma, b.gamma)
        np.testing.assert_array_equal(a.d, b.d)

    def test_rejects_zero_modes(self):
        with pytest.raises(ValueError):
            random_state(0)
