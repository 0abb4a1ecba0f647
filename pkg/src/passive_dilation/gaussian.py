"""Gaussian states ``(d, gamma)`` and channels ``(X, Y)`` in blocked ordering.

A channel acts on covariance matrices as ``gamma -> X gamma X^T + Y`` and on
displacements as ``d -> X d``; the channel displacement is always zero.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOL, CheckResult, Tolerance, is_psd_hermitian_embedding, max_norm
from .symplectic import (
    ModeOrdering,
    OrthogonalSymplectic,
    random_orthogonal_symplectic,
    reorder,
    standard_form,
)


def _frozen(A):
    A = np.array(A, dtype=float)
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Displacement ``d`` (length 2n) and covariance matrix ``gamma`` (2n x 2n)."""

    d: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        d, g = _frozen(self.d), _frozen(self.gamma)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 or d.shape != (g.shape[0],):
            raise ValueError(f"inconsistent state shapes d{d.shape}, gamma{g.shape}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_covariance(cls, gamma):
        gamma = np.asarray(gamma, dtype=float)
        return cls(np.zeros(gamma.shape[0]), gamma)

    @property
    def n(self):
        return self.gamma.shape[0] // 2


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """The channel ``Phi_{X,Y}`` on ``n`` modes."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X, Y = _frozen(self.X), _frozen(self.Y)
        if X.ndim != 2 or X.shape != Y.shape or X.shape[0] != X.shape[1] or X.shape[0] % 2:
            raise ValueError(f"inconsistent channel shapes X{X.shape}, Y{Y.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self):
        return self.X.shape[0] // 2

    @classmethod
    def identity(cls, n: int):
        return cls(np.eye(2 * n), np.zeros((2 * n, 2 * n)))


def _symmetry_residual(A):
    return max_norm(A - A.T)


def validate_state(s: GaussianState, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Check that ``gamma`` is symmetric and satisfies ``gamma >= i sigma``."""
    g = s.gamma
    asym = _symmetry_residual(g)
    if asym > tol.bound(max_norm(g)):
        return CheckResult(False, {"symmetry": asym}, "covariance matrix is not symmetric")
    res = is_psd_hermitian_embedding(g, standard_form(s.n), tol)
    residuals = {"symmetry": asym, "min_eigenvalue": res.residuals["min_eigenvalue"]}
    return CheckResult(res.ok, residuals, "ok" if res.ok else "uncertainty relation violated")


def validate_channel(c: GaussianChannel, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Check symmetry of ``Y`` and complete positivity ``Y >= i sigma - i X sigma X^T``."""
    X, Y = c.X, c.Y
    asym = _symmetry_residual(Y)
    if asym > tol.bound(max_norm(Y)):
        return CheckResult(False, {"symmetry": asym}, "Y is not symmetric")
    sigma = standard_form(c.n)
    anti = sigma - X @ sigma @ X.T
    anti = 0.5 * (anti - anti.T)
    res = is_psd_hermitian_embedding(0.5 * (Y + Y.T), anti, tol)
    residuals = {"symmetry": asym, "min_eigenvalue": res.residuals["min_eigenvalue"]}
    return CheckResult(res.ok, residuals, "ok" if res.ok else "not completely positive")


def apply(c: GaussianChannel, s: GaussianState) -> GaussianState:
    """Output state ``(X d, X gamma X^T + Y)``."""
    if c.n != s.n:
        raise ValueError(f"channel acts on {c.n} modes, state has {s.n}")
    gamma = c.X @ s.gamma @ c.X.T + c.Y
    return GaussianState(c.X @ s.d, 0.5 * (gamma + gamma.T))


def compose(c2: GaussianChannel, c1: GaussianChannel) -> GaussianChannel:
    """The channel ``c2 ∘ c1`` (apply ``c1`` first)."""
    if c1.n != c2.n:
        raise ValueError("channels act on different numbers of modes")
    Y = c2.X @ c1.Y @ c2.X.T + c2.Y
    return GaussianChannel(c2.X @ c1.X, 0.5 * (Y + Y.T))


def unitary_channel(S, tol: Tolerance = DEFAULT_TOL) -> GaussianChannel:
    """Gaussian unitary channel ``(S, 0)`` of a symplectic matrix.

    Orthogonality is not required: squeezers give valid, non-passive channels.
    """
    if isinstance(S, OrthogonalSymplectic):
        if S.l or S.ordering is not ModeOrdering.BLOCKED:
            raise ValueError("unitary_channel expects an unsplit blocked matrix")
        S = S.matrix
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise ValueError("symplectic matrix must be square with even dimension")
    sigma = standard_form(S.shape[0] // 2)
    if max_norm(S @ sigma @ S.T - sigma) > tol.bound(max(1.0, max_norm(S) ** 2)):
        raise ValueError("matrix is not symplectic")
    return GaussianChannel(S, np.zeros_like(S))


def beamsplitter(lam: float, ordering=ModeOrdering.INTERLEAVED) -> OrthogonalSymplectic:
    """Two-mode beamsplitter of transmissivity ``lam``.

    In interleaved ordering ``(Q1, P1, Q2, P2)`` this is
    ``[[sqrt(lam) I, sqrt(1-lam) I], [sqrt(1-lam) I, -sqrt(lam) I]]``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity {lam} outside [0, 1]")
    t, r = np.sqrt(lam), np.sqrt(1.0 - lam)
    I2 = np.eye(2)
    S = np.block([[t * I2, r * I2], [r * I2, -t * I2]])
    ordering = ModeOrdering(ordering)
    if ordering is ModeOrdering.BLOCKED:
        S = reorder(S, ModeOrdering.INTERLEAVED, ModeOrdering.BLOCKED)
    return OrthogonalSymplectic(S, 2, ordering=ordering)


def additive_channel(lam, gamma_E, tol: Tolerance = DEFAULT_TOL) -> GaussianChannel:
    """Per-mode beamsplitter mixing with an environment in state ``gamma_E``.

    ``X = diag(sqrt(lam), sqrt(lam))`` and ``Y = R gamma_E R`` with
    ``R = diag(sqrt(1 - lam), sqrt(1 - lam))``, all blocked.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if lam.ndim != 1 or np.any(lam < 0) or np.any(lam > 1):
        raise ValueError("transmissivities must lie in [0, 1]")
    gamma_E = np.asarray(gamma_E, dtype=float)
    if gamma_E.shape != (2 * lam.size,) * 2:
        raise ValueError("environment covariance does not match the number of modes")
    if not validate_state(GaussianState.from_covariance(gamma_E), tol):
        raise ValueError("environment covariance matrix is not a valid state")
    t = np.sqrt(np.concatenate([lam, lam]))
    r = np.sqrt(np.concatenate([1.0 - lam, 1.0 - lam]))
    Y = r[:, None] * gamma_E * r[None, :]
    return GaussianChannel(np.diag(t), 0.5 * (Y + Y.T))


def is_passive_state(gamma, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a covariance matrix commutes with sigma (no hidden squeezing)."""
    gamma = np.asarray(gamma, dtype=float)
    if not validate_state(GaussianState.from_covariance(gamma), tol):
        raise ValueError("not a valid covariance matrix")
    sigma = standard_form(gamma.shape[0] // 2)
    return max_norm(gamma @ sigma - sigma @ gamma) <= tol.bound(max_norm(gamma))


def random_state(n: int, squeezed: bool = False, seed=None) -> GaussianState:
    """Random valid ``n``-mode state.

    The passive variant is ``O diag(nu, nu) O^T`` with ``O`` orthogonal
    symplectic and ``nu_i`` in ``[1, 3)``; the squeezed variant additionally
    squeezes each mode by ``|r| <= 1``.
    """
    if n < 1:
        raise ValueError("number of modes must be positive")
    rng = np.random.default_rng(seed)
    O = random_orthogonal_symplectic(n, rng).matrix
    nu = 1.0 + 2.0 * rng.random(n)
    gamma = O @ np.diag(np.concatenate([nu, nu])) @ O.T
    if squeezed:
        r = rng.uniform(-1.0, 1.0, n)
        z = np.exp(np.concatenate([r, -r]))
        gamma = z[:, None] * gamma * z[None, :]
    d = rng.standard_normal(2 * n)
    return GaussianState(d, 0.5 * (gamma + gamma.T))
