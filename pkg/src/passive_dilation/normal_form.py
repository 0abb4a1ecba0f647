"""Normal form of passively dilatable channels.

Every passively dilatable channel factors as

    Phi = Phi_{G^T, 0} ∘ A_{lam, gamma_E~} ∘ Phi_{F^T, 0}

with ``F, G`` passive (orthogonal symplectic) and ``A`` the additive channel
that mixes mode ``i`` with environment mode ``i`` on a beamsplitter of
transmissivity ``lam_i``.
"""

from dataclasses import dataclass

import numpy as np

from .dilation import NotDilatableError, check_dilatable, construct_dilation
from .gaussian import GaussianChannel, additive_channel, compose, unitary_channel
from .numerics import DEFAULT_TOL, Tolerance, max_norm
from .symplectic import OrthogonalSymplectic, phi_iso, phi_unblock


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Passive output/input rotations ``G``, ``F``, transmissivities and environment state."""

    G: OrthogonalSymplectic
    F: OrthogonalSymplectic
    lam: np.ndarray
    gamma_E: np.ndarray

    @property
    def n(self):
        return self.lam.size

    def core(self, tol: Tolerance = DEFAULT_TOL) -> GaussianChannel:
        """The additive beamsplitter channel in the middle of the factorisation."""
        return additive_channel(self.lam, self.gamma_E, tol)


def compute_normal_form(c: GaussianChannel, tol: Tolerance = DEFAULT_TOL) -> NormalForm:
    """Factor ``c`` into passive unitaries around an additive noise channel.

    ``X`` is written as the image of the complex matrix ``X1 + i X2``; its SVD
    ``D = g (X1 + i X2) f`` yields ``G = phi(g)``, ``F = phi(f)`` and
    ``lam = D**2`` (descending). The environment state of the ``l = n``
    dilation is rotated to ``G gamma_E G^T``.

    Raises:
        NotDilatableError: if ``c`` is not passively dilatable.
        ValueError: if a transmissivity exceeds one beyond tolerance.
    """
    n = c.n
    report = check_dilatable(c, n, tol)
    if not report.overall(n):
        raise NotDilatableError(report, n)
    dil = construct_dilation(c, n, tol)

    x, _ = phi_unblock(c.X)
    P, D, Qh = np.linalg.svd(x)
    lam = D ** 2
    if np.any(lam > 1.0 + tol.bound(1.0)):
        raise ValueError(f"transmissivity above one: {lam.max():.12g}")
    lam = np.clip(lam, 0.0, 1.0)

    G = phi_iso(P.conj().T)
    F = phi_iso(Qh.conj().T)
    gamma_E = G.matrix @ dil.gamma_E @ G.matrix.T
    return NormalForm(G, F, lam, 0.5 * (gamma_E + gamma_E.T))


def reconstruct(nf: NormalForm, tol: Tolerance = DEFAULT_TOL) -> GaussianChannel:
    """Compose ``Phi_{G^T,0} ∘ core ∘ Phi_{F^T,0}`` back into a single channel."""
    if nf.G.matrix.shape != (2 * nf.n,) * 2 or nf.F.matrix.shape != (2 * nf.n,) * 2:
        raise ValueError("normal form factors have inconsistent sizes")
    inner = compose(nf.core(tol), unitary_channel(nf.F.T, tol))
    return compose(unitary_channel(nf.G.T, tol), inner)


def reconstruction_residual(c: GaussianChannel, nf: NormalForm, tol: Tolerance = DEFAULT_TOL) -> float:
    """Max-norm distance between ``c`` and the channel rebuilt from ``nf``."""
    r = reconstruct(nf, tol)
    return max(max_norm(r.X - c.X), max_norm(r.Y - c.Y))
