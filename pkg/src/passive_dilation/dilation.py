"""Passive dilations of Gaussian channels.

A passive dilation of ``(X, Y)`` with ``l`` environment modes is an
orthogonal symplectic ``S = [[s1, s2], [s3, s4]]`` on ``n + l`` modes and an
environment covariance ``gamma_E`` with

    s1 = X,   s2 s2^T = 1 - X X^T,   s2 sigma s2^T = sigma - X sigma X^T,
    s2 gamma_E s2^T = Y.

Such a dilation exists iff ``1 - X X^T >= 0``, ``[X, sigma] = 0``,
``ker Y = ker(1 - X X^T)`` and ``2 l >= rank(1 - X X^T)``.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .gaussian import GaussianChannel, random_state, validate_channel
from .numerics import (
    DEFAULT_TOL,
    CheckResult,
    Tolerance,
    is_psd_hermitian_embedding,
    kernel_projector,
    max_norm,
    numerical_rank,
    pseudo_inverse,
    sqrt_psd,
)
from .symplectic import (
    OrthogonalSymplectic,
    blocked_direct_sum,
    extend_to_orthogonal_symplectic,
    is_orthogonal_symplectic,
    phi_block,
    phi_inverse,
    phi_iso,
    phi_unblock,
    random_orthogonal_symplectic,
    split_form,
    standard_form,
)

CONDITIONS = ("psd_ok", "commutes_ok", "kernel_ok")


def _sym(A):
    return 0.5 * (A + A.T)


def noise_operator(X) -> np.ndarray:
    """``1 - X X^T``, the Gram matrix every ``s2`` has to reproduce."""
    X = np.asarray(X, dtype=float)
    return _sym(np.eye(X.shape[0]) - X @ X.T)


@dataclass
class DilatabilityReport:
    """Outcome of the dilatability test for one channel.

    ``min_modes`` is half the numerical rank of ``1 - X X^T``; ``modes`` is
    the environment size that was queried (``None`` means "any").
    """

    psd_ok: bool
    commutes_ok: bool
    kernel_ok: bool
    rank_noise: int
    rank_Y: int
    modes: Optional[int] = None
    residuals: dict = field(default_factory=dict)

    @property
    def min_modes(self) -> int:
        return (self.rank_noise + 1) // 2

    def failing(self, l: Optional[int] = None) -> list:
        failed = [name for name in CONDITIONS if not getattr(self, name)]
        l = self.modes if l is None else l
        if l is not None and 2 * l < self.rank_noise:
            failed.append("modes_ok")
        return failed

    def overall(self, l: Optional[int] = None) -> bool:
        return not self.failing(l)

    def __bool__(self):
        return self.overall()


class NotDilatableError(ValueError):
    """Raised when a channel has no passive dilation of the requested size."""

    def __init__(self, report: DilatabilityReport, l: Optional[int] = None):
        self.report = report
        failed = ", ".join(report.failing(l))
        where = f" with {l} environment modes" if l is not None else ""
        super().__init__(f"channel is not passively dilatable{where} (failed: {failed})")


def check_dilatable(c: GaussianChannel, l: Optional[int] = None,
                    tol: Tolerance = DEFAULT_TOL) -> DilatabilityReport:
    """Evaluate the passive dilatability conditions for ``c``.

    Kernel equality is decided by equal numerical ranks together with small
    cross residuals ``||P_ker(1 - XX^T) Y||`` and ``||P_ker(Y) (1 - XX^T)||``.
    The residuals are compared against ``sqrt(tol.rel)`` times the matrix
    scale, since a near-kernel direction at the rank threshold ``eps`` leaks
    ``O(sqrt(eps))``.
    """
    valid = validate_channel(c, tol)
    if not valid:
        raise ValueError(f"invalid channel: {valid.message}")
    X, Y = c.X, _sym(c.Y)
    sigma = standard_form(c.n)
    noise = noise_operator(X)

    w = np.linalg.eigvalsh(noise)
    noise_scale = max(1.0, float(np.max(np.abs(w))))
    psd_ok = bool(w[0] >= -tol.bound(noise_scale))

    comm = max_norm(X @ sigma - sigma @ X)
    commutes_ok = comm <= tol.bound(max(1.0, max_norm(X)))

    rank_noise = numerical_rank(noise, tol)
    rank_Y = numerical_rank(Y, tol)
    leak_Y = max_norm(kernel_projector(noise, tol) @ Y)
    leak_noise = max_norm(kernel_projector(Y, tol) @ noise)
    loose = Tolerance(np.sqrt(tol.rel), tol.abs)
    kernel_ok = (rank_noise == rank_Y
                 and leak_Y <= loose.bound(max_norm(Y))
                 and leak_noise <= loose.bound(max_norm(noise)))

    residuals = {
        "min_eigenvalue_noise": float(w[0]),
        "commutator_X": comm,
        "kernel_leak_Y": leak_Y,
        "kernel_leak_noise": leak_noise,
    }
    return DilatabilityReport(psd_ok, commutes_ok, bool(kernel_ok), rank_noise, rank_Y, l, residuals)


def minimal_modes(c: GaussianChannel, tol: Tolerance = DEFAULT_TOL) -> int:
    """Fewest environment modes of any passive dilation: half the rank of ``Y``."""
    report = check_dilatable(c, tol=tol)
    if not report.overall():
        raise NotDilatableError(report)
    return report.rank_Y // 2


@dataclass(frozen=True, eq=False)
class PassiveDilation:
    """Orthogonal symplectic ``S`` on ``n + l`` modes and environment covariance ``gamma_E``."""

    S: OrthogonalSymplectic
    gamma_E: np.ndarray

    def __post_init__(self):
        g = np.array(self.gamma_E, dtype=float).reshape(2 * self.S.l, 2 * self.S.l)
        g.setflags(write=False)
        object.__setattr__(self, "gamma_E", g)

    @property
    def n(self):
        return self.S.n

    @property
    def l(self):
        return self.S.l

    @property
    def s1(self):
        return self.S.s1

    @property
    def s2(self):
        return self.S.s2


def environment_covariance(s2, Y, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``s2^+ Y s2^+T + P_ker(s2)``: solves ``s2 gamma_E s2^T = Y`` with a valid state."""
    P = pseudo_inverse(s2, tol)
    return _sym(P @ Y @ P.T + kernel_projector(s2, tol))


def _pad_environment(S: OrthogonalSymplectic, gamma_E, extra: int) -> PassiveDilation:
    # extra environment modes in vacuum, untouched by the unitary
    U = phi_inverse(S)
    m = U.shape[0]
    padded = np.eye(m + extra, dtype=complex)
    padded[:m, :m] = U
    return PassiveDilation(phi_iso(padded, S.n), blocked_direct_sum(gamma_E, np.eye(2 * extra)))


def _compressed_root(root, r: int) -> np.ndarray:
    # Diagonalise the Hermitian image mu + i nu of the root and keep the
    # columns of root @ o^T that are not identically zero.
    h, _ = phi_unblock(root)
    h = 0.5 * (h + h.conj().T)
    w, W = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")[:r]
    W = W[:, order]
    for col in W.T:
        k = int(np.argmax(np.abs(col) > 1e-8))
        col *= np.exp(-1j * np.angle(col[k]))
    return phi_block(W * np.clip(w[order], 0.0, None))


def construct_dilation(c: GaussianChannel, l: int, tol: Tolerance = DEFAULT_TOL) -> PassiveDilation:
    """Build a passive dilation of ``c`` with ``l`` environment modes.

    ``l == n`` uses ``s2 = (1 - XX^T)^{1/2}``. ``l > n`` pads that dilation
    with vacuum modes. ``l < n`` diagonalises the square root as a Hermitian
    ``n x n`` matrix, keeps its ``2r`` nonzero columns (``2r`` the rank of
    ``1 - XX^T``) and pads with ``l - r`` vacuum modes if needed.

    Raises:
        NotDilatableError: if the dilatability conditions fail for ``l``.
    """
    if l < 0:
        raise ValueError("number of environment modes must be nonnegative")
    report = check_dilatable(c, l, tol)
    if not report.overall(l):
        raise NotDilatableError(report, l)
    n, X, Y = c.n, c.X, _sym(c.Y)
    root = sqrt_psd(noise_operator(X), tol, truncate=True)

    if l >= n:
        s2 = root
        extra = l - n
    else:
        r = report.rank_noise // 2
        s2 = _compressed_root(root, r)
        extra = l - r
    gamma_E = environment_covariance(s2, Y, tol)
    S = extend_to_orthogonal_symplectic(X, s2, Tolerance(max(tol.rel, 1e-8), tol.abs))
    if extra:
        return _pad_environment(S, gamma_E, extra)
    return PassiveDilation(S, gamma_E)


def blocked_direct_sum_split(gamma, gamma_E) -> np.ndarray:
    """``gamma ⊕ gamma_E`` in per-subsystem blocked ordering."""
    a, b = gamma.shape[0], gamma_E.shape[0]
    out = np.zeros((a + b, a + b))
    out[:a, :a] = gamma
    out[a:, a:] = gamma_E
    return out


def verify_dilation(c: GaussianChannel, dil: PassiveDilation, tol: Tolerance = DEFAULT_TOL,
                    samples: int = 5, seed=0) -> CheckResult:
    """Check every defining relation of a passive dilation and report residuals.

    Besides the block equations this checks membership of ``S``, validity of
    ``gamma_E`` and the covariance action on ``samples`` random states. A
    failing verification returns a false result; only shape mismatches raise.
    """
    n, l = dil.n, dil.l
    if c.n != n:
        raise ValueError(f"dilation is for {n} system modes, channel has {c.n}")
    X, Y = c.X, c.Y
    S = dil.S.matrix
    s1, s2, g = dil.s1, dil.s2, dil.gamma_E
    sigma = standard_form(n)
    sigma_E = split_form(0, l)
    noise = noise_operator(X)

    res = {"s1": min(max_norm(s1 - X), max_norm(s1 + X))}
    res["symplectic_eq"] = max_norm(s2 @ sigma_E @ s2.T - (sigma - X @ sigma @ X.T))
    res["orthogonal_eq"] = max_norm(s2 @ s2.T - noise)
    res["noise_eq"] = max_norm(s2 @ g @ s2.T - Y)
    member = is_orthogonal_symplectic(dil.S, tol)
    res["orthogonality"] = member.residuals["orthogonality"]
    res["symplecticity"] = member.residuals["symplecticity"]

    env_ok = True
    if l:
        env_sym = max_norm(g - g.T)
        env_ok = env_sym <= tol.bound(max_norm(g))
        if env_ok:
            env = is_psd_hermitian_embedding(_sym(g), sigma_E, tol)
            env_ok = env.ok
            res["env_min_eigenvalue"] = env.residuals["min_eigenvalue"]

    rng = np.random.default_rng(seed)
    action = 0.0
    for _ in range(samples):
        gamma = random_state(n, squeezed=True, seed=rng).gamma
        expected = X @ gamma @ X.T + Y
        got = (S @ blocked_direct_sum_split(gamma, g) @ S.T)[: 2 * n, : 2 * n]
        action = max(action, max_norm(got - expected) / max(1.0, max_norm(expected)))
    res["action"] = action

    scale_Y = max(1.0, max_norm(Y))
    bounds = {
        "s1": tol.bound(1.0),
        "symplectic_eq": tol.bound(1.0),
        "orthogonal_eq": tol.bound(1.0),
        "noise_eq": tol.bound(scale_Y),
        "orthogonality": tol.bound(1.0),
        "symplecticity": tol.bound(1.0),
        "action": tol.bound(1.0),
    }
    failed = [k for k, b in bounds.items() if res[k] > b]
    if not env_ok:
        failed.append("environment_state")
    return CheckResult(not failed, res, "ok" if not failed else "failed: " + ", ".join(failed))


def relate_minimal_dilations(d1: PassiveDilation, d2: PassiveDilation,
                             tol: Tolerance = DEFAULT_TOL) -> OrthogonalSymplectic:
    """Environment rotation ``o = s2^+ s2'`` linking two minimal dilations.

    On return ``s2' = s2 o`` and ``gamma_E' = o^T gamma_E o``.

    Raises:
        ValueError: if either dilation is not minimal (``s2`` not injective)
            or the two dilate different channels.
    """
    if (d1.n, d1.l) != (d2.n, d2.l):
        raise ValueError("dilations have different numbers of modes")
    l = d1.l
    for d in (d1, d2):
        if numerical_rank(d.s2, tol) != 2 * l:
            raise ValueError("dilation is not minimal: s2 is not injective")
    same = Tolerance(max(tol.rel, 1e-8), tol.abs)
    Y1 = d1.s2 @ d1.gamma_E @ d1.s2.T
    Y2 = d2.s2 @ d2.gamma_E @ d2.s2.T
    if (max_norm(d1.s1 - d2.s1) > same.bound(1.0)
            or max_norm(Y1 - Y2) > same.bound(max(1.0, max_norm(Y1)))):
        raise ValueError("dilations describe different channels")
    if l == 0:
        return OrthogonalSymplectic(np.zeros((0, 0)), 0)
    o = pseudo_inverse(d1.s2, tol) @ d2.s2
    check = is_orthogonal_symplectic(o, same)
    if not check:
        raise ValueError(f"recovered environment map is not orthogonal symplectic ({check.message})")
    return OrthogonalSymplectic(o, l)


def is_passive_channel(c: GaussianChannel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``c`` is passive, i.e. ``[Y, sigma] = 0`` for a passively dilatable channel."""
    report = check_dilatable(c, tol=tol)
    if not report.overall():
        raise NotDilatableError(report)
    sigma = standard_form(c.n)
    return max_norm(c.Y @ sigma - sigma @ c.Y) <= tol.bound(max(1.0, max_norm(c.Y)))


def random_dilatable_channel(n: int, l: int, passive_env: bool = False, seed=None):
    """Random channel together with the dilation it was built from.

    Draws ``S`` orthogonal symplectic on ``n + l`` modes and an environment
    state, then sets ``X = s1`` and ``Y = s2 gamma_E s2^T``.
    """
    if n < 1 or l < 1:
        raise ValueError("n and l must be positive")
    rng = np.random.default_rng(seed)
    S = random_orthogonal_symplectic(n + l, rng, n)
    gamma_E = random_state(l, squeezed=not passive_env, seed=rng).gamma
    Y = _sym(S.s2 @ gamma_E @ S.s2.T)
    return GaussianChannel(S.s1.copy(), Y), PassiveDilation(S, gamma_E)
