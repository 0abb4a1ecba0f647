r"""Symplectic forms, mode orderings and the orthogonal symplectic group.

Matrices are kept in *blocked* ordering internally: ``(Q_1..Q_m, P_1..P_m)``.
When a system of ``n`` modes is joined with an environment of ``l`` modes the
ordering is blocked per subsystem, ``(Q_sys, P_sys, Q_env, P_env)``, so the
symplectic form is :math:`\sigma_{2n} \oplus \sigma_{2l}`. Interleaved
ordering ``(Q_1, P_1, Q_2, P_2, ...)`` only appears at I/O boundaries.

The group :math:`Sp(2m) \cap O(2m)` is handled through its isomorphism with
:math:`U(m)`, which maps a unitary ``u`` to ``[[Re u, Im u], [-Im u, Re u]]``
blockwise.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from .numerics import DEFAULT_TOL, CheckResult, Tolerance, max_norm


class ModeOrdering(str, Enum):
    BLOCKED = "blocked"
    INTERLEAVED = "interleaved"


def standard_form(m: int, ordering=ModeOrdering.BLOCKED) -> np.ndarray:
    """The standard symplectic form on ``m`` modes in the requested ordering."""
    if m < 1:
        raise ValueError("number of modes must be positive")
    ordering = ModeOrdering(ordering)
    if ordering is ModeOrdering.INTERLEAVED:
        return np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    I, Z = np.eye(m), np.zeros((m, m))
    return np.block([[Z, I], [-I, Z]])


def split_form(n: int, l: int) -> np.ndarray:
    """Symplectic form of a blocked system of ``n`` modes plus ``l`` environment modes."""
    blocks = [standard_form(k) for k in (n, l) if k > 0]
    return block_diag(*blocks) if blocks else np.zeros((0, 0))


def _labels(m, ordering, split=None):
    # (mode, quadrature) label of every coordinate position
    if ModeOrdering(ordering) is ModeOrdering.INTERLEAVED:
        return [(k, q) for k in range(m) for q in (0, 1)]
    parts = [(0, m)] if split is None else [(0, split[0]), (split[0], m)]
    return [(k, q) for lo, hi in parts for q in (0, 1) for k in range(lo, hi)]


def permutation(m: int, source, target, split=None) -> np.ndarray:
    """Permutation matrix ``P`` with ``v_target = P @ v_source``."""
    src = {lab: j for j, lab in enumerate(_labels(m, source, split))}
    P = np.zeros((2 * m, 2 * m))
    for i, lab in enumerate(_labels(m, target, split)):
        P[i, src[lab]] = 1.0
    return P


def reorder(M, source, target, split=None) -> np.ndarray:
    """Conjugate a square matrix from one mode ordering to another.

    ``split=(n, l)`` selects the per-subsystem blocked ordering for the
    ``blocked`` side.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ValueError("reorder needs a square matrix of even dimension")
    m = M.shape[0] // 2
    if split is not None and sum(split) != m:
        raise ValueError("split does not match the matrix size")
    P = permutation(m, source, target, split)
    return P @ M @ P.T


def phi_block(u) -> np.ndarray:
    """Real ``2a x 2b`` image ``[[Re u, Im u], [-Im u, Re u]]`` of a complex ``a x b`` block."""
    u = np.asarray(u, dtype=complex)
    return np.block([[u.real, u.imag], [-u.imag, u.real]])


def phi_unblock(s):
    """Invert :func:`phi_block`.

    Returns the complex block and the max-norm distance of ``s`` from the
    commutant shape ``[[A, B], [-B, A]]``.
    """
    s = np.asarray(s, dtype=float)
    a, b = s.shape[0] // 2, s.shape[1] // 2
    if s.shape != (2 * a, 2 * b):
        raise ValueError("block must have even dimensions")
    re = 0.5 * (s[:a, :b] + s[a:, b:])
    im = 0.5 * (s[:a, b:] - s[a:, :b])
    residual = max_norm(s - phi_block(re + 1j * im))
    return re + 1j * im, residual


@dataclass(frozen=True, eq=False)
class BlockForm:
    """A matrix of the shape ``[[A, B], [-B, A]]``, i.e. one commuting with sigma."""

    A: np.ndarray
    B: np.ndarray

    @property
    def matrix(self):
        return np.block([[self.A, self.B], [-self.B, self.A]])

    @property
    def complex(self):
        return self.A + 1j * self.B


def block_form_check(M, tol: Tolerance = DEFAULT_TOL) -> Optional[BlockForm]:
    """Return ``(A, B)`` if ``M`` commutes with the blocked sigma, else ``None``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ValueError("block_form_check needs a square matrix of even dimension")
    sigma = standard_form(M.shape[0] // 2)
    if max_norm(M @ sigma - sigma @ M) > tol.bound(max_norm(M)):
        return None
    u, _ = phi_unblock(M)
    return BlockForm(u.real.copy(), u.imag.copy())


@dataclass(frozen=True, eq=False)
class OrthogonalSymplectic:
    """A matrix in ``Sp(2m) ∩ O(2m)``, optionally split into system and environment.

    With ``l > 0`` the matrix is in per-subsystem blocked ordering and the
    blocks ``s1 .. s4`` have shapes ``2n x 2n``, ``2n x 2l``, ``2l x 2n`` and
    ``2l x 2l``.
    """

    matrix: np.ndarray
    n: int
    l: int = 0
    ordering: ModeOrdering = ModeOrdering.BLOCKED

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.shape != (2 * (self.n + self.l),) * 2:
            raise ValueError(f"matrix shape {M.shape} does not match split ({self.n}, {self.l})")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "ordering", ModeOrdering(self.ordering))

    @property
    def modes(self):
        return self.n + self.l

    @property
    def form(self):
        if self.ordering is ModeOrdering.INTERLEAVED:
            return standard_form(self.modes, ModeOrdering.INTERLEAVED)
        return split_form(self.n, self.l)

    @property
    def s1(self):
        return self.matrix[: 2 * self.n, : 2 * self.n]

    @property
    def s2(self):
        return self.matrix[: 2 * self.n, 2 * self.n :]

    @property
    def s3(self):
        return self.matrix[2 * self.n :, : 2 * self.n]

    @property
    def s4(self):
        return self.matrix[2 * self.n :, 2 * self.n :]

    @property
    def T(self):
        return OrthogonalSymplectic(self.matrix.T, self.n, self.l, self.ordering)

    def __matmul__(self, other):
        if isinstance(other, OrthogonalSymplectic):
            if (other.n, other.l, other.ordering) != (self.n, self.l, self.ordering):
                raise ValueError("cannot multiply matrices with different splits")
            return OrthogonalSymplectic(self.matrix @ other.matrix, self.n, self.l, self.ordering)
        return self.matrix @ np.asarray(other)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _check_unitary(U, tol):
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError("unitary must be a square matrix")
    if max_norm(U @ U.conj().T - np.eye(U.shape[0])) > tol.bound(1.0):
        raise ValueError("matrix is not unitary")
    return U


def phi_iso(U, n: Optional[int] = None, tol: Tolerance = DEFAULT_TOL) -> OrthogonalSymplectic:
    """Map a unitary on ``n + l`` modes to its orthogonal symplectic matrix.

    The first ``n`` rows/columns of ``U`` belong to the system. The result is
    in per-subsystem blocked ordering with split ``(n, l)``.
    """
    U = _check_unitary(U, tol)
    m = U.shape[0]
    n = m if n is None else n
    if not 0 <= n <= m:
        raise ValueError("system size must lie between 0 and the number of modes")
    u1, u2, u3, u4 = U[:n, :n], U[:n, n:], U[n:, :n], U[n:, n:]
    S = np.block([[phi_block(u1), phi_block(u2)], [phi_block(u3), phi_block(u4)]])
    return OrthogonalSymplectic(S, n, m - n)


def phi_inverse(S, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """The unique unitary ``U`` with ``phi_iso(U) == S``.

    ``S`` may be an :class:`OrthogonalSymplectic` (its split is honoured) or a
    plain blocked array.
    """
    if isinstance(S, OrthogonalSymplectic):
        if S.ordering is not ModeOrdering.BLOCKED:
            raise ValueError("phi_inverse expects blocked ordering")
        n, M = S.n, S.matrix
    else:
        M = np.asarray(S, dtype=float)
        n = M.shape[0] // 2
    m = M.shape[0] // 2
    rows = [(0, 2 * n), (2 * n, 2 * m)]
    U = np.zeros((m, m), dtype=complex)
    worst = 0.0
    for (r0, r1), (i0, i1) in zip(rows, [(0, n), (n, m)]):
        for (c0, c1), (j0, j1) in zip(rows, [(0, n), (n, m)]):
            u, res = phi_unblock(M[r0:r1, c0:c1])
            U[i0:i1, j0:j1] = u
            worst = max(worst, res)
    if worst > tol.bound(max(1.0, max_norm(M))):
        raise ValueError(f"matrix is not in the image of the isomorphism (residual {worst:.3e})")
    return _check_unitary(U, tol)


def is_orthogonal_symplectic(M, tol: Tolerance = DEFAULT_TOL, split=None,
                             ordering=ModeOrdering.BLOCKED) -> CheckResult:
    """Membership test for ``Sp ∩ O`` with per-condition residuals.

    ``split=(n, l)`` uses the form ``sigma_2n ⊕ sigma_2l``. When both
    conditions hold the commutator with sigma is reported as well.
    """
    if isinstance(M, OrthogonalSymplectic):
        split, ordering, M = (M.n, M.l), M.ordering, M.matrix
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ValueError("membership test needs a square matrix of even dimension")
    m = M.shape[0] // 2
    if ModeOrdering(ordering) is ModeOrdering.INTERLEAVED:
        sigma = standard_form(m, ModeOrdering.INTERLEAVED)
    elif split is not None:
        sigma = split_form(*split)
    else:
        sigma = standard_form(m)
    bound = tol.bound(max(1.0, max_norm(M) ** 2))
    res = {
        "orthogonality": max_norm(M @ M.T - np.eye(2 * m)),
        "symplecticity": max_norm(M @ sigma @ M.T - sigma),
        "commutator": max_norm(M @ sigma - sigma @ M),
    }
    failed = [k for k in ("orthogonality", "symplecticity") if res[k] > bound]
    msg = "violated: " + ", ".join(failed) if failed else "ok"
    return CheckResult(not failed, res, msg)


def extend_to_orthogonal_symplectic(s1, s2, tol: Tolerance = DEFAULT_TOL) -> OrthogonalSymplectic:
    """Complete the top block row ``(s1 s2)`` to an orthogonal symplectic matrix.

    The blocks are pulled back to ``V = (u1 u2)``, whose rows are orthonormal;
    the remaining rows are an orthonormal basis of the null space of ``V``
    taken from its SVD, each phase-fixed so its first significant entry is
    real and positive.
    """
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    n2 = s1.shape[0]
    if s1.shape != (n2, n2) or s2.shape[0] != n2 or n2 % 2 or s2.shape[1] % 2:
        raise ValueError("blocks must be 2n x 2n and 2n x 2l")
    n, l = n2 // 2, s2.shape[1] // 2
    sn = standard_form(n)
    sl = standard_form(l) if l else np.zeros((0, 0))
    scale = max(1.0, max_norm(s1) ** 2, max_norm(s2) ** 2)
    orth = max_norm(s1 @ s1.T + s2 @ s2.T - np.eye(n2))
    symp = max_norm(s1 @ sn @ s1.T + s2 @ sl @ s2.T - sn)
    if max(orth, symp) > tol.bound(scale):
        raise ValueError(f"blocks do not satisfy the extension conditions "
                         f"(orthogonality {orth:.3e}, symplecticity {symp:.3e})")
    u1, r1 = phi_unblock(s1)
    u2, r2 = phi_unblock(s2)
    if max(r1, r2) > tol.bound(scale):
        raise ValueError("blocks do not commute with the symplectic form")
    V = np.hstack([u1, u2])
    _, _, Qh = np.linalg.svd(V, full_matrices=True)
    W = Qh[n:].copy()
    for row in W:
        k = int(np.argmax(np.abs(row) > 1e-8))
        row *= np.exp(-1j * np.angle(row[k]))
    return phi_iso(np.vstack([V, W]), n, tol)


def relate_extensions(S, S_prime, tol: Tolerance = DEFAULT_TOL) -> OrthogonalSymplectic:
    """Environment gauge ``o`` with ``S_prime = diag(1, o) @ S``.

    Both arguments must share the top block row ``(s1 s2)``.
    """
    if (S.n, S.l) != (S_prime.n, S_prime.l):
        raise ValueError("extensions have different splits")
    n = S.n
    top = np.hstack([S.s1, S.s2]) - np.hstack([S_prime.s1, S_prime.s2])
    if max_norm(top) > tol.bound(1.0):
        raise ValueError("extensions do not share the same top block row")
    O = S_prime.matrix @ S.matrix.T
    o = O[2 * n :, 2 * n :]
    return OrthogonalSymplectic(o, S.l) if S.l else OrthogonalSymplectic(np.zeros((0, 0)), 0)


def random_unitary(m: int, seed=None) -> np.ndarray:
    """Haar-distributed ``m x m`` unitary from the QR decomposition of a complex Gaussian."""
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_orthogonal_symplectic(m: int, seed=None, n: Optional[int] = None) -> OrthogonalSymplectic:
    """Random element of ``Sp(2m) ∩ O(2m)``, split as ``(n, m - n)`` if ``n`` is given."""
    if m < 1:
        raise ValueError("number of modes must be positive")
    return phi_iso(random_unitary(m, seed), n)


def blocked_direct_sum(*mats) -> np.ndarray:
    """Direct sum of blocked matrices, again in blocked ordering."""
    sizes = [np.asarray(M).shape[0] // 2 for M in mats]
    total = sum(sizes)
    out = np.zeros((2 * total, 2 * total))
    idx, off = [], 0
    for k in sizes:
        idx.append(np.r_[off : off + k, total + off : total + off + k])
        off += k
    for M, ix in zip(mats, idx):
        out[np.ix_(ix, ix)] = M
    return out
