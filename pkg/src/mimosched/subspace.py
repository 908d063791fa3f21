"""Subspace geometry over complex matrices.

Orthonormal range and null-space bases, principal angles, and the
angle-derived similarity measures (geometrical angle, chordal distance,
collinearity, intersection projectors) that the scheduling criteria are
built on.

Conventions
-----------
A subspace is represented by a 2-D complex array whose columns are an
orthonormal basis (``B.conj().T @ B == I``).  Channel matrices are
``m_r x m_t`` (one row per receive antenna), so their row spaces live in
transmit space; pass ``H.conj().T`` to range-basis routines, or use
:func:`row_space_basis`.

All functions are pure and never modify their inputs.
"""

from __future__ import annotations

import numpy as np

# Singular values below DEFAULT_RANK_TOL * s_max count as zero.
DEFAULT_RANK_TOL = 1e-10

# Orthonormality is validated looser than it is produced, so that bases
# that went through a few downstream products still pass.
_BASIS_CHECK_TOL = 1e-8

__all__ = [
    "DEFAULT_RANK_TOL",
    "orthonormal_range_basis",
    "row_space_basis",
    "null_space_basis",
    "projector",
    "principal_angles",
    "geometrical_angle_cos2",
    "geometrical_angle_cos2_det",
    "geometrical_angle_sin2",
    "chordal_distance",
    "collinearity",
    "subspace_intersection_projector",
]


def _as_matrix(m, name="matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _as_basis(b, name="basis") -> np.ndarray:
    a = _as_matrix(b, name)
    if a.shape[1] == 0 or a.shape[1] > a.shape[0]:
        raise ValueError(f"{name} has invalid dimensions {a.shape}")
    gram = a.conj().T @ a
    if np.max(np.abs(gram - np.eye(a.shape[1]))) > _BASIS_CHECK_TOL:
        raise ValueError(f"{name} columns are not orthonormal")
    return a


def orthonormal_range_basis(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``m``.

    Parameters
    ----------
    m : array_like, shape (rows, cols)
        Complex matrix; must not be (numerically) zero.
    tol : float
        Relative rank tolerance: singular values above ``tol * s_max``
        count toward the rank.

    Returns
    -------
    ndarray, shape (rows, rank)
        Columns are an orthonormal basis of ``range(m)``.  For the row
        space of a channel matrix pass ``m.conj().T``.
    """
    a = _as_matrix(m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        raise ValueError("zero subspace")
    rank = int(np.count_nonzero(s > tol * s[0]))
    return u[:, :rank]


def row_space_basis(h, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis (in transmit space) of the row space of ``h``."""
    return orthonormal_range_basis(_as_matrix(h).conj().T, tol)


def null_space_basis(m, ambient_dim: int, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of ``{x : m @ x == 0}`` in C^ambient_dim.

    A matrix with zero rows imposes no constraint and yields the full
    identity basis.  Raises if ``m`` has full column rank (empty null
    space).
    """
    if ambient_dim < 1:
        raise ValueError("ambient_dim must be >= 1")
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        a = a.reshape(-1, ambient_dim) if a.size else np.zeros((0, ambient_dim), dtype=complex)
    if a.shape[0] == 0:
        return np.eye(ambient_dim, dtype=complex)
    if a.shape[1] != ambient_dim:
        raise ValueError(f"matrix has {a.shape[1]} columns, expected {ambient_dim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    _, s, vh = np.linalg.svd(a)
    rank = int(np.count_nonzero(s > tol * s[0])) if s.size and s[0] > 0 else 0
    if rank >= ambient_dim:
        raise ValueError("empty null space")
    return vh[rank:].conj().T


def projector(basis) -> np.ndarray:
    """Orthogonal projector ``B @ B^H`` onto the span of an orthonormal basis."""
    b = _as_basis(basis)
    return b @ b.conj().T


def principal_angles(u, v) -> np.ndarray:
    """Principal angles between two subspaces, ascending, in [0, pi/2].

    Parameters
    ----------
    u, v : ndarray
        Orthonormal bases with the same ambient (row) dimension.

    Returns
    -------
    ndarray, shape (min(p, q),)
        ``arccos`` of the singular values of ``u^H v`` (clipped into
        [0, 1] before the arccos), sorted ascending.
    """
    bu = _as_basis(u, "u")
    bv = _as_basis(v, "v")
    if bu.shape[0] != bv.shape[0]:
        raise ValueError(
            f"ambient dimension mismatch: {bu.shape[0]} vs {bv.shape[0]}"
        )
    if bu.shape[1] > bv.shape[1]:
        bu, bv = bv, bu
    cos_s = np.clip(np.linalg.svd(bu.conj().T @ bv, compute_uv=False), 0.0, 1.0)
    theta = np.arccos(cos_s)  # ascending: descending cosines
    # arccos loses ~sqrt(eps) near zero angles; refine those through the
    # sines, i.e. the singular values of the projection residual.
    small = cos_s >= np.sqrt(0.5)
    if small.any():
        resid = bu - bv @ (bv.conj().T @ bu)
        sin_s = np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0)
        theta[small] = np.arcsin(sin_s[::-1][small])
    return np.sort(theta)


def _row_space_pair(hk, hj, tol):
    """Row-space bases of two channels, swapped so dim(qk) <= dim(qj)."""
    qk = row_space_basis(hk, tol)
    qj = row_space_basis(hj, tol)
    if qk.shape[0] != qj.shape[0]:
        raise ValueError("matrices act on different transmit dimensions")
    if qk.shape[1] > qj.shape[1]:
        qk, qj = qj, qk
    return qk, qj


def geometrical_angle_cos2(hk, hj, tol: float = DEFAULT_RANK_TOL) -> float:
    """Squared-cosine geometrical angle between two channel row spaces.

    Product of ``cos^2`` over all principal angles between the row
    spaces of ``hk`` and ``hj`` (the smaller-dimensional space sets the
    angle count).  1 means one row space contains the other, 0 means at
    least one orthogonal direction.
    """
    qk, qj = _row_space_pair(hk, hj, tol)
    s = np.clip(np.linalg.svd(qk.conj().T @ qj, compute_uv=False), 0.0, 1.0)
    return float(np.prod(s**2))


def geometrical_angle_cos2_det(
    hk, hj, tol: float = DEFAULT_RANK_TOL, orthonormalize: bool = True
) -> float:
    """Determinant form of the squared-cosine geometrical angle.

    Evaluates ``det(M M^H) / det(hk hk^H)`` with ``M = hk @ hj'^H``.
    With ``orthonormalize=True`` (default) the rows of ``hj`` are first
    replaced by an orthonormal basis of its row space, which makes the
    ratio equal to :func:`geometrical_angle_cos2`.  The raw form
    (``orthonormalize=False``) mixes in the singular values of ``hj``
    and is provided for comparison only.  Requires ``hk`` of full row
    rank and ``rank(hk) <= rank(hj)`` (inputs are swapped otherwise).
    """
    a = _as_matrix(hk, "hk")
    b = _as_matrix(hj, "hj")
    ra = int(np.linalg.matrix_rank(a, tol=tol * np.linalg.norm(a, 2)))
    rb = int(np.linalg.matrix_rank(b, tol=tol * np.linalg.norm(b, 2)))
    if ra > rb:
        a, b = b, a
    if orthonormalize:
        b = row_space_basis(b, tol).conj().T
    m = a @ b.conj().T
    num = np.linalg.det(m @ m.conj().T).real
    den = np.linalg.det(a @ a.conj().T).real
    if den <= 0:
        raise ValueError("hk must have full row rank")
    return float(num / den)


def geometrical_angle_sin2(hk, hj, tol: float = DEFAULT_RANK_TOL) -> float:
    """Squared-sine geometrical angle: product of ``sin^2`` over all
    principal angles between the row spaces (0 for nested spans, 1 for
    orthogonal ones)."""
    qk, qj = _row_space_pair(hk, hj, tol)
    s = np.clip(np.linalg.svd(qk.conj().T @ qj, compute_uv=False), 0.0, 1.0)
    return float(np.prod(1.0 - s**2))


def chordal_distance(u, v) -> float:
    """Chordal distance ``sqrt(sum sin^2 theta_i)`` between two subspaces.

    Equals ``||P_u - P_v||_F / sqrt(2)`` when the subspaces have equal
    dimension.  Takes orthonormal bases with a common ambient dimension.
    """
    bu = _as_basis(u, "u")
    bv = _as_basis(v, "v")
    if bu.shape[0] != bv.shape[0]:
        raise ValueError("ambient dimension mismatch")
    s = np.clip(np.linalg.svd(bu.conj().T @ bv, compute_uv=False), 0.0, 1.0)
    return float(np.sqrt(np.sum(1.0 - s**2)))


def collinearity(ma, mb) -> float:
    """Normalized trace inner product ``|tr(ma mb^H)| / (||ma|| ||mb||)``.

    A similarity score in [0, 1]; requires identical shapes.  For
    channels with different antenna counts compare row-space projectors
    instead (see the scheduling criteria).
    """
    a = _as_matrix(ma, "ma")
    b = _as_matrix(mb, "mb")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero matrix")
    return float(abs(np.trace(a @ b.conj().T)) / (na * nb))


def subspace_intersection_projector(a, b, kappa: int = 1) -> np.ndarray:
    """Alternating-projection approximation of the intersection projector.

    Returns ``(P_a P_b P_a)^kappa``, which converges to the orthogonal
    projector onto ``span(a) ∩ span(b)`` as ``kappa`` grows.  The result
    is Hermitian with eigenvalues in [0, 1] for any ``kappa >= 1``.
    """
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    pa = projector(a)
    pb = projector(b)
    step = pa @ pb @ pa
    return np.linalg.matrix_power(step, kappa)
