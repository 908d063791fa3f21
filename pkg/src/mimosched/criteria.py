"""User scheduling metrics.

Angle-based measures of how much a candidate's channel row space
overlaps an existing group, plus the capacity-change decomposition
(gain from the new user, loss inflicted on the incumbents) that drives
the selection-oriented criteria.  Determinant products are handled in
the log domain throughout to avoid under/overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import UserChannel
from .subspace import (
    DEFAULT_RANK_TOL,
    chordal_distance,
    collinearity,
    geometrical_angle_cos2,
    null_space_basis,
    principal_angles,
    projector,
    row_space_basis,
)

__all__ = [
    "CriterionKind",
    "DeltaCapacityReport",
    "stack_channels",
    "metric_largest_principal_angle",
    "metric_geometrical",
    "metric_grouping_oriented",
    "capacity_gain",
    "capacity_loss",
    "delta_capacity",
    "metric_selection_full",
    "metric_selection_simplified",
    "selection_simplified_sin2_form",
    "evaluate_criterion",
]


class CriterionKind(str, enum.Enum):
    LARGEST_PRINCIPAL_ANGLE = "largest-principal-angle"
    COLLINEARITY = "collinearity"
    CHORDAL = "chordal"
    GEOMETRICAL_ANGLE = "geometrical-angle"
    GROUPING_ORIENTED = "grouping-oriented"
    SELECTION_FULL = "selection-full"
    SELECTION_SIMPLIFIED = "selection-simplified"
    FROBENIUS_NORM = "frobenius-norm"
    RANDOM = "random"


@dataclass(frozen=True)
class DeltaCapacityReport:
    """Capacity change from adding a candidate to a subset.

    ``delta = c_gain - c_loss``; ``sin2_gain`` is the squared-sine
    geometrical angle between the candidate and the subset, and
    ``loss_terms`` holds (user_id, sin2 of the incumbent against the
    reduced subset, sin2 of the candidate against the reduced subset)
    per incumbent.
    """

    c_gain: float
    c_loss: float
    delta: float
    sin2_gain: float
    loss_terms: tuple[tuple[int, float, float], ...]


def stack_channels(users: Sequence[UserChannel], m_t: int | None = None) -> np.ndarray:
    """Stack member channels row-wise; empty input gives a (0, m_t) matrix."""
    if users:
        return np.vstack([u.h for u in users])
    if m_t is None:
        raise ValueError("m_t required to stack an empty group")
    return np.zeros((0, m_t), dtype=complex)


def metric_largest_principal_angle(h_k, h_interference, tol=DEFAULT_RANK_TOL) -> float:
    """Largest principal angle between the row spaces (radians; larger
    means better separated)."""
    qk = row_space_basis(h_k, tol)
    qi = row_space_basis(h_interference, tol)
    return float(principal_angles(qk, qi)[-1])


def metric_geometrical(h_k, h_j, tol=DEFAULT_RANK_TOL) -> float:
    """Squared-cosine geometrical angle between two channels (minimize)."""
    return geometrical_angle_cos2(h_k, h_j, tol)


def metric_grouping_oriented(h_k, h_interference, tol=DEFAULT_RANK_TOL) -> float:
    """Sum of cos^2 over the principal angles against the interference
    row space (minimize).

    Counts every row-space direction of ``h_k``: directions the
    interference cannot even pair with contribute cos^2(pi/2) = 0, so
    the value plus the matching sin^2 sum equals rank(h_k).
    """
    qk = row_space_basis(h_k, tol)
    qi = row_space_basis(h_interference, tol)
    return float(np.linalg.norm(qk.conj().T @ qi) ** 2)


def _log2_pos(x: float) -> float:
    return math.log2(x) if x > 0.0 else float("-inf")


def _log2_det_gram(hbar: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> float:
    """log2 det(hbar hbar^H) via singular values; -inf when rank deficient."""
    s = np.linalg.svd(hbar, compute_uv=False)
    if hbar.shape[0] > hbar.shape[1] or s.size == 0 or s.min() <= tol * s.max():
        return float("-inf")
    return float(2.0 * np.sum(np.log2(s)))


def _thin_right_basis(hbar: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(hbar, full_matrices=False)
    return vh.conj().T


def _log2_sin2_product(
    v_null: np.ndarray, v_range: np.ndarray, tol: float = DEFAULT_RANK_TOL
) -> float:
    """log2 of the product of all squared sines between a row space and an
    aggregate, evaluated through the aggregate's null-space basis.

    One factor per column of ``v_range``; a null space too small to host
    them all forces structural zeros, hence -inf.  Sines at or below the
    rank tolerance count as contained (also -inf).
    """
    m = v_range.shape[1]
    if v_null.shape[1] < m:
        return float("-inf")
    s = np.linalg.svd(v_null.conj().T @ v_range, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    if s.size < m or s.min() <= tol:
        return float("-inf")
    return float(2.0 * np.sum(np.log2(s)))


def capacity_gain(
    hbar_k,
    rho_k: float,
    h_subset,
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> float:
    """High-SNR rate gained by adding the candidate to the subset.

    ``log2(rho/sigma_n2 * det(hbar hbar^H) * sin^2 psi)`` where the
    squared-sine geometrical angle is taken between the candidate's row
    space and the subset's aggregate row space.  An empty subset leaves
    the angle factor at 1; a candidate fully inside the subset span
    returns -inf ("no gain").
    """
    hb = np.asarray(hbar_k, dtype=complex)
    hs = np.asarray(h_subset, dtype=complex)
    m_t = hb.shape[1]
    v_null = null_space_basis(hs, m_t, tol)
    v1 = _thin_right_basis(hb)
    return (
        _log2_pos(rho_k / sigma_n2)
        + _log2_det_gram(hb)
        + _log2_sin2_product(v_null, v1)
    )


def capacity_loss(
    hbar_k,
    subset: Sequence[UserChannel],
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> float:
    """High-SNR rate the incumbents lose to the candidate's interference.

    Sums, over each incumbent j, ``log2(rho_j/sigma_n2 * det(hbar_j
    hbar_j^H) * sin^2 psi_j * sin^2 psi_kj)`` where both squared-sine
    angles are taken against the subset with j removed (empty reductions
    contribute a factor 1).  Empty subset: 0.
    """
    if not subset:
        return 0.0
    hb_k = np.asarray(hbar_k, dtype=complex)
    m_t = hb_k.shape[1]
    v1_k = _thin_right_basis(hb_k)
    total = 0.0
    for j, user in enumerate(subset):
        reduced = [u.h for i, u in enumerate(subset) if i != j]
        stacked = np.vstack(reduced) if reduced else np.zeros((0, m_t), dtype=complex)
        v_null = null_space_basis(stacked, m_t, tol)
        term = (
            _log2_pos(user.rho / sigma_n2)
            + _log2_det_gram(user.hbar)
            + _log2_sin2_product(v_null, _thin_right_basis(user.hbar))
            + _log2_sin2_product(v_null, v1_k)
        )
        total += term
    return total


def delta_capacity(
    candidate: UserChannel,
    subset: Sequence[UserChannel],
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> DeltaCapacityReport:
    """Gain/loss decomposition of the capacity change for one candidate."""
    m_t = candidate.hbar.shape[1]
    hs = stack_channels(subset, m_t)
    v1_k = _thin_right_basis(candidate.hbar)

    v_null_s = null_space_basis(hs, m_t, tol)
    log_sin2_gain = _log2_sin2_product(v_null_s, v1_k)
    gain = _log2_pos(candidate.rho / sigma_n2) + _log2_det_gram(candidate.hbar) + log_sin2_gain

    terms = []
    loss = 0.0
    for j, user in enumerate(subset):
        reduced = [u.h for i, u in enumerate(subset) if i != j]
        stacked = np.vstack(reduced) if reduced else np.zeros((0, m_t), dtype=complex)
        v_null = null_space_basis(stacked, m_t, tol)
        lj = _log2_sin2_product(v_null, _thin_right_basis(user.hbar))
        lk = _log2_sin2_product(v_null, v1_k)
        loss += _log2_pos(user.rho / sigma_n2) + _log2_det_gram(user.hbar) + lj + lk
        terms.append((user.user_id, 2.0**lj, 2.0**lk))

    if math.isinf(gain) and gain < 0:
        delta = float("-inf")  # no gain dominates any loss
    else:
        delta = gain - loss
    return DeltaCapacityReport(
        c_gain=gain,
        c_loss=loss,
        delta=delta,
        sin2_gain=2.0**log_sin2_gain,
        loss_terms=tuple(terms),
    )


def metric_selection_full(
    candidate: UserChannel,
    subset: Sequence[UserChannel],
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> float:
    """Capacity-change criterion ``c_gain - c_loss`` in the log domain
    (maximize); reduces to the gain alone for an empty subset."""
    return delta_capacity(candidate, subset, sigma_n2, tol).delta


def metric_selection_simplified(
    hbar_k, rho_k: float, h_subset, tol: float = DEFAULT_RANK_TOL
) -> float:
    """Gain-only selection criterion (maximize):

    ``rho * det(hbar P hbar^H)`` with ``P`` the projector onto the null
    space of the subset's aggregate channel.  Zero when the candidate
    lies inside the subset span; scales linearly with ``rho``.
    """
    hb = np.asarray(hbar_k, dtype=complex)
    hs = np.asarray(h_subset, dtype=complex)
    v_null = null_space_basis(hs, hb.shape[1], tol)
    proj = hb @ v_null
    val = np.linalg.det(proj @ proj.conj().T).real
    return float(rho_k * max(val, 0.0))


def selection_simplified_sin2_form(
    hbar_k, rho_k: float, h_subset, tol: float = DEFAULT_RANK_TOL
) -> float:
    """Equivalent product form ``rho * det(hbar hbar^H) * sin^2 psi`` of
    the simplified criterion, kept for cross-checks."""
    hb = np.asarray(hbar_k, dtype=complex)
    hs = np.asarray(h_subset, dtype=complex)
    v_null = null_space_basis(hs, hb.shape[1], tol)
    v1 = _thin_right_basis(hb)
    m = v1.shape[1]
    if v_null.shape[1] < m:
        return 0.0
    s = np.clip(np.linalg.svd(v_null.conj().T @ v1, compute_uv=False), 0.0, 1.0)
    sin2 = float(np.prod(s**2))
    det_gram = np.linalg.det(hb @ hb.conj().T).real
    return float(rho_k * max(det_gram, 0.0) * sin2)


def evaluate_criterion(
    kind: CriterionKind,
    candidate: UserChannel,
    members: Sequence[UserChannel],
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> float:
    """Score a candidate against the current group members.

    Scores are orientation-normalized: higher is always better, so
    minimize-type metrics come back negated.  The random criterion has
    no score and is handled by the schedulers.
    """
    kind = CriterionKind(kind)
    if kind is CriterionKind.RANDOM:
        raise ValueError("the random criterion is resolved by the scheduler")
    if kind is CriterionKind.FROBENIUS_NORM:
        return float(np.linalg.norm(candidate.h))
    if kind is CriterionKind.SELECTION_FULL:
        return metric_selection_full(candidate, members, sigma_n2, tol)
    m_t = candidate.h.shape[1]
    hs = stack_channels(members, m_t)
    if kind is CriterionKind.SELECTION_SIMPLIFIED:
        return metric_selection_simplified(candidate.hbar, candidate.rho, hs, tol)
    if not members:
        raise ValueError(f"criterion {kind.value} needs a non-empty group")
    if kind is CriterionKind.LARGEST_PRINCIPAL_ANGLE:
        return metric_largest_principal_angle(candidate.h, hs, tol)
    if kind is CriterionKind.GEOMETRICAL_ANGLE:
        return -metric_geometrical(candidate.h, hs, tol)
    if kind is CriterionKind.GROUPING_ORIENTED:
        return -metric_grouping_oriented(candidate.h, hs, tol)
    if kind is CriterionKind.CHORDAL:
        return chordal_distance(row_space_basis(candidate.h, tol), row_space_basis(hs, tol))
    if kind is CriterionKind.COLLINEARITY:
        # Row-space projectors give equal shapes for unequal antenna counts.
        pk = projector(row_space_basis(candidate.h, tol))
        ps = projector(row_space_basis(hs, tol))
        return -collinearity(pk, ps)
    raise ValueError(f"unhandled criterion {kind!r}")
