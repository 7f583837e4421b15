"""Elbow-joint kinematics of the two-arm connection mechanism.

Both arms of a joint have length L and attach at the cell rims, so a
cell separation d corresponds to the elbow angle 2*asin(d / (2(L+r))).
Unpowered cells are positioned by intersecting the two distance circles
implied by their actuated elbow angles.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from .errors import (
    InconsistentAnglesError,
    InvalidArgumentError,
    UnreachableSeparationError,
)

# Relative slack for "at full extension" and squared-discriminant slack for
# tangent circles; keeps the boundary cases numerically robust.
_REACH_RTOL = 1e-12
_TANGENT_ATOL = 1e-9


def elbow_angle(d: float, arm_length: float, cell_radius: float) -> float:
    """Angle between the two arms spanning a cell separation d; in [0, pi],
    0 when folded, pi at full extension 2(L+r)."""
    if arm_length <= 0.0 or cell_radius <= 0.0:
        raise InvalidArgumentError("arm_length and cell_radius must be positive")
    if not math.isfinite(d) or d < 0.0:
        raise InvalidArgumentError(f"separation must be a finite non-negative length, got {d!r}")
    reach = 2.0 * (arm_length + cell_radius)
    if d > reach * (1.0 + _REACH_RTOL):
        raise UnreachableSeparationError(
            f"separation {d:.6g} m exceeds mechanism reach {reach:.6g} m"
        )
    return 2.0 * math.asin(min(d / reach, 1.0))


def separation_from_angle(theta: float, arm_length: float, cell_radius: float) -> float:
    """Inverse of elbow_angle on [0, pi]."""
    if not 0.0 <= theta <= math.pi:
        raise InvalidArgumentError(f"elbow angle must lie in [0, pi], got {theta}")
    return 2.0 * (arm_length + cell_radius) * math.sin(0.5 * theta)


def desired_elbow_angles(
    p_i,
    p_j1,
    p_j2,
    arm_length: float,
    cell_radius: float,
) -> Tuple[float, float]:
    """Elbow angles commanded to the two actuated joints of cell i given the
    desired positions of i and its actuated neighbors j1, j2."""
    p_i = np.asarray(p_i, dtype=float)
    angles = []
    for k, p_j in enumerate((np.asarray(p_j1, dtype=float), np.asarray(p_j2, dtype=float))):
        d = float(np.linalg.norm(p_i - p_j))
        try:
            angles.append(elbow_angle(d, arm_length, cell_radius))
        except UnreachableSeparationError as exc:
            raise UnreachableSeparationError(f"joint {k + 1}: {exc}", joint=k + 1) from None
    return angles[0], angles[1]


def resolve_unpowered_position(
    p_j1,
    p_j2,
    theta1: float,
    theta2: float,
    arm_length: float,
    cell_radius: float,
    previous,
) -> np.ndarray:
    """Forward kinematics of an unpowered cell: intersect the circle of
    radius d_k = 2(L+r) sin(theta_k/2) about each actuated neighbor and pick
    the intersection closest to `previous` (the mechanism cannot jump
    between branches)."""
    c1 = np.asarray(p_j1, dtype=float)
    c2 = np.asarray(p_j2, dtype=float)
    previous = np.asarray(previous, dtype=float)
    d1 = separation_from_angle(theta1, arm_length, cell_radius)
    d2 = separation_from_angle(theta2, arm_length, cell_radius)
    delta = c2 - c1
    dist = float(np.linalg.norm(delta))
    if dist == 0.0:
        raise InconsistentAnglesError(
            "actuated neighbors coincide; cell position is not determined"
        )
    # Standard two-circle intersection in the frame of the center line.
    along = (d1 * d1 - d2 * d2 + dist * dist) / (2.0 * dist)
    h_sq = d1 * d1 - along * along
    if h_sq < -_TANGENT_ATOL:
        raise InconsistentAnglesError(
            f"elbow angles are inconsistent: circles of radii {d1:.6g} and "
            f"{d2:.6g} about neighbors {dist:.6g} m apart do not intersect"
        )
    h = math.sqrt(max(h_sq, 0.0))
    u = delta / dist
    perp = np.array([-u[1], u[0]])
    mid = c1 + along * u
    cand_a = mid + h * perp
    cand_b = mid - h * perp
    if np.linalg.norm(cand_a - previous) <= np.linalg.norm(cand_b - previous):
        return cand_a
    return cand_b
