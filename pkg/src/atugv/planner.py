"""Finite-horizon planning of the generalized coordinates.

Each coordinate is interpolated between its endpoints by an increasing
blend function with beta(t0) = 0 and beta(tf) = 1. A plan is rejected
outright if any sample violates the principal-strain safety bound or asks
a joint for a separation beyond the mechanism reach (fail-closed: no
silent clamping).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from . import kinematics
from .affine import COORD_FIELDS, AffineTransform, GeneralizedCoordinates
from .errors import DomainError, InvalidArgumentError, UnsafePlanError
from .network import CellGraph, ReferenceConfiguration
from .safety import SafetyBound, validate_coordinates

BLEND_KINDS = ("linear", "smoothstep", "smootherstep")


def blend(t: float, t0: float, tf: float, kind: str = "smoothstep") -> float:
    """Time-scaling beta(t) in [0, 1], strictly increasing on (t0, tf).

    linear: u; smoothstep: 3u^2 - 2u^3 (zero end velocity);
    smootherstep: 10u^3 - 15u^4 + 6u^5 (zero end velocity and acceleration).
    """
    if tf <= t0:
        raise InvalidArgumentError(f"tf must exceed t0, got [{t0}, {tf}]")
    if not t0 <= t <= tf:
        raise DomainError(f"t = {t} outside planning horizon [{t0}, {tf}]")
    u = (t - t0) / (tf - t0)
    if kind == "linear":
        return u
    if kind == "smoothstep":
        return u * u * (3.0 - 2.0 * u)
    if kind == "smootherstep":
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    raise InvalidArgumentError(f"unknown blend kind {kind!r}; choose from {BLEND_KINDS}")


@dataclass(frozen=True)
class PlanSpec:
    """Endpoints of the six generalized coordinates over [t0, tf]."""

    t0: float
    tf: float
    initial: GeneralizedCoordinates
    final: GeneralizedCoordinates
    blend_kind: str = "smoothstep"

    def __post_init__(self):
        if not self.tf > self.t0:
            raise InvalidArgumentError(f"tf must exceed t0, got [{self.t0}, {self.tf}]")
        if self.blend_kind not in BLEND_KINDS:
            raise InvalidArgumentError(
                f"unknown blend kind {self.blend_kind!r}; choose from {BLEND_KINDS}"
            )


def coordinates_at(spec: PlanSpec, t: float) -> GeneralizedCoordinates:
    """Convex combination of the endpoint coordinates at blend fraction beta(t)."""
    b = blend(t, spec.t0, spec.tf, spec.blend_kind)
    if b == 0.0:
        return spec.initial
    if b == 1.0:
        return spec.final
    values = {
        name: (1.0 - b) * getattr(spec.initial, name) + b * getattr(spec.final, name)
        for name in COORD_FIELDS
    }
    return GeneralizedCoordinates(**values)


@dataclass(frozen=True)
class PlannedTrajectory:
    """Sampled plan: coordinates, per-cell desired positions, and desired
    elbow angles for every interior-cell joint, at uniform times."""

    spec: PlanSpec
    graph: CellGraph
    reference: ReferenceConfiguration
    times: np.ndarray
    coords: Tuple[GeneralizedCoordinates, ...]
    positions: Dict[int, np.ndarray]  # cell -> (n_samples, 2)
    elbow_angles: Dict[Tuple[int, int], np.ndarray]  # (i, j) -> (n_samples,)
    joint_tags: Dict[Tuple[int, int], bool] = field(default_factory=dict)  # actuated?

    def desired_positions(self, t: float) -> Dict[int, np.ndarray]:
        """Desired cell positions at an arbitrary time in the horizon."""
        transform = AffineTransform.from_coordinates(coordinates_at(self.spec, t))
        return {i: transform(a) for i, a in self.reference.positions.items()}


def plan(
    spec: PlanSpec,
    graph: CellGraph,
    reference: ReferenceConfiguration,
    sample_count: int = 200,
) -> PlannedTrajectory:
    """Sample the plan uniformly, gating every sample on the strain safety
    bound and the mechanism reach of every interior-cell joint."""
    if sample_count < 2:
        raise InvalidArgumentError(f"sample_count must be at least 2, got {sample_count}")
    bound = SafetyBound.from_reference(graph.cell_radius, reference)
    times = np.linspace(spec.t0, spec.tf, sample_count)
    coords: List[GeneralizedCoordinates] = []
    cells = sorted(reference.positions)
    positions = {i: np.empty((sample_count, 2)) for i in cells}
    joints = [(i, j) for i in graph.interior for j in sorted(graph.neighbors[i])]
    joint_tags = {(i, j): j in graph.actuated[i] for i, j in joints}
    elbows = {key: np.empty(sample_count) for key in joints}

    for k, t in enumerate(times):
        c = coordinates_at(spec, float(t))
        verdict = validate_coordinates(c, bound)
        if not verdict:
            raise UnsafePlanError(
                f"plan violates the principal-strain bound at t = {t:.6g} s: "
                f"{verdict.violating_field} = {verdict.violating_value:.6g} < "
                f"lambda_min = {bound.lambda_min:.6g}",
                time=float(t),
                field=verdict.violating_field,
                value=verdict.violating_value,
                bound=bound.lambda_min,
            )
        coords.append(c)
        transform = AffineTransform.from_coordinates(c)
        for i in cells:
            positions[i][k] = transform(reference.positions[i])
        for i, j in joints:
            d = float(np.linalg.norm(positions[i][k] - positions[j][k]))
            elbows[(i, j)][k] = kinematics.elbow_angle(
                d, graph.arm_length, graph.cell_radius
            )

    return PlannedTrajectory(
        spec=spec,
        graph=graph,
        reference=reference,
        times=times,
        coords=tuple(coords),
        positions=positions,
        elbow_angles=elbows,
        joint_tags=joint_tags,
    )
