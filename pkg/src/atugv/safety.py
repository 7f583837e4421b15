"""Collision safety: the principal-strain lower bound and a brute-force
pairwise clearance check that is independent of the bound."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Optional, Tuple

import numpy as np

from .affine import GeneralizedCoordinates
from .errors import InvalidArgumentError, ReferenceOverlapError
from .network import ReferenceConfiguration


def lambda_min(r: float, d_min: float) -> float:
    """Lower bound 2r/d_min on both principal strains: shrinking the
    closest reference pair by less than this keeps every pair of cell
    disks from overlapping."""
    if r <= 0.0:
        raise InvalidArgumentError(f"cell radius must be positive, got {r}")
    if d_min <= 2.0 * r:
        raise ReferenceOverlapError(
            f"d_min = {d_min:.6g} m must exceed the cell diameter {2 * r:.6g} m"
        )
    return 2.0 * r / d_min


@dataclass(frozen=True)
class SafetyBound:
    lambda_min: float
    cell_radius: float
    d_min: float

    @classmethod
    def from_reference(cls, cell_radius: float, reference: ReferenceConfiguration) -> "SafetyBound":
        return cls(
            lambda_min=lambda_min(cell_radius, reference.d_min),
            cell_radius=cell_radius,
            d_min=reference.d_min,
        )


@dataclass(frozen=True)
class SafetyVerdict:
    """Outcome of checking generalized coordinates against the strain bound.

    When unsafe, names the violating strain field and its value.
    """

    safe: bool
    lambda_min: float
    violating_field: Optional[str] = None
    violating_value: Optional[float] = None

    def __bool__(self):
        return self.safe


def validate_coordinates(coords: GeneralizedCoordinates, bound: SafetyBound) -> SafetyVerdict:
    """SAFE iff both principal strains stay at or above lambda_min.

    The bound applies to min(lambda1, lambda2): that is the factor by which
    the closest reference pair can shrink.
    """
    for name in ("lambda2", "lambda1"):
        value = getattr(coords, name)
        if value < bound.lambda_min:
            return SafetyVerdict(
                safe=False,
                lambda_min=bound.lambda_min,
                violating_field=name,
                violating_value=value,
            )
    return SafetyVerdict(safe=True, lambda_min=bound.lambda_min)


@dataclass(frozen=True)
class ClearanceReport:
    safe: bool
    min_distance: float
    closest_pair: Tuple[int, int]
    required: float

    def __bool__(self):
        return self.safe


def verify_pairwise_clearance(positions: Dict[int, np.ndarray], r: float) -> ClearanceReport:
    """Exhaustive O(N^2) clearance oracle: SAFE iff every pairwise distance
    is at least the cell diameter 2r. Independent of the strain-bound path."""
    if len(positions) < 2:
        raise InvalidArgumentError("need at least two cells")
    best_pair, best = None, np.inf
    for i, j in combinations(sorted(positions), 2):
        d = float(np.linalg.norm(positions[i] - positions[j]))
        if d < best:
            best_pair, best = (i, j), d
    return ClearanceReport(
        safe=best >= 2.0 * r,
        min_distance=best,
        closest_pair=best_pair,
        required=2.0 * r,
    )
