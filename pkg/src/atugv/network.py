"""Cell identities, layered interconnection network, reference configuration.

Cells form a layered graph: three boundary cells in layer 0 anchor an
equilateral triangle, and every interior cell has exactly three neighbors
from strictly earlier layers, so reference positions can be solved layer by
layer as plain averages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from .errors import (
    DegreeViolationError,
    InvalidArgumentError,
    LayeringViolationError,
    ReferenceOverlapError,
)


@dataclass(frozen=True)
class CellGraph:
    """Layered cell graph plus the geometry shared by every cell.

    layers[0] holds the three boundary cells; every cell in layers[l>=1] is
    interior with exactly three neighbors from earlier layers. `powered`
    defaults to everything except the last layer. `actuated[i]` names the
    two neighbor joints of interior cell i that carry motors.
    """

    layers: Tuple[FrozenSet[int], ...]
    neighbors: Dict[int, FrozenSet[int]]
    cell_radius: float
    arm_length: float
    powered: FrozenSet[int] = field(default=None)  # type: ignore[assignment]
    actuated: Dict[int, Tuple[int, int]] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        layers = tuple(frozenset(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers or len(layers[0]) != 3:
            raise InvalidArgumentError("layer 0 must contain exactly 3 boundary cells")
        cells = set()
        for layer in layers:
            if not layer:
                raise InvalidArgumentError("empty layer")
            if layer & cells:
                raise InvalidArgumentError(f"layers are not disjoint: {sorted(layer & cells)}")
            cells |= layer
        if cells != set(range(1, len(cells) + 1)):
            raise InvalidArgumentError("cells must be numbered 1..N without gaps")

        neighbors = {i: frozenset(js) for i, js in self.neighbors.items()}
        object.__setattr__(self, "neighbors", neighbors)
        layer_of = self.layer_of
        interior = cells - layers[0]
        for i in sorted(interior):
            ns = neighbors.get(i)
            if ns is None or len(ns) != 3:
                raise DegreeViolationError(
                    f"interior cell {i} must have exactly 3 neighbors, got "
                    f"{sorted(ns) if ns else ns}"
                )
            for j in ns:
                if j not in cells:
                    raise InvalidArgumentError(f"cell {i} lists unknown neighbor {j}")
                if layer_of[j] >= layer_of[i]:
                    raise LayeringViolationError(
                        f"cell {i} (layer {layer_of[i]}) lists neighbor {j} "
                        f"(layer {layer_of[j]}): neighbors must come from earlier layers"
                    )
        for i in neighbors:
            if i in layers[0]:
                raise InvalidArgumentError(f"boundary cell {i} cannot have neighbors")

        if self.cell_radius <= 0.0:
            raise InvalidArgumentError(f"cell_radius must be positive, got {self.cell_radius}")
        if self.arm_length <= 0.0:
            raise InvalidArgumentError(f"arm_length must be positive, got {self.arm_length}")

        powered = self.powered
        if powered is None:
            powered = frozenset(cells - layers[-1])
        powered = frozenset(powered)
        if not powered <= cells:
            raise InvalidArgumentError("powered set references unknown cells")
        object.__setattr__(self, "powered", powered)

        actuated = dict(self.actuated) if self.actuated else {}
        for i in sorted(interior):
            if i in actuated:
                pair = tuple(actuated[i])
                if len(pair) != 2 or pair[0] == pair[1] or not set(pair) <= neighbors[i]:
                    raise InvalidArgumentError(
                        f"actuated joints of cell {i} must be two distinct neighbors"
                    )
                actuated[i] = (min(pair), max(pair))
            else:
                actuated[i] = tuple(sorted(neighbors[i])[:2])
        for i in actuated:
            if i not in interior:
                raise InvalidArgumentError(f"cell {i} is not interior, cannot have joints")
        object.__setattr__(self, "actuated", actuated)

    @property
    def cells(self) -> Tuple[int, ...]:
        return tuple(range(1, sum(len(layer) for layer in self.layers) + 1))

    @property
    def layer_of(self) -> Dict[int, int]:
        return {i: l for l, layer in enumerate(self.layers) for i in layer}

    @property
    def boundary(self) -> FrozenSet[int]:
        return self.layers[0]

    @property
    def interior(self) -> Tuple[int, ...]:
        boundary = self.layers[0]
        return tuple(i for i in self.cells if i not in boundary)

    @property
    def unpowered(self) -> FrozenSet[int]:
        return frozenset(set(self.cells) - self.powered)

    @property
    def reach(self) -> float:
        """Maximum joint separation the two-arm mechanism can span."""
        return 2.0 * (self.arm_length + self.cell_radius)


@dataclass(frozen=True)
class LayeredNetwork:
    """Neural-network view of the cell graph: neuron sets per layer and,
    for each neuron, the previous-layer inputs (three neighbors for a cell
    entering at this layer, a pass-through otherwise)."""

    neurons: Tuple[FrozenSet[int], ...]
    inputs: Tuple[Dict[int, FrozenSet[int]], ...]


def build_layered_network(graph: CellGraph) -> LayeredNetwork:
    """Unfold the cell graph into its layered network representation."""
    layers = graph.layers
    last = len(layers) - 1
    neurons = []
    for l, layer in enumerate(layers):
        if l == 0 or l == last:
            neurons.append(layer)
        else:
            neurons.append(neurons[l - 1] | layer)
    inputs = [dict() for _ in layers]
    for l in range(1, len(layers)):
        for i in neurons[l]:
            if i in layers[l]:
                inputs[l][i] = graph.neighbors[i]
            else:
                inputs[l][i] = frozenset({i})
    return LayeredNetwork(neurons=tuple(neurons), inputs=tuple(inputs))


@dataclass(frozen=True)
class ReferenceConfiguration:
    """Reference cell positions a_i and their minimum pairwise separation."""

    positions: Dict[int, np.ndarray]
    d_min: float
    side_length: float


def min_separation(positions: Dict[int, np.ndarray]) -> float:
    """Minimum Euclidean distance over all unordered cell pairs."""
    if len(positions) < 2:
        raise InvalidArgumentError("need at least two cells")
    return min(
        float(np.linalg.norm(positions[i] - positions[j]))
        for i, j in combinations(sorted(positions), 2)
    )


def closest_pair(positions: Dict[int, np.ndarray]) -> Tuple[Tuple[int, int], float]:
    """The cell pair attaining the minimum separation, with its distance."""
    if len(positions) < 2:
        raise InvalidArgumentError("need at least two cells")
    best = None
    for i, j in combinations(sorted(positions), 2):
        d = float(np.linalg.norm(positions[i] - positions[j]))
        if best is None or d < best[1]:
            best = ((i, j), d)
    return best


def solve_reference_positions(
    graph: CellGraph,
    side_length: float = 1.0,
    anchor: Optional[Dict[int, np.ndarray]] = None,
) -> ReferenceConfiguration:
    """Place boundary cells on an equilateral triangle and each interior
    cell at the average of its three neighbors, layer by layer.

    The default anchor puts the lowest-numbered boundary cell at the
    origin and the next on the +x axis; any other pose is reachable
    through the affine transform itself.
    """
    if side_length <= 0.0:
        raise InvalidArgumentError(f"side_length must be positive, got {side_length}")
    boundary = sorted(graph.boundary)
    positions: Dict[int, np.ndarray] = {}
    if anchor is not None:
        if set(anchor) != set(boundary):
            raise InvalidArgumentError("anchor must place exactly the boundary cells")
        for i in boundary:
            positions[i] = np.asarray(anchor[i], dtype=float)
    else:
        s = side_length
        positions[boundary[0]] = np.array([0.0, 0.0])
        positions[boundary[1]] = np.array([s, 0.0])
        positions[boundary[2]] = np.array([0.5 * s, 0.5 * math.sqrt(3.0) * s])
    for layer in graph.layers[1:]:
        for i in sorted(layer):
            ns = sorted(graph.neighbors[i])
            positions[i] = sum(positions[j] for j in ns) / 3.0
    d_min = min_separation(positions)
    if d_min <= 2.0 * graph.cell_radius:
        raise ReferenceOverlapError(
            f"reference separation {d_min:.6g} m does not exceed the cell "
            f"diameter {2.0 * graph.cell_radius:.6g} m"
        )
    return ReferenceConfiguration(positions=positions, d_min=d_min, side_length=side_length)
