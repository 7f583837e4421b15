import math

import numpy as np
import pytest

from atugv import (
    CellGraph,
    DegreeViolationError,
    InvalidArgumentError,
    LayeringViolationError,
    ReferenceOverlapError,
    build_layered_network,
    min_separation,
    solve_reference_positions,
)

SQRT3 = math.sqrt(3.0)


class TestGraphValidation:
    def test_seven_cell_neighbor_sets(self, seven_cell):
        assert seven_cell.neighbors[4] == {1, 2, 3}
        assert seven_cell.neighbors[5] == {1, 2, 4}
        assert seven_cell.neighbors[6] == {2, 3, 4}
        assert seven_cell.neighbors[7] == {1, 3, 4}
        assert seven_cell.powered == {1, 2, 3, 4}
        assert seven_cell.unpowered == {5, 6, 7}

    def test_default_actuated_joints_are_two_lowest(self, seven_cell):
        assert seven_cell.actuated[4] == (1, 2)
        assert seven_cell.actuated[5] == (1, 2)
        assert seven_cell.actuated[6] == (2, 3)
        assert seven_cell.actuated[7] == (1, 3)

    def test_same_layer_neighbor_rejected(self):
        with pytest.raises(LayeringViolationError):
            CellGraph(
                layers=(frozenset({1, 2, 3}), frozenset({4}), frozenset({5, 6})),
                neighbors={
                    4: frozenset({1, 2, 3}),
                    5: frozenset({1, 2, 6}),  # cell 6 shares layer 2
                    6: frozenset({2, 3, 4}),
                },
                cell_radius=0.05,
                arm_length=0.25,
            )

    def test_wrong_degree_rejected(self):
        with pytest.raises(DegreeViolationError):
            CellGraph(
                layers=(frozenset({1, 2, 3}), frozenset({4})),
                neighbors={4: frozenset({1, 2})},
                cell_radius=0.05,
                arm_length=0.25,
            )

    def test_boundary_must_be_three_cells(self):
        with pytest.raises(InvalidArgumentError):
            CellGraph(
                layers=(frozenset({1, 2}),),
                neighbors={},
                cell_radius=0.05,
                arm_length=0.25,
            )


class TestLayeredNetwork:
    def test_four_cell_two_layers(self, four_cell):
        net = build_layered_network(four_cell)
        assert net.neurons == (frozenset({1, 2, 3}), frozenset({4}))
        assert net.inputs[1][4] == {1, 2, 3}

    def test_seven_cell_three_layers(self, seven_cell):
        net = build_layered_network(seven_cell)
        assert net.neurons[0] == {1, 2, 3}
        assert net.neurons[1] == {1, 2, 3, 4}  # intermediate layer passes through
        assert net.neurons[2] == {5, 6, 7}  # endpoint layer holds only its own cells
        assert net.inputs[1][4] == {1, 2, 3}
        assert net.inputs[1][1] == {1}  # pass-through
        assert net.inputs[2][5] == {1, 2, 4}
        assert net.inputs[2][6] == {2, 3, 4}
        assert net.inputs[2][7] == {1, 3, 4}


class TestReferenceConfiguration:
    def test_four_cell_centroid(self, four_cell):
        ref = solve_reference_positions(four_cell, side_length=1.0)
        np.testing.assert_allclose(ref.positions[4], [0.5, SQRT3 / 6], atol=1e-15)

    def test_seven_cell_interior_positions(self, seven_cell_reference):
        pos = seven_cell_reference.positions
        # oracle: evaluate the 1/3-average layer by layer
        np.testing.assert_allclose(pos[5], [0.5, SQRT3 / 18], atol=1e-14)
        np.testing.assert_allclose(pos[6], [2.0 / 3.0, 2 * SQRT3 / 9], atol=1e-14)
        np.testing.assert_allclose(pos[7], [1.0 / 3.0, 2 * SQRT3 / 9], atol=1e-14)

    def test_interior_averaging_residual(self, seven_cell, seven_cell_reference):
        pos = seven_cell_reference.positions
        for i in seven_cell.interior:
            avg = sum(pos[j] for j in seven_cell.neighbors[i]) / 3.0
            assert np.linalg.norm(pos[i] - avg) <= 1e-10

    def test_interior_inside_neighbor_hull(self, seven_cell, seven_cell_reference):
        # a strict 1/3-convex combination lies inside the neighbor triangle
        pos = seven_cell_reference.positions
        for i in seven_cell.interior:
            tri = [pos[j] for j in sorted(seven_cell.neighbors[i])]
            a = np.column_stack([tri[1] - tri[0], tri[2] - tri[0]])
            w = np.linalg.solve(a, pos[i] - tri[0])
            assert 0.0 < w[0] < 1.0 and 0.0 < w[1] < 1.0 and w[0] + w[1] < 1.0

    def test_seven_cell_d_min(self, seven_cell_reference):
        assert abs(seven_cell_reference.d_min - SQRT3 / 9) < 1e-12

    def test_four_cell_d_min(self, four_cell):
        ref = solve_reference_positions(four_cell, side_length=1.0)
        assert abs(ref.d_min - 1.0 / SQRT3) < 1e-12

    def test_overlapping_reference_rejected(self, seven_cell):
        with pytest.raises(ReferenceOverlapError):
            solve_reference_positions(seven_cell, side_length=0.1)

    def test_custom_anchor(self, four_cell):
        anchor = {1: [2.0, 1.0], 2: [3.0, 1.0], 3: [2.5, 1.0 + SQRT3 / 2]}
        ref = solve_reference_positions(four_cell, side_length=1.0, anchor=anchor)
        np.testing.assert_allclose(ref.positions[4], [2.5, 1.0 + SQRT3 / 6], atol=1e-14)


class TestMinSeparation:
    def test_two_cells(self):
        assert min_separation({1: np.array([0.0, 0.0]), 2: np.array([1.0, 0.0])}) == 1.0

    def test_matches_brute_force(self, seven_cell_reference):
        pos = seven_cell_reference.positions
        cells = sorted(pos)
        brute = min(
            float(np.linalg.norm(pos[i] - pos[j]))
            for i in cells
            for j in cells
            if i < j
        )
        assert min_separation(pos) == brute
