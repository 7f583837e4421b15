import math

import numpy as np
import pytest

from atugv import (
    DomainError,
    GeneralizedCoordinates,
    InvalidArgumentError,
    PlanSpec,
    UnreachableSeparationError,
    UnsafePlanError,
    blend,
    coordinates_at,
    jacobian,
    plan,
    verify_pairwise_clearance,
)

IDENTITY = GeneralizedCoordinates.identity()
SIM_FINAL = GeneralizedCoordinates(0.9, 0.8, 0.707, 0.3, 1.0, 1.0)
EXP_FINAL = GeneralizedCoordinates(0.9, 0.8, 0.2, 0.15, 1.0, 1.0)


class TestBlend:
    @pytest.mark.parametrize("kind", ["linear", "smoothstep", "smootherstep"])
    def test_endpoints(self, kind):
        assert blend(0.0, 0.0, 10.0, kind) == 0.0
        assert blend(10.0, 0.0, 10.0, kind) == 1.0

    def test_smoothstep_midpoint(self):
        assert blend(5.0, 0.0, 10.0, "smoothstep") == 0.5

    @pytest.mark.parametrize("kind", ["linear", "smoothstep", "smootherstep"])
    def test_strictly_increasing(self, kind):
        ts = np.linspace(0.0, 10.0, 101)
        vals = [blend(t, 0.0, 10.0, kind) for t in ts]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_outside_horizon_rejected(self):
        with pytest.raises(DomainError):
            blend(-0.1, 0.0, 10.0)
        with pytest.raises(DomainError):
            blend(10.1, 0.0, 10.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(InvalidArgumentError):
            blend(1.0, 0.0, 10.0, "cubic")


class TestCoordinatesAt:
    def test_final_time_gives_simulation_row(self):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        assert coordinates_at(spec, 10.0) == SIM_FINAL

    def test_initial_time_gives_defaults(self):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        assert coordinates_at(spec, 0.0) == IDENTITY

    def test_linear_midpoint_experiment_row(self):
        spec = PlanSpec(
            t0=0.0, tf=20.0, initial=IDENTITY, final=EXP_FINAL, blend_kind="linear"
        )
        mid = coordinates_at(spec, 10.0)
        assert abs(mid.lambda1 - 0.95) < 1e-15
        assert abs(mid.lambda2 - 0.9) < 1e-15
        assert abs(mid.sigma_r - 0.1) < 1e-15
        assert abs(mid.sigma_d - 0.075) < 1e-15
        assert abs(mid.d1 - 0.5) < 1e-15
        assert abs(mid.d2 - 0.5) < 1e-15

    def test_endpoint_exactness_linear(self):
        spec = PlanSpec(
            t0=2.0, tf=7.0, initial=IDENTITY, final=SIM_FINAL, blend_kind="linear"
        )
        assert coordinates_at(spec, 2.0) == IDENTITY
        assert coordinates_at(spec, 7.0) == SIM_FINAL


class TestPlan:
    def test_identity_plan_keeps_reference(self, seven_cell, seven_cell_reference):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=IDENTITY)
        traj = plan(spec, seven_cell, seven_cell_reference, sample_count=20)
        for i, a in seven_cell_reference.positions.items():
            np.testing.assert_allclose(traj.positions[i], np.tile(a, (20, 1)), atol=1e-14)

    def test_positions_match_affine_oracle(self, seven_cell, seven_cell_reference):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        traj = plan(spec, seven_cell, seven_cell_reference, sample_count=30)
        for k, c in enumerate(traj.coords):
            q = jacobian(c)
            for i, a in seven_cell_reference.positions.items():
                expected = [
                    q[0, 0] * a[0] + q[0, 1] * a[1] + c.d1,
                    q[1, 0] * a[0] + q[1, 1] * a[1] + c.d2,
                ]
                np.testing.assert_allclose(traj.positions[i][k], expected, atol=1e-12)

    def test_relative_positions_depend_only_on_jacobian(
        self, seven_cell, seven_cell_reference
    ):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        traj = plan(spec, seven_cell, seven_cell_reference, sample_count=25)
        cells = sorted(seven_cell_reference.positions)
        for k, c in enumerate(traj.coords):
            q = jacobian(c)
            for i in cells:
                for j in cells:
                    if i >= j:
                        continue
                    lhs = traj.positions[i][k] - traj.positions[j][k]
                    rhs = q @ (
                        seven_cell_reference.positions[i]
                        - seven_cell_reference.positions[j]
                    )
                    np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_unsafe_final_strain_rejected(self, seven_cell, seven_cell_reference):
        unsafe = GeneralizedCoordinates(0.9, 0.4, 0.0, 0.0, 0.0, 0.0)
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=unsafe)
        with pytest.raises(UnsafePlanError) as excinfo:
            plan(spec, seven_cell, seven_cell_reference, sample_count=50)
        assert excinfo.value.field == "lambda2"
        assert excinfo.value.time is not None

    def test_reach_limit_rejected(self, seven_cell_reference):
        from conftest import make_seven_cell

        short_arms = make_seven_cell(cell_radius=0.05, arm_length=0.2)  # reach 0.5
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=IDENTITY)
        with pytest.raises(UnreachableSeparationError):
            plan(spec, short_arms, seven_cell_reference, sample_count=10)

    def test_accepted_plan_clears_everywhere(self, seven_cell, seven_cell_reference):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        traj = plan(spec, seven_cell, seven_cell_reference, sample_count=100)
        for k in range(len(traj.times)):
            sample = {i: traj.positions[i][k] for i in traj.positions}
            assert verify_pairwise_clearance(sample, seven_cell.cell_radius).safe

    def test_monotone_coordinates(self, seven_cell, seven_cell_reference):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        traj = plan(spec, seven_cell, seven_cell_reference, sample_count=80)
        from atugv.affine import COORD_FIELDS

        for name in COORD_FIELDS:
            series = np.array([getattr(c, name) for c in traj.coords])
            diffs = np.diff(series)
            sign = np.sign(getattr(SIM_FINAL, name) - getattr(IDENTITY, name))
            assert np.all(sign * diffs >= -1e-15)

    def test_too_few_samples_rejected(self, seven_cell, seven_cell_reference):
        spec = PlanSpec(t0=0.0, tf=10.0, initial=IDENTITY, final=SIM_FINAL)
        with pytest.raises(InvalidArgumentError):
            plan(spec, seven_cell, seven_cell_reference, sample_count=1)

    def test_degenerate_horizon_rejected(self):
        with pytest.raises(InvalidArgumentError):
            PlanSpec(t0=5.0, tf=5.0, initial=IDENTITY, final=SIM_FINAL)
