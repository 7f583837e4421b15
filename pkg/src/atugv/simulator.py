"""Closed-loop simulation: powered cells track desired positions through a
proportional velocity command; unpowered cells are dragged through the
elbow-angle kinematics of their two actuated joints.

Integration is explicit Euler at fixed dt. The double-integrator model adds
a proportional inner velocity loop (acceleration = k_v * (v_cmd - v));
joint motors are assumed to track commanded angles within one timestep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from . import kinematics
from .errors import AtugvError, InvalidArgumentError
from .network import CellGraph, ReferenceConfiguration, min_separation
from .planner import PlannedTrajectory, coordinates_at

MODELS = ("single", "double")


def velocity_command(desired, actual, gain: float) -> np.ndarray:
    """Proportional velocity command v = gain * (desired - actual)."""
    if gain <= 0.0:
        raise InvalidArgumentError(f"gain must be positive, got {gain}")
    return gain * (np.asarray(desired, dtype=float) - np.asarray(actual, dtype=float))


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    model: str = "single"
    alpha: float = 10.0  # position-loop gain [1/s]
    k_v: float = 20.0  # velocity-loop gain for the double-integrator [1/s]
    initial_offsets: Optional[Dict[int, np.ndarray]] = None

    def __post_init__(self):
        if self.dt <= 0.0:
            raise InvalidArgumentError(f"dt must be positive, got {self.dt}")
        if self.model not in MODELS:
            raise InvalidArgumentError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.alpha <= 0.0 or self.k_v <= 0.0:
            raise InvalidArgumentError("gains must be positive")
        if self.alpha * self.dt >= 2.0:
            raise InvalidArgumentError(
                f"alpha * dt = {self.alpha * self.dt:.3g} >= 2 is unstable "
                "under explicit Euler"
            )


@dataclass
class SimState:
    positions: Dict[int, np.ndarray]
    velocities: Dict[int, np.ndarray]  # powered cells, double-integrator only

    def copy(self) -> "SimState":
        return SimState(
            positions={i: p.copy() for i, p in self.positions.items()},
            velocities={i: v.copy() for i, v in self.velocities.items()},
        )


@dataclass(frozen=True)
class SimulationTrace:
    """Everything recorded per step: actual/desired positions, velocity
    commands, elbow angles (commanded and realized), error norms, and the
    brute-force minimum clearance."""

    times: np.ndarray
    cells: Tuple[int, ...]
    powered: Tuple[int, ...]
    actual: Dict[int, np.ndarray]  # cell -> (n_steps, 2)
    desired: Dict[int, np.ndarray]
    velocity_commands: Dict[int, np.ndarray]  # powered cell -> (n_steps, 2)
    elbow_desired: Dict[Tuple[int, int], np.ndarray]
    elbow_actual: Dict[Tuple[int, int], np.ndarray]
    errors: Dict[int, np.ndarray]  # cell -> (n_steps,)
    min_clearance: np.ndarray
    cell_radius: float

    @property
    def terminal_errors(self) -> Dict[int, float]:
        return {i: float(self.errors[i][-1]) for i in self.cells}

    @property
    def clearance_safe(self) -> bool:
        return bool(np.min(self.min_clearance) >= 2.0 * self.cell_radius)


def _desired_at(trajectory: PlannedTrajectory, t: float):
    coords = coordinates_at(trajectory.spec, t)
    from .affine import AffineTransform

    transform = AffineTransform.from_coordinates(coords)
    return {i: transform(a) for i, a in trajectory.reference.positions.items()}


def step(
    state: SimState,
    trajectory: PlannedTrajectory,
    t: float,
    config: SimConfig,
) -> SimState:
    """Advance one timestep from time t to t + dt.

    Powered cells integrate the commanded velocity; unpowered cells are
    then re-resolved, in layer order, from the updated actual positions of
    their actuated neighbors and the elbow angles commanded for t + dt.
    """
    graph = trajectory.graph
    dt = config.dt
    desired_now = _desired_at(trajectory, t)
    t_next = min(t + dt, trajectory.spec.tf)
    desired_next = _desired_at(trajectory, t_next)

    nxt = state.copy()
    for i in sorted(graph.powered):
        v_cmd = velocity_command(desired_now[i], state.positions[i], config.alpha)
        if config.model == "single":
            nxt.positions[i] = state.positions[i] + dt * v_cmd
        else:
            accel = config.k_v * (v_cmd - state.velocities[i])
            nxt.velocities[i] = state.velocities[i] + dt * accel
            nxt.positions[i] = state.positions[i] + dt * state.velocities[i]

    for layer in graph.layers:
        for i in sorted(layer & graph.unpowered):
            j1, j2 = graph.actuated[i]
            theta1, theta2 = kinematics.desired_elbow_angles(
                desired_next[i],
                desired_next[j1],
                desired_next[j2],
                graph.arm_length,
                graph.cell_radius,
            )
            nxt.positions[i] = kinematics.resolve_unpowered_position(
                nxt.positions[j1],
                nxt.positions[j2],
                theta1,
                theta2,
                graph.arm_length,
                graph.cell_radius,
                previous=state.positions[i],
            )
    return nxt


def run(
    graph: CellGraph,
    reference: ReferenceConfiguration,
    trajectory: PlannedTrajectory,
    config: SimConfig,
) -> SimulationTrace:
    """Simulate the full horizon and record a deterministic trace."""
    if trajectory.graph is not graph and trajectory.graph != graph:
        raise InvalidArgumentError("trajectory was planned for a different graph")
    t0, tf = trajectory.spec.t0, trajectory.spec.tf
    horizon = tf - t0
    if config.dt > horizon / 10.0:
        raise InvalidArgumentError(
            f"dt = {config.dt} must not exceed a tenth of the horizon {horizon:.6g} s"
        )
    n_steps = int(round(horizon / config.dt))
    if abs(n_steps * config.dt - horizon) > 1e-9:
        raise InvalidArgumentError(
            f"dt = {config.dt} must evenly divide the horizon {horizon:.6g} s"
        )

    cells = tuple(sorted(reference.positions))
    powered = tuple(sorted(graph.powered))
    offsets = config.initial_offsets or {}
    state = SimState(
        positions={
            i: reference.positions[i] + np.asarray(offsets.get(i, (0.0, 0.0)), dtype=float)
            for i in cells
        },
        velocities={i: np.zeros(2) for i in powered},
    )

    joints = [(i, j) for i in graph.interior for j in sorted(graph.neighbors[i])]
    n_rec = n_steps + 1
    times = t0 + config.dt * np.arange(n_rec)
    times[-1] = tf
    actual = {i: np.empty((n_rec, 2)) for i in cells}
    desired = {i: np.empty((n_rec, 2)) for i in cells}
    v_cmd_rec = {i: np.empty((n_rec, 2)) for i in powered}
    elbow_des = {key: np.empty(n_rec) for key in joints}
    elbow_act = {key: np.empty(n_rec) for key in joints}
    errors = {i: np.empty(n_rec) for i in cells}
    clearance = np.empty(n_rec)
    reach = graph.reach

    for k in range(n_rec):
        t = float(times[k])
        des = _desired_at(trajectory, t)
        for i in cells:
            actual[i][k] = state.positions[i]
            desired[i][k] = des[i]
            errors[i][k] = np.linalg.norm(des[i] - state.positions[i])
        for i in powered:
            v_cmd_rec[i][k] = velocity_command(des[i], state.positions[i], config.alpha)
        for i, j in joints:
            d_des = float(np.linalg.norm(des[i] - des[j]))
            elbow_des[(i, j)][k] = kinematics.elbow_angle(
                d_des, graph.arm_length, graph.cell_radius
            )
            d_act = float(np.linalg.norm(state.positions[i] - state.positions[j]))
            if d_act > reach:
                elbow_act[(i, j)][k] = math.nan
            else:
                elbow_act[(i, j)][k] = kinematics.elbow_angle(
                    d_act, graph.arm_length, graph.cell_radius
                )
        clearance[k] = min_separation(state.positions)
        if k < n_steps:
            try:
                state = step(state, trajectory, t, config)
            except AtugvError as exc:
                raise type(exc)(f"step {k} (t = {t:.6g} s): {exc}") from exc

    return SimulationTrace(
        times=times,
        cells=cells,
        powered=powered,
        actual=actual,
        desired=desired,
        velocity_commands=v_cmd_rec,
        elbow_desired=elbow_des,
        elbow_actual=elbow_act,
        errors=errors,
        min_clearance=clearance,
        cell_radius=graph.cell_radius,
    )
